#pragma once

#include <span>
#include <string_view>

namespace intbox::simd {

/**
 * Inner-product kernels behind the convolution quadrature of the open-loop estimators.
 *
 * Every variant accumulates in four interleaved lanes (element i goes to lane i % 4),
 * combines the lanes as (l0 + l1) + (l2 + l3), then adds the tail sequentially. All
 * variants perform the same IEEE operations in the same order, so results are
 * bit-identical whatever ISA is dispatched; golden CSVs do not depend on the host CPU.
 */
enum class Isa { Scalar, Avx2, Neon };

/// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

/// sum_i |k[i]| * w[i]
double abs_dot(std::span<const double> k, std::span<const double> w);

/// ISA used by dot/abs_dot. Chosen on first use: INTBOX_SIMD=scalar|avx2|neon, else the best available.
Isa active_isa();

/// Overrides dispatch. Throws InvalidArgument when the ISA is not available on this host.
void set_isa(Isa isa);

bool isa_available(Isa isa);

std::string_view isa_name(Isa isa);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double abs_dot(std::span<const double> k, std::span<const double> w);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double abs_dot(std::span<const double> k, std::span<const double> w);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(std::span<const double> a, std::span<const double> b);
double abs_dot(std::span<const double> k, std::span<const double> w);
}  // namespace neon
#endif

}  // namespace intbox::simd
