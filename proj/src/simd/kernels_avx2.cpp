#include "intbox/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace intbox::simd::avx2 {

namespace {
__attribute__((target("avx2"))) inline double combine(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}
}  // namespace

__attribute__((target("avx2"))) double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t n4 = n - n % 4;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc = _mm256_add_pd(acc, prod);
    }
    double s = combine(acc);
    for (std::size_t i = n4; i < n; ++i) {
        s = s + a[i] * b[i];
    }
    return s;
}

__attribute__((target("avx2"))) double abs_dot(std::span<const double> k, std::span<const double> w) {
    const std::size_t n = k.size();
    const std::size_t n4 = n - n % 4;
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d kabs = _mm256_andnot_pd(sign, _mm256_loadu_pd(k.data() + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(kabs, _mm256_loadu_pd(w.data() + i)));
    }
    double s = combine(acc);
    for (std::size_t i = n4; i < n; ++i) {
        s = s + std::fabs(k[i]) * w[i];
    }
    return s;
}

}  // namespace intbox::simd::avx2

#endif
