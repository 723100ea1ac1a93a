#include <cmath>
#include <cstddef>

#include "intbox/simd/kernels.hpp"

namespace intbox::simd::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t n4 = n - n % 4;
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    for (std::size_t i = 0; i < n4; i += 4) {
        l0 = l0 + a[i] * b[i];
        l1 = l1 + a[i + 1] * b[i + 1];
        l2 = l2 + a[i + 2] * b[i + 2];
        l3 = l3 + a[i + 3] * b[i + 3];
    }
    double s = (l0 + l1) + (l2 + l3);
    for (std::size_t i = n4; i < n; ++i) {
        s = s + a[i] * b[i];
    }
    return s;
}

double abs_dot(std::span<const double> k, std::span<const double> w) {
    const std::size_t n = k.size();
    const std::size_t n4 = n - n % 4;
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    for (std::size_t i = 0; i < n4; i += 4) {
        l0 = l0 + std::fabs(k[i]) * w[i];
        l1 = l1 + std::fabs(k[i + 1]) * w[i + 1];
        l2 = l2 + std::fabs(k[i + 2]) * w[i + 2];
        l3 = l3 + std::fabs(k[i + 3]) * w[i + 3];
    }
    double s = (l0 + l1) + (l2 + l3);
    for (std::size_t i = n4; i < n; ++i) {
        s = s + std::fabs(k[i]) * w[i];
    }
    return s;
}

}  // namespace intbox::simd::scalar
