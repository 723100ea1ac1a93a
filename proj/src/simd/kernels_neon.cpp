#include "intbox/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

namespace intbox::simd::neon {

// Two 2-lane registers emulate the four logical lanes of the reference kernel.

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t n4 = n - n % 4;
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2)));
    }
    double s = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
               (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
    for (std::size_t i = n4; i < n; ++i) {
        s = s + a[i] * b[i];
    }
    return s;
}

double abs_dot(std::span<const double> k, std::span<const double> w) {
    const std::size_t n = k.size();
    const std::size_t n4 = n - n % 4;
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n4; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vabsq_f64(vld1q_f64(k.data() + i)), vld1q_f64(w.data() + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vabsq_f64(vld1q_f64(k.data() + i + 2)), vld1q_f64(w.data() + i + 2)));
    }
    double s = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
               (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
    for (std::size_t i = n4; i < n; ++i) {
        s = s + std::fabs(k[i]) * w[i];
    }
    return s;
}

}  // namespace intbox::simd::neon

#endif
