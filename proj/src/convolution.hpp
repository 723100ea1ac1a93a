#pragma once

#include <cstddef>
#include <vector>

#include "intbox/interval.hpp"
#include "intbox/mat.hpp"
#include "intbox/signals.hpp"

namespace intbox::detail {

/**
 * Quadrature of the variation-of-constants integrals on a uniform fine grid tau_m = m * h,
 * m = 0..last:
 *   center(mb, me) = int_{tau_mb}^{tau_me} K(tau_me - tau) c_w(tau) dtau
 *   radius(mb, me) = int_{tau_mb}^{tau_me} |K(tau_me - tau)| p_w(tau) dtau,   K(s) = e^{A s} B.
 *
 * Kernel channels K_ij are stored lag-reversed so that, for a fixed window end, the integrand
 * is a contiguous dot product against the pre-weighted input samples. Those dot products go
 * through the dispatched SIMD kernels.
 */
class KernelConvolution {
   public:
    KernelConvolution(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const BoxSignal& w, double fine_step,
                      std::size_t last, QuadratureRule rule);

    [[nodiscard]] Eigen::MatrixXd kernel(std::size_t lag) const;
    [[nodiscard]] Vec center(std::size_t mb, std::size_t me) const;
    [[nodiscard]] Vec radius(std::size_t mb, std::size_t me) const;

   private:
    Eigen::Index n_, nw_;
    std::size_t last_;
    std::vector<std::vector<double>> rev_;  // [i * nw + j][q] = K_ij((last - q) * h)
    std::vector<std::vector<double>> wc_;   // [j][m] = base_weight(m) * c_w,j(tau_m)
    std::vector<std::vector<double>> wp_;   // [j][m] = base_weight(m) * p_w,j(tau_m)
};

/// e^{A l h} for l = 0..count-1 by repeated multiplication, resynchronised with expm periodically.
std::vector<Eigen::MatrixXd> transition_table(const Eigen::MatrixXd& A, double h, std::size_t count,
                                              std::size_t stride = 1);

}  // namespace intbox::detail
