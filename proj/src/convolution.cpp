#include "convolution.hpp"

#include <cmath>
#include <span>

#include "intbox/error.hpp"
#include "intbox/simd/kernels.hpp"

namespace intbox::detail {

std::vector<Eigen::MatrixXd> transition_table(const Eigen::MatrixXd& A, double h, std::size_t count,
                                              std::size_t stride) {
    constexpr std::size_t kResync = 256;
    std::vector<Eigen::MatrixXd> out;
    out.reserve((count + stride - 1) / stride);
    const Eigen::MatrixXd step = detail::expm(A * h);
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    for (std::size_t l = 0; l < count; ++l) {
        if (l > 0) {
            phi = (l % kResync == 0) ? detail::expm(A * (static_cast<double>(l) * h)) : Eigen::MatrixXd(phi * step);
        }
        if (l % stride == 0) {
            out.push_back(phi);
        }
    }
    return out;
}

KernelConvolution::KernelConvolution(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const BoxSignal& w,
                                     double fine_step, std::size_t last, QuadratureRule rule)
    : n_(A.rows()), nw_(B.cols()), last_(last) {
    if (w.dimension() != nw_) {
        throw DimensionError("estimator: w_box dimension must equal the number of columns of B");
    }
    const auto nodes = last + 1;
    const auto phi = transition_table(A, fine_step, nodes);

    rev_.assign(static_cast<std::size_t>(n_ * nw_), std::vector<double>(nodes));
    for (std::size_t lag = 0; lag < nodes; ++lag) {
        const Eigen::MatrixXd K = phi[lag] * B;
        for (Eigen::Index i = 0; i < n_; ++i) {
            for (Eigen::Index j = 0; j < nw_; ++j) {
                rev_[static_cast<std::size_t>(i * nw_ + j)][last - lag] = K(i, j);
            }
        }
    }

    wc_.assign(static_cast<std::size_t>(nw_), std::vector<double>(nodes));
    wp_.assign(static_cast<std::size_t>(nw_), std::vector<double>(nodes));
    for (std::size_t m = 0; m < nodes; ++m) {
        const double tau = static_cast<double>(m) * fine_step;
        // Interior weights of the composite rule; window ends are halved in center()/radius().
        const double base = rule == QuadratureRule::Trapezoid ? fine_step
                                                              : fine_step / 3.0 * (m % 2 == 1 ? 4.0 : 2.0);
        const Vec c = w.center(tau);
        const Vec p = w.radius(tau);
        for (Eigen::Index j = 0; j < nw_; ++j) {
            wc_[j][m] = base * c(j);
            wp_[j][m] = base * p(j);
        }
    }
}

Eigen::MatrixXd KernelConvolution::kernel(std::size_t lag) const {
    Eigen::MatrixXd K(n_, nw_);
    for (Eigen::Index i = 0; i < n_; ++i) {
        for (Eigen::Index j = 0; j < nw_; ++j) {
            K(i, j) = rev_[static_cast<std::size_t>(i * nw_ + j)][last_ - lag];
        }
    }
    return K;
}

Vec KernelConvolution::center(std::size_t mb, std::size_t me) const {
    Vec out = Vec::Zero(n_);
    if (me == mb) {
        return out;
    }
    const std::size_t len = me - mb + 1;
    const std::size_t offset = last_ - (me - mb);
    for (Eigen::Index i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < nw_; ++j) {
            const auto& k = rev_[static_cast<std::size_t>(i * nw_ + j)];
            const auto& wc = wc_[j];
            acc += simd::dot(std::span(k).subspan(offset, len), std::span(wc).subspan(mb, len));
            acc -= 0.5 * (k[offset] * wc[mb] + k[last_] * wc[me]);
        }
        out(i) = acc;
    }
    return out;
}

Vec KernelConvolution::radius(std::size_t mb, std::size_t me) const {
    Vec out = Vec::Zero(n_);
    if (me == mb) {
        return out;
    }
    const std::size_t len = me - mb + 1;
    const std::size_t offset = last_ - (me - mb);
    for (Eigen::Index i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < nw_; ++j) {
            const auto& k = rev_[static_cast<std::size_t>(i * nw_ + j)];
            const auto& wp = wp_[j];
            acc += simd::abs_dot(std::span(k).subspan(offset, len), std::span(wp).subspan(mb, len));
            acc -= 0.5 * (std::fabs(k[offset]) * wp[mb] + std::fabs(k[last_]) * wp[me]);
        }
        out(i) = std::max(acc, 0.0);
    }
    return out;
}

}  // namespace intbox::detail
