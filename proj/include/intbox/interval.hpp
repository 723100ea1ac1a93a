#pragma once

#include <functional>
#include <vector>

#include "intbox/mat.hpp"
#include "intbox/signals.hpp"

namespace intbox {

/**
 * @brief Axis-aligned box in R^n with both (lower, upper) and (center, radius) views.
 *
 * Both views are stored. A box built from bounds returns those bounds bit-for-bit, so
 * from_bounds(b.lower(), b.upper()) reproduces b exactly.
 */
class IntervalBox {
   public:
    IntervalBox(Vec center, Vec radius);
    static IntervalBox from_bounds(const Vec& lower, const Vec& upper);

    [[nodiscard]] Eigen::Index dimension() const { return center_.size(); }
    [[nodiscard]] const Vec& center() const { return center_; }
    [[nodiscard]] const Vec& radius() const { return radius_; }
    [[nodiscard]] const Vec& lower() const { return lower_; }
    [[nodiscard]] const Vec& upper() const { return upper_; }

    /// center - radius - slack <= x <= center + radius + slack componentwise.
    [[nodiscard]] bool contains(const Vec& x, double slack = 0.0) const;

   private:
    IntervalBox() = default;
    Vec center_, radius_, lower_, upper_;
};

enum class QuadratureRule { Trapezoid, Simpson };

struct QuadratureSpec {
    double step = 1e-3;
    QuadratureRule rule = QuadratureRule::Trapezoid;
    /// Panels per step. Estimators integrate on a grid refined by this factor.
    int substeps = 1;

    void validate() const;
    [[nodiscard]] double panel() const { return step / substeps; }
};

using MatFn = std::function<Eigen::MatrixXd(double)>;

/// One integral term  int_{t0}^{t1} H(tau) w(tau) dtau  with w(tau) inside w_box.
struct WeightedKernelTerm {
    MatFn H;  // n x n_w
    BoxSignal w_box;
    double t0;
    double t1;
};

/**
 * Tightest box enclosing { F z + sum_k int H_k w_k : z in z_box, w_k(tau) in w_box_k(tau) }:
 *   c = F c_z + sum int H c_w,   p = |F| p_z + sum int |H| p_w,
 * integrals by the composite rule in `quad`.
 */
IntervalBox tightest_affine_image(const Mat& F, const IntervalBox& z_box,
                                  const std::vector<WeightedKernelTerm>& terms,
                                  const QuadratureSpec& quad = {});

enum class Sense { Max, Min };

struct ExtremalRealization {
    Vec z;
    std::vector<VecFn> w;  // one admissible signal per term
};

/**
 * Admissible inputs attaining the upper (Max) or lower (Min) bound of coordinate `coord`
 * (0-based) of tightest_affine_image: z = c_z +/- P_z sign(f_i), w(tau) = c_w +/- P_w sign(h_i(tau)).
 * sign(0) is taken as +1.
 */
ExtremalRealization extremal_realizers(const Mat& F, const IntervalBox& z_box,
                                       const std::vector<WeightedKernelTerm>& terms,
                                       Eigen::Index coord, Sense sense);

/// F z + sum int H_k w_k for concrete z and w_k, with the same quadrature as tightest_affine_image.
Vec evaluate_affine_map(const Mat& F, const Vec& z, const std::vector<WeightedKernelTerm>& terms,
                        const std::vector<VecFn>& w, const QuadratureSpec& quad = {});

namespace detail {
/// Nodes/weights of the composite rule on [t0, t1] with panels no wider than quad.step.
void quadrature_nodes(double t0, double t1, const QuadratureSpec& quad, std::vector<double>& nodes,
                      std::vector<double>& weights);
}  // namespace detail

}  // namespace intbox
