#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "intbox/mat.hpp"

namespace intbox {

using VecFn = std::function<Vec(double)>;

/**
 * @brief Time-dependent box [c(t) - p(t), c(t) + p(t)] for an uncertain signal.
 *
 * Used for disturbances w, measurement noise v and the stacked closed-loop input s.
 * The center and radius callables must be pure; estimator runs evaluate them from
 * several threads. Radius values are checked (dimension, sign) on every query.
 */
class BoxSignal {
   public:
    BoxSignal(Eigen::Index dimension, VecFn center, VecFn radius,
              std::optional<Vec> sup_radius = std::nullopt, bool constant_radius = false);

    [[nodiscard]] Eigen::Index dimension() const { return dim_; }
    [[nodiscard]] Vec center(double t) const;
    [[nodiscard]] Vec radius(double t) const;
    [[nodiscard]] Vec lower(double t) const { return center(t) - radius(t); }
    [[nodiscard]] Vec upper(double t) const { return center(t) + radius(t); }

    /// Componentwise supremum of the radius over t >= 0, when known.
    [[nodiscard]] const std::optional<Vec>& sup_radius() const { return sup_; }

    /// True when radius(t) does not depend on t.
    [[nodiscard]] bool has_constant_radius() const { return constant_radius_; }

   private:
    Eigen::Index dim_;
    VecFn center_;
    VecFn radius_;
    std::optional<Vec> sup_;
    bool constant_radius_;
};

/// Scalar signal with center amp_c sin(2 pi freq_c t) and radius |amp_p sin(2 pi freq_p t)| (Hz).
BoxSignal sinusoid_box_signal(double amp_c, double freq_c, double amp_p, double freq_p);

/// Time-invariant box.
BoxSignal constant_box_signal(const Vec& center, const Vec& radius);

/// Dense-grid maximum of the radius on [0, horizon]. No inflation.
Vec scan_sup_radius(const BoxSignal& sig, double horizon, double step);

struct HullSearch {
    double horizon;
    double step = 1e-3;
    double inflation = 0.01;  // relative safety factor applied to the scanned maximum
};

/**
 * Same center, radius replaced by its componentwise supremum. Uses the declared
 * sup_radius when present; otherwise scans with `search` and inflates. Throws
 * InvalidArgument when neither is available.
 */
BoxSignal constant_radius_hull(const BoxSignal& sig, std::optional<HullSearch> search = std::nullopt);

enum class Interpolation { ZeroOrderHold, Linear };

/// Signal known on a strictly increasing time grid (e.g. measured outputs y).
class SampledSignal {
   public:
    SampledSignal(std::vector<double> times, std::vector<Vec> values,
                  Interpolation interp = Interpolation::Linear);

    [[nodiscard]] Eigen::Index dimension() const { return values_.front().size(); }
    [[nodiscard]] double t_begin() const { return times_.front(); }
    [[nodiscard]] double t_end() const { return times_.back(); }
    [[nodiscard]] const std::vector<double>& times() const { return times_; }
    [[nodiscard]] const std::vector<Vec>& values() const { return values_; }

    /// Value at t. Throws InvalidArgument outside [t_begin, t_end].
    [[nodiscard]] Vec operator()(double t) const;

   private:
    std::vector<double> times_;
    std::vector<Vec> values_;
    Interpolation interp_;
};

/// Box signal whose center and radius are sampled signals.
BoxSignal sampled_box_signal(const SampledSignal& center, const SampledSignal& radius);

/**
 * Stacked closed-loop input s = [w; y; v]: center [c_w; y; c_v], radius [p_w; 0; p_v].
 * Queries outside y's time span throw.
 */
BoxSignal stack_closed_loop_signal(const BoxSignal& w_box, const BoxSignal& v_box, const SampledSignal& y);

}  // namespace intbox
