#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intbox/interval.hpp"
#include "intbox/mat.hpp"

namespace intbox {

/// x' = A x + B w,  y = C x + v.
class LtiSystem {
   public:
    LtiSystem(Mat A, Mat B, std::optional<Mat> C = std::nullopt);

    [[nodiscard]] const Mat& A() const { return A_; }
    [[nodiscard]] const Mat& B() const { return B_; }
    [[nodiscard]] const std::optional<Mat>& C() const { return C_; }
    /// Throws InvalidArgument when the system has no output matrix.
    [[nodiscard]] const Mat& require_C() const;

    [[nodiscard]] Eigen::Index n() const { return A_.rows(); }
    [[nodiscard]] Eigen::Index nw() const { return B_.cols(); }
    [[nodiscard]] Eigen::Index ny() const { return C_ ? C_->rows() : 0; }

   private:
    Mat A_, B_;
    std::optional<Mat> C_;
};

/// Uniform grid t_k = k * step, k = 0..count-1.
class TimeGrid {
   public:
    TimeGrid(double step, std::size_t count);
    /// Grid from 0 to horizon. The horizon must be an integer multiple of step (to 1e-9 relative).
    static TimeGrid from_horizon(double horizon, double step);

    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] std::size_t size() const { return count_; }
    [[nodiscard]] double operator[](std::size_t k) const { return static_cast<double>(k) * step_; }
    [[nodiscard]] double horizon() const { return (*this)[count_ - 1]; }
    [[nodiscard]] std::vector<double> times() const;

    /// Number of steps equal to `duration`; throws when duration is not a multiple of step.
    [[nodiscard]] std::size_t steps_in(double duration) const;

   private:
    double step_;
    std::size_t count_;
};

/// Fixed-step classical Runge-Kutta; each grid step is split into `substeps` RK4 steps.
struct OdeSpec {
    int substeps = 4;
    void validate() const;
};

/// Center/radius trajectory produced by an estimator on a grid.
struct EstimatorRun {
    std::string method;
    std::map<std::string, double> params;
    std::vector<double> times;
    std::vector<Vec> centers;
    std::vector<Vec> radii;
    /// Estimator satisfies the boundedness requirement for unbounded horizons.
    bool bibo_certified = false;
    std::vector<std::string> notes;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] Eigen::Index dimension() const { return centers.empty() ? 0 : centers.front().size(); }
    [[nodiscard]] Vec lower(std::size_t k) const { return centers[k] - radii[k]; }
    [[nodiscard]] Vec upper(std::size_t k) const { return centers[k] + radii[k]; }
    [[nodiscard]] IntervalBox box(std::size_t k) const { return IntervalBox(centers[k], radii[k]); }
};

}  // namespace intbox
