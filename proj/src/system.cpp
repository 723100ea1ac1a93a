#include "intbox/system.hpp"

#include <cmath>

#include "intbox/error.hpp"

namespace intbox {

LtiSystem::LtiSystem(Mat A, Mat B, std::optional<Mat> C) : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)) {
    if (!A_.is_square()) {
        throw DimensionError("LtiSystem: A must be square");
    }
    if (B_.rows() != A_.rows()) {
        throw DimensionError("LtiSystem: B must have n rows");
    }
    if (C_ && C_->cols() != A_.rows()) {
        throw DimensionError("LtiSystem: C must have n columns");
    }
}

const Mat& LtiSystem::require_C() const {
    if (!C_) {
        throw InvalidArgument("LtiSystem: output matrix C required");
    }
    return *C_;
}

TimeGrid::TimeGrid(double step, std::size_t count) : step_(step), count_(count) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidArgument("TimeGrid: step must be > 0");
    }
    if (count == 0) {
        throw InvalidArgument("TimeGrid: empty grid");
    }
}

TimeGrid TimeGrid::from_horizon(double horizon, double step) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidArgument("TimeGrid: horizon must be > 0");
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidArgument("TimeGrid: step must be > 0");
    }
    const double ratio = horizon / step;
    const double k = std::round(ratio);
    if (k < 1.0 || std::fabs(ratio - k) > 1e-9 * std::max(1.0, k)) {
        throw InvalidArgument("TimeGrid: horizon must be an integer multiple of the step");
    }
    return TimeGrid(step, static_cast<std::size_t>(k) + 1);
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(count_);
    for (std::size_t k = 0; k < count_; ++k) {
        t[k] = (*this)[k];
    }
    return t;
}

std::size_t TimeGrid::steps_in(double duration) const {
    if (!(duration > 0.0)) {
        throw InvalidArgument("TimeGrid: window length must be > 0");
    }
    const double ratio = duration / step_;
    const double k = std::round(ratio);
    if (k < 1.0 || std::fabs(ratio - k) > 1e-9 * std::max(1.0, k)) {
        throw InvalidArgument("TimeGrid: window length must be an integer multiple of the grid step");
    }
    return static_cast<std::size_t>(k);
}

void OdeSpec::validate() const {
    if (substeps < 1) {
        throw InvalidArgument("OdeSpec: substeps must be >= 1");
    }
}

}  // namespace intbox
