#include "intbox/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "intbox/error.hpp"

namespace intbox {

BoxSignal::BoxSignal(Eigen::Index dimension, VecFn center, VecFn radius, std::optional<Vec> sup_radius,
                     bool constant_radius)
    : dim_(dimension),
      center_(std::move(center)),
      radius_(std::move(radius)),
      sup_(std::move(sup_radius)),
      constant_radius_(constant_radius) {
    if (dim_ < 1) {
        throw InvalidArgument("BoxSignal: dimension must be >= 1");
    }
    if (!center_ || !radius_) {
        throw InvalidArgument("BoxSignal: center and radius functions are required");
    }
    if (sup_) {
        if (sup_->size() != dim_) {
            throw DimensionError("BoxSignal: sup_radius dimension mismatch");
        }
        detail::require_finite(*sup_, "BoxSignal sup_radius");
        if ((sup_->array() < 0.0).any()) {
            throw InvalidArgument("BoxSignal: negative sup_radius");
        }
    }
}

Vec BoxSignal::center(double t) const {
    Vec c = center_(t);
    if (c.size() != dim_) {
        throw DimensionError("BoxSignal: center has wrong dimension");
    }
    return c;
}

Vec BoxSignal::radius(double t) const {
    Vec p = radius_(t);
    if (p.size() != dim_) {
        throw DimensionError("BoxSignal: radius has wrong dimension");
    }
    if ((p.array() < 0.0).any()) {
        throw InvalidArgument("BoxSignal: negative radius at t=" + std::to_string(t));
    }
    return p;
}

BoxSignal sinusoid_box_signal(double amp_c, double freq_c, double amp_p, double freq_p) {
    if (!(amp_p >= 0.0)) {
        throw InvalidArgument("sinusoid_box_signal: amp_p must be >= 0");
    }
    if (!std::isfinite(amp_c) || !std::isfinite(freq_c) || !std::isfinite(amp_p) || !std::isfinite(freq_p)) {
        throw InvalidArgument("sinusoid_box_signal: non-finite parameter");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto center = [=](double t) { return Vec::Constant(1, amp_c * std::sin(two_pi * freq_c * t)); };
    auto radius = [=](double t) { return Vec::Constant(1, std::fabs(amp_p * std::sin(two_pi * freq_p * t))); };
    return BoxSignal(1, center, radius, Vec::Constant(1, amp_p), amp_p == 0.0);
}

BoxSignal constant_box_signal(const Vec& center, const Vec& radius) {
    if (center.size() != radius.size()) {
        throw DimensionError("constant_box_signal: center/radius size mismatch");
    }
    detail::require_finite(center, "constant_box_signal center");
    detail::require_finite(radius, "constant_box_signal radius");
    if ((radius.array() < 0.0).any()) {
        throw InvalidArgument("constant_box_signal: negative radius");
    }
    return BoxSignal(
        center.size(), [center](double) { return center; }, [radius](double) { return radius; }, radius, true);
}

Vec scan_sup_radius(const BoxSignal& sig, double horizon, double step) {
    if (!(horizon > 0.0) || !(step > 0.0)) {
        throw InvalidArgument("scan_sup_radius: horizon and step must be > 0");
    }
    const auto n = static_cast<long>(std::ceil(horizon / step));
    Vec sup = sig.radius(0.0);
    for (long k = 1; k <= n; ++k) {
        const double t = std::min(horizon, static_cast<double>(k) * step);
        sup = sup.cwiseMax(sig.radius(t));
    }
    return sup;
}

BoxSignal constant_radius_hull(const BoxSignal& sig, std::optional<HullSearch> search) {
    if (sig.has_constant_radius()) {
        return sig;
    }
    Vec sup;
    if (sig.sup_radius()) {
        sup = *sig.sup_radius();
    } else if (search) {
        if (search->inflation < 0.0) {
            throw InvalidArgument("constant_radius_hull: negative inflation");
        }
        sup = scan_sup_radius(sig, search->horizon, search->step) * (1.0 + search->inflation);
    } else {
        throw InvalidArgument("constant_radius_hull: supremum unknown and no search horizon given");
    }
    return BoxSignal(
        sig.dimension(), [sig](double t) { return sig.center(t); }, [sup](double) { return sup; }, sup, true);
}

SampledSignal::SampledSignal(std::vector<double> times, std::vector<Vec> values, Interpolation interp)
    : times_(std::move(times)), values_(std::move(values)), interp_(interp) {
    if (times_.empty()) {
        throw InvalidArgument("SampledSignal: empty time grid");
    }
    if (times_.size() != values_.size()) {
        throw DimensionError("SampledSignal: times/values length mismatch");
    }
    for (std::size_t k = 0; k < times_.size(); ++k) {
        if (!std::isfinite(times_[k]) || (k > 0 && !(times_[k] > times_[k - 1]))) {
            throw InvalidArgument("SampledSignal: times must be finite and strictly increasing");
        }
        if (values_[k].size() != values_.front().size() || values_[k].size() == 0) {
            throw DimensionError("SampledSignal: inconsistent value dimension");
        }
        detail::require_finite(values_[k], "SampledSignal value");
    }
}

Vec SampledSignal::operator()(double t) const {
    // Tolerate round-off at the span ends; the estimators query t = k * h exactly.
    const double eps = 1e-12 * std::max(1.0, std::fabs(times_.back()));
    if (t < times_.front() - eps || t > times_.back() + eps) {
        throw InvalidArgument("SampledSignal: t=" + std::to_string(t) + " outside [" +
                              std::to_string(times_.front()) + ", " + std::to_string(times_.back()) + "]");
    }
    if (times_.size() == 1 || t <= times_.front()) {
        return values_.front();
    }
    if (t >= times_.back()) {
        return values_.back();
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
    if (interp_ == Interpolation::ZeroOrderHold) {
        return values_[k];
    }
    const double theta = (t - times_[k]) / (times_[k + 1] - times_[k]);
    return (1.0 - theta) * values_[k] + theta * values_[k + 1];
}

BoxSignal sampled_box_signal(const SampledSignal& center, const SampledSignal& radius) {
    if (center.dimension() != radius.dimension()) {
        throw DimensionError("sampled_box_signal: center/radius dimension mismatch");
    }
    Vec sup = Vec::Zero(radius.dimension());
    for (const Vec& p : radius.values()) {
        if ((p.array() < 0.0).any()) {
            throw InvalidArgument("sampled_box_signal: negative radius sample");
        }
        sup = sup.cwiseMax(p);
    }
    // Linear and ZOH interpolation never exceed the sample maximum.
    return BoxSignal(center.dimension(), center, radius, sup);
}

BoxSignal stack_closed_loop_signal(const BoxSignal& w_box, const BoxSignal& v_box, const SampledSignal& y) {
    const Eigen::Index nw = w_box.dimension();
    const Eigen::Index ny = y.dimension();
    if (v_box.dimension() != ny) {
        throw DimensionError("stack_closed_loop_signal: v and y dimensions differ");
    }
    const Eigen::Index ns = nw + 2 * ny;
    auto center = [=](double t) {
        Vec c(ns);
        c << w_box.center(t), y(t), v_box.center(t);
        return c;
    };
    auto radius = [=](double t) {
        if (t < y.t_begin() - 1e-12 || t > y.t_end() + 1e-12) {
            throw InvalidArgument("stack_closed_loop_signal: t outside measurement span");
        }
        Vec p(ns);
        p << w_box.radius(t), Vec::Zero(ny), v_box.radius(t);
        return p;
    };
    std::optional<Vec> sup;
    if (w_box.sup_radius() && v_box.sup_radius()) {
        sup = Vec(ns);
        *sup << *w_box.sup_radius(), Vec::Zero(ny), *v_box.sup_radius();
    }
    return BoxSignal(ns, center, radius, sup);
}

}  // namespace intbox
