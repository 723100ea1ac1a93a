#include "intbox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "intbox/error.hpp"
#include "intbox/ode.hpp"

namespace intbox {

const Vec& SwitchedLevels::at(double t) const {
    const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
    const auto k = it == switch_times.begin() ? 0 : static_cast<std::size_t>(it - switch_times.begin()) - 1;
    return levels[std::min(k, levels.size() - 1)];
}

Vec TruthRealization::w(double t) const {
    return w_box.center(t) + w_box.radius(t).cwiseProduct(w_alpha.at(t));
}

Vec TruthRealization::v(double t) const {
    if (!v_box) {
        return Vec();
    }
    return v_box->center(t) + v_box->radius(t).cwiseProduct(v_alpha.at(t));
}

namespace {

void check_system_inputs(const LtiSystem& sys, const Vec& x0, Eigen::Index nw) {
    if (x0.size() != sys.n()) {
        throw DimensionError("simulation: x0 dimension must equal n");
    }
    if (nw != sys.nw()) {
        throw DimensionError("simulation: input dimension must equal n_w");
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec random_signs(std::mt19937_64& rng, Eigen::Index m) {
    return Vec::NullaryExpr(m, [&] { return (rng() >> 63) != 0 ? 1.0 : -1.0; });
}

Vec random_uniform(std::mt19937_64& rng, Eigen::Index m) {
    return Vec::NullaryExpr(m, [&] { return 2.0 * uniform01(rng) - 1.0; });
}

SwitchedLevels draw_levels(std::mt19937_64& rng, Eigen::Index m, SampleStrategy strategy, double horizon,
                           double node_step) {
    constexpr double kMeanDwell = 0.1;
    SwitchedLevels out;
    auto level = [&] { return strategy == SampleStrategy::Interior ? random_uniform(rng, m) : random_signs(rng, m); };
    out.switch_times.push_back(0.0);
    out.levels.push_back(level());
    if (strategy == SampleStrategy::Corner) {
        return out;
    }
    double t = 0.0;
    while (true) {
        const double dwell = -kMeanDwell * std::log(1.0 - uniform01(rng));
        double next = std::round((t + dwell) / node_step) * node_step;
        if (next <= t) {
            next = t + node_step;
        }
        if (next >= horizon) {
            break;
        }
        out.switch_times.push_back(next);
        out.levels.push_back(level());
        t = next;
    }
    return out;
}

}  // namespace

TruthTrajectory simulate_truth(const LtiSystem& sys, const TruthRealization& real, const TimeGrid& grid,
                               const OdeSpec& ode) {
    ode.validate();
    check_system_inputs(sys, real.x0, real.w_box.dimension());
    if (sys.C() && real.v_box && real.v_box->dimension() != sys.ny()) {
        throw DimensionError("simulate_truth: v dimension must equal n_y");
    }
    const Eigen::MatrixXd& A = sys.A().eigen();
    const Eigen::MatrixXd& B = sys.B().eigen();
    const auto sub = static_cast<std::size_t>(ode.substeps);
    const double h = grid.step() / ode.substeps;
    const std::size_t fine_steps = (grid.size() - 1) * sub;

    std::vector<Vec> states;
    states.reserve(grid.size());
    std::vector<double> y_times;
    std::vector<Vec> y_values;
    const bool record = sys.C().has_value();

    auto output = [&](double t, const Vec& x) {
        Vec y = sys.C()->eigen() * x;
        if (real.v_box) y += real.v(t);
        return y;
    };

    Vec x = real.x0;
    states.push_back(x);
    if (record) {
        y_times.push_back(0.0);
        y_values.push_back(output(0.0, x));
    }
    for (std::size_t q = 0; q < fine_steps; ++q) {
        const double t = static_cast<double>(q) * h;
        const Vec alpha = real.w_alpha.at(t + 0.5 * h);
        auto rhs = [&](double tau, const Vec& s) -> Vec {
            return A * s + B * (real.w_box.center(tau) + real.w_box.radius(tau).cwiseProduct(alpha));
        };
        x = rk4_step(rhs, t, x, h);
        if ((q + 1) % sub == 0) {
            states.push_back(x);
        }
        if (record) {
            const double tn = static_cast<double>(q + 1) * h;
            y_times.push_back(tn);
            y_values.push_back(output(tn, x));
        }
    }
    if (!record) {
        return TruthTrajectory{std::move(states), SampledSignal({0.0}, {Vec::Zero(1)})};
    }
    return TruthTrajectory{std::move(states), SampledSignal(std::move(y_times), std::move(y_values))};
}

std::vector<Vec> simulate_trajectory(const LtiSystem& sys, const Vec& x0, const VecFn& w, const TimeGrid& grid,
                                     const OdeSpec& ode) {
    ode.validate();
    check_system_inputs(sys, x0, w(0.0).size());
    const Eigen::MatrixXd& A = sys.A().eigen();
    const Eigen::MatrixXd& B = sys.B().eigen();
    auto rhs = [&](double tau, const Vec& s) -> Vec { return A * s + B * w(tau); };
    const double h = grid.step() / ode.substeps;
    std::vector<Vec> states;
    states.reserve(grid.size());
    Vec x = x0;
    states.push_back(x);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        for (int q = 0; q < ode.substeps; ++q) {
            x = rk4_step(rhs, grid[k - 1] + q * h, x, h);
        }
        states.push_back(x);
    }
    return states;
}

std::vector<TruthRealization> sample_admissible(const LtiSystem& sys, const IntervalBox& x0_box,
                                                const BoxSignal& w_box, const std::optional<BoxSignal>& v_box,
                                                std::size_t count, std::uint64_t seed, const TimeGrid& grid,
                                                const OdeSpec& ode) {
    ode.validate();
    if (count < 1) {
        throw InvalidArgument("sample_admissible: count must be >= 1");
    }
    if (x0_box.dimension() != sys.n() || w_box.dimension() != sys.nw()) {
        throw DimensionError("sample_admissible: box dimensions do not match the system");
    }
    const double node_step = grid.step() / ode.substeps;
    std::vector<TruthRealization> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = splitmix64(seed ^ splitmix64(i));
        std::mt19937_64 rng(s);
        const auto strategy = static_cast<SampleStrategy>(i % 3);
        const Vec unit = strategy == SampleStrategy::Interior ? random_uniform(rng, sys.n()) : random_signs(rng, sys.n());
        Vec x0 = x0_box.center() + x0_box.radius().cwiseProduct(unit);
        SwitchedLevels wl = draw_levels(rng, sys.nw(), strategy, grid.horizon(), node_step);
        SwitchedLevels vl;
        if (v_box) {
            vl = draw_levels(rng, v_box->dimension(), strategy, grid.horizon(), node_step);
        }
        out.push_back(TruthRealization{std::move(x0), w_box, std::move(wl), v_box, std::move(vl), s, strategy});
    }
    return out;
}

bool is_admissible(const TruthRealization& real, const IntervalBox& x0_box, const TimeGrid& grid, const OdeSpec& ode,
                   double slack) {
    if (!x0_box.contains(real.x0, slack)) {
        return false;
    }
    const double h = grid.step() / ode.substeps;
    const std::size_t nodes = (grid.size() - 1) * static_cast<std::size_t>(ode.substeps) + 1;
    for (std::size_t q = 0; q < nodes; ++q) {
        const double t = static_cast<double>(q) * h;
        const Vec w = real.w(t);
        if (((w - real.w_box.lower(t)).array() < -slack).any() || ((real.w_box.upper(t) - w).array() < -slack).any()) {
            return false;
        }
        if (real.v_box) {
            const Vec v = real.v(t);
            if (((v - real.v_box->lower(t)).array() < -slack).any() ||
                ((real.v_box->upper(t) - v).array() < -slack).any()) {
                return false;
            }
        }
    }
    return true;
}

ExtremalRealization extremal_input(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box, double t,
                                   Eigen::Index coord, Sense sense) {
    if (!(t >= 0.0)) {
        throw InvalidArgument("extremal_input: t must be >= 0");
    }
    const Eigen::MatrixXd A = sys.A().eigen();
    const Eigen::MatrixXd B = sys.B().eigen();
    const Mat F = expm(sys.A(), t);
    std::vector<WeightedKernelTerm> terms;
    terms.push_back(WeightedKernelTerm{[A, B, t](double tau) -> Eigen::MatrixXd { return detail::expm(A * (t - tau)) * B; },
                                       w_box, 0.0, t});
    return extremal_realizers(F, x0_box, terms, coord, sense);
}

std::size_t ContainmentReport::total_violations() const {
    std::size_t total = 0;
    for (auto v : violations) total += v;
    return total;
}

ContainmentReport containment_report(const EstimatorRun& run, const std::vector<std::vector<Vec>>& truths,
                                     double slack) {
    const Eigen::Index n = run.dimension();
    ContainmentReport rep;
    rep.samples = truths.size();
    rep.nodes = run.size();
    rep.slack = slack;
    rep.violations.assign(static_cast<std::size_t>(n), 0);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const double inf = std::numeric_limits<double>::infinity();
    rep.gap_upper.assign(run.size(), Vec::Constant(n, inf));
    rep.gap_lower.assign(run.size(), Vec::Constant(n, inf));
    for (const auto& traj : truths) {
        if (traj.size() != run.size()) {
            throw DimensionError("containment_report: trajectory and run grids differ");
        }
        for (std::size_t k = 0; k < run.size(); ++k) {
            if (traj[k].size() != n) {
                throw DimensionError("containment_report: state dimension mismatch");
            }
            const Vec up = run.upper(k) - traj[k];
            const Vec lo = traj[k] - run.lower(k);
            rep.gap_upper[k] = rep.gap_upper[k].cwiseMin(up);
            rep.gap_lower[k] = rep.gap_lower[k].cwiseMin(lo);
            for (Eigen::Index i = 0; i < n; ++i) {
                const double margin = std::min(up(i), lo(i));
                if (margin < -slack) {
                    ++rep.violations[static_cast<std::size_t>(i)];
                }
                if (margin < rep.worst_margin) {
                    rep.worst_margin = margin;
                    rep.worst_node = k;
                    rep.worst_coord = i;
                }
            }
        }
    }
    return rep;
}

}  // namespace intbox
