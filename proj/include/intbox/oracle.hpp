#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "intbox/interval.hpp"
#include "intbox/signals.hpp"
#include "intbox/system.hpp"

namespace intbox {

/// Piecewise-constant normalized input alpha(t) in [-1, 1]^m: levels[k] on [switch_times[k], switch_times[k+1]).
struct SwitchedLevels {
    std::vector<double> switch_times;  // switch_times[0] == 0
    std::vector<Vec> levels;

    [[nodiscard]] const Vec& at(double t) const;
};

enum class SampleStrategy { Interior, Corner, BangBang };

/// One admissible (x(0), w, v) with w(t) = c_w(t) + p_w(t) .* alpha_w(t) (same for v).
struct TruthRealization {
    Vec x0;
    BoxSignal w_box;
    SwitchedLevels w_alpha;
    std::optional<BoxSignal> v_box;
    SwitchedLevels v_alpha;
    std::uint64_t seed;
    SampleStrategy strategy;

    [[nodiscard]] Vec w(double t) const;
    [[nodiscard]] Vec v(double t) const;
};

struct TruthTrajectory {
    std::vector<Vec> states;  // on the grid nodes
    SampledSignal outputs;    // y = C x + v on every RK4 node; only when C is present
};

/**
 * RK4 simulation of x' = A x + B w. Switch instants lie on RK4 nodes, so each step sees a
 * single input level. Outputs are recorded when the system has C (v = 0 when the realization
 * has no noise box).
 */
TruthTrajectory simulate_truth(const LtiSystem& sys, const TruthRealization& real, const TimeGrid& grid,
                               const OdeSpec& ode = {});

/// RK4 states on the grid for an arbitrary input signal.
std::vector<Vec> simulate_trajectory(const LtiSystem& sys, const Vec& x0, const VecFn& w, const TimeGrid& grid,
                                     const OdeSpec& ode = {});

/**
 * Seeded admissible realizations cycling Interior (uniform x0, uniform piecewise-constant alpha),
 * Corner (vertex x0, constant +/-1 alpha) and BangBang (vertex x0, +/-1 alpha switching after
 * exponential times with mean 0.1 s). Switch times are rounded to the RK4 node grid.
 */
std::vector<TruthRealization> sample_admissible(const LtiSystem& sys, const IntervalBox& x0_box,
                                                const BoxSignal& w_box, const std::optional<BoxSignal>& v_box,
                                                std::size_t count, std::uint64_t seed, const TimeGrid& grid,
                                                const OdeSpec& ode = {});

/// Re-checks x0 and w(t), v(t) against their boxes at every RK4 node.
bool is_admissible(const TruthRealization& real, const IntervalBox& x0_box, const TimeGrid& grid,
                   const OdeSpec& ode = {}, double slack = 0.0);

/// Extremal admissible input for coordinate `coord` of the tightest bound at time t.
ExtremalRealization extremal_input(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box, double t,
                                   Eigen::Index coord, Sense sense);

struct ContainmentReport {
    std::size_t samples = 0;
    std::size_t nodes = 0;
    std::vector<std::size_t> violations;  // per coordinate, count of (truth, node) pairs outside by > slack
    double worst_margin = 0.0;            // min over truths, nodes, coords of min(x - lo, hi - x)
    std::size_t worst_node = 0;
    Eigen::Index worst_coord = 0;
    std::vector<Vec> gap_upper;  // per node: min over truths of (hi - x)
    std::vector<Vec> gap_lower;  // per node: min over truths of (x - lo)
    double slack = 0.0;

    [[nodiscard]] std::size_t total_violations() const;
    [[nodiscard]] bool passed() const { return total_violations() == 0; }
};

ContainmentReport containment_report(const EstimatorRun& run, const std::vector<std::vector<Vec>>& truths,
                                     double slack);

}  // namespace intbox
