#pragma once

#include "intbox/interval.hpp"
#include "intbox/signals.hpp"
#include "intbox/system.hpp"

namespace intbox {

/// Output-injection form x' = (A - L C) x + G s with G = [B  L  -L] and s = [w; y; v].
struct ObserverConfig {
    LtiSystem sys;
    Mat L;        // n x n_y
    Mat G;        // n x (n_w + 2 n_y)
    Mat A_cl;     // A - L C
    Mat psi_A_cl; // metzler_part(A - L C)
    bool a_cl_hurwitz;
    bool psi_a_cl_hurwitz;

    [[nodiscard]] Eigen::Index ns() const { return G.cols(); }
};

ObserverConfig build_observer(const LtiSystem& sys, const Mat& L);

/**
 * Interval observer
 *   c' = (A - LC) c + G c_s,        c(0) = c_x(0)
 *   p' = psi(A - LC) p + |G| p_s,   p(0) = p_x(0)
 * with s_box from stack_closed_loop_signal. The run is flagged bibo_certified iff
 * psi(A - LC) is Hurwitz; in that case A - LC must be Hurwitz too, and a disagreement
 * from the eigen-solver raises NumericalError.
 */
EstimatorRun closed_loop_estimate(const ObserverConfig& obs, const IntervalBox& x0_box, const BoxSignal& s_box,
                                  const TimeGrid& grid, const OdeSpec& ode = {});

/// Steady-state radius -psi(A - LC)^{-1} |G| sup_ps for a constant input radius. Requires a valid observer.
Vec closed_loop_steady_radius(const ObserverConfig& obs, const Vec& sup_ps);

}  // namespace intbox
