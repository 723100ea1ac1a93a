#pragma once

#include "intbox/interval.hpp"
#include "intbox/signals.hpp"
#include "intbox/system.hpp"

namespace intbox {

/// Quadrature used by the convolution-based estimators: composite Simpson, 4 panels per grid step.
/// The step field is ignored by estimators; the panel width is grid.step() / substeps.
inline QuadratureSpec estimator_quadrature(int substeps = 4, QuadratureRule rule = QuadratureRule::Simpson) {
    return QuadratureSpec{1.0, rule, substeps};
}

/**
 * Tightest interval estimator:
 *   c(t) = e^{At} c(0) + int_0^t e^{A(t-tau)} B c_w(tau) dtau
 *   p(t) = |e^{At}| p(0) + int_0^t |e^{A(t-tau)} B| p_w(tau) dtau
 * evaluated by quadrature at every grid node. Runs with a non-Hurwitz A are allowed on the
 * finite grid but come back with bibo_certified = false.
 */
EstimatorRun tightest_estimate(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                               const TimeGrid& grid, const QuadratureSpec& quad = estimator_quadrature());

/**
 * Finite-dimensional realization for a constant input radius delta:
 *   M' = A M, M(0) = I;  r' = |M B| delta, r(0) = 0;  p = |M| p(0) + r;  c' = A c + B c_w.
 * Throws InvalidArgument if w_box has a time-varying radius and `hull` is false; with `hull`
 * the radius is first replaced by its supremum (constant_radius_hull).
 */
EstimatorRun constant_pw_realization(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                                     const TimeGrid& grid, const OdeSpec& ode = {}, bool hull = false);

/**
 * Moving-window over-approximation with window T (a multiple of the grid step):
 *   p^(t) = p(t) on [0, T),   p^(t) = |e^{AT}| p^(t - T) + int_{t-T}^t |e^{A(t-tau)} B| p_w(tau) dtau.
 * Always p(t) <= p^(t). bibo_certified iff |e^{AT}| is Schur stable.
 */
EstimatorRun truncated_horizon_estimate(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                                        const TimeGrid& grid, double window,
                                        const QuadratureSpec& quad = estimator_quadrature());

/// Radius ODE p' = psi(A) p + |B| p_w with the center ODE c' = A c + B c_w. bibo_certified iff psi(A) Hurwitz.
EstimatorRun metzler_ode_estimate(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                                  const TimeGrid& grid, const OdeSpec& ode = {});

}  // namespace intbox
