#include "intbox/openloop.hpp"

#include <cmath>
#include <string>

#include "convolution.hpp"
#include "intbox/error.hpp"
#include "intbox/ode.hpp"
#include "parallel.hpp"

namespace intbox {

namespace {

void check_inputs(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box) {
    if (x0_box.dimension() != sys.n()) {
        throw DimensionError("estimator: x0_box dimension must equal n");
    }
    if (w_box.dimension() != sys.nw()) {
        throw DimensionError("estimator: w_box dimension must equal n_w");
    }
}

QuadratureSpec on_grid(QuadratureSpec quad, const TimeGrid& grid) {
    quad.step = grid.step();
    quad.validate();
    return quad;
}

EstimatorRun empty_run(std::string method, const TimeGrid& grid) {
    EstimatorRun run;
    run.method = std::move(method);
    run.times = grid.times();
    run.centers.resize(grid.size());
    run.radii.resize(grid.size());
    return run;
}

}  // namespace

EstimatorRun tightest_estimate(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                               const TimeGrid& grid, const QuadratureSpec& quad_in) {
    check_inputs(sys, x0_box, w_box);
    const QuadratureSpec quad = on_grid(quad_in, grid);
    const auto sub = static_cast<std::size_t>(quad.substeps);
    const std::size_t last = (grid.size() - 1) * sub;
    const Eigen::MatrixXd& A = sys.A().eigen();

    const detail::KernelConvolution conv(A, sys.B().eigen(), w_box, quad.panel(), last, quad.rule);
    const auto phi = detail::transition_table(A, grid.step(), grid.size());

    EstimatorRun run = empty_run("tightest", grid);
    run.params["substeps"] = quad.substeps;
    detail::parallel_for(grid.size(), [&](std::size_t k) {
        run.centers[k] = phi[k] * x0_box.center() + conv.center(0, k * sub);
        run.radii[k] = phi[k].cwiseAbs() * x0_box.radius() + conv.radius(0, k * sub);
    });
    run.bibo_certified = is_hurwitz(sys.A());
    if (!run.bibo_certified) {
        run.notes.emplace_back("A is not Hurwitz: enclosure holds on the finite grid only");
    }
    return run;
}

EstimatorRun truncated_horizon_estimate(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                                        const TimeGrid& grid, double window, const QuadratureSpec& quad_in) {
    check_inputs(sys, x0_box, w_box);
    if (!(window > 0.0)) {
        throw InvalidArgument("truncated_horizon_estimate: window T must be > 0");
    }
    const QuadratureSpec quad = on_grid(quad_in, grid);
    const std::size_t kT = grid.steps_in(window);
    const auto sub = static_cast<std::size_t>(quad.substeps);
    const std::size_t last = (grid.size() - 1) * sub;
    const Eigen::MatrixXd& A = sys.A().eigen();

    const detail::KernelConvolution conv(A, sys.B().eigen(), w_box, quad.panel(), last, quad.rule);
    const auto phi = detail::transition_table(A, grid.step(), grid.size());

    EstimatorRun run = empty_run("truncated", grid);
    run.params["T"] = window;
    run.params["substeps"] = quad.substeps;

    // Window integrals are independent; the recursion over k is not.
    std::vector<Vec> local(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t k) {
        run.centers[k] = phi[k] * x0_box.center() + conv.center(0, k * sub);
        if (k < kT) {
            local[k] = phi[k].cwiseAbs() * x0_box.radius() + conv.radius(0, k * sub);
        } else {
            local[k] = conv.radius((k - kT) * sub, k * sub);
        }
    });
    if (kT < grid.size()) {
        const Eigen::MatrixXd abs_window = phi[kT].cwiseAbs();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            run.radii[k] = k < kT ? local[k] : Vec(abs_window * run.radii[k - kT] + local[k]);
        }
        run.bibo_certified = detail::spectral_radius(abs_window) < 1.0 - kEigenTolerance;
    } else {
        run.radii = std::move(local);
        run.bibo_certified = false;
        run.notes.emplace_back("window covers the whole grid: tightest estimate reproduced");
    }
    if (!run.bibo_certified) {
        run.notes.emplace_back("|e^{AT}| not certified Schur stable");
    }
    return run;
}

EstimatorRun constant_pw_realization(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                                     const TimeGrid& grid, const OdeSpec& ode, bool hull) {
    check_inputs(sys, x0_box, w_box);
    ode.validate();
    if (!w_box.has_constant_radius() && !hull) {
        throw InvalidArgument("constant_pw_realization: input radius is not constant (enable hull)");
    }
    const BoxSignal w = hull ? constant_radius_hull(w_box, HullSearch{grid.horizon(), std::min(1e-3, grid.step())})
                             : w_box;
    const Vec delta = w.radius(0.0);

    const Eigen::Index n = sys.n();
    const Eigen::MatrixXd& A = sys.A().eigen();
    const Eigen::MatrixXd& B = sys.B().eigen();
    const Eigen::Index nn = n * n;

    // State layout: [vec(M) (column-major), r, c].
    auto rhs = [&](double t, const Vec& s) {
        const Eigen::Map<const Eigen::MatrixXd> M(s.data(), n, n);
        Vec ds(nn + 2 * n);
        Eigen::Map<Eigen::MatrixXd>(ds.data(), n, n) = A * M;
        ds.segment(nn, n) = (M * B).cwiseAbs() * delta;
        ds.segment(nn + n, n) = A * s.segment(nn + n, n) + B * w.center(t);
        return ds;
    };

    Vec s(nn + 2 * n);
    Eigen::Map<Eigen::MatrixXd>(s.data(), n, n).setIdentity();
    s.segment(nn, n).setZero();
    s.segment(nn + n, n) = x0_box.center();

    EstimatorRun run = empty_run("constant_pw", grid);
    for (Eigen::Index j = 0; j < delta.size(); ++j) {
        run.params["delta_" + std::to_string(j + 1)] = delta(j);
    }
    const double h = grid.step() / ode.substeps;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k > 0) {
            for (int q = 0; q < ode.substeps; ++q) {
                s = rk4_step(rhs, grid[k - 1] + q * h, s, h);
            }
        }
        const Eigen::Map<const Eigen::MatrixXd> M(s.data(), n, n);
        run.centers[k] = s.segment(nn + n, n);
        run.radii[k] = (M.cwiseAbs() * x0_box.radius() + s.segment(nn, n)).cwiseMax(0.0);
    }
    run.bibo_certified = is_hurwitz(sys.A());
    return run;
}

EstimatorRun metzler_ode_estimate(const LtiSystem& sys, const IntervalBox& x0_box, const BoxSignal& w_box,
                                  const TimeGrid& grid, const OdeSpec& ode) {
    check_inputs(sys, x0_box, w_box);
    ode.validate();
    const Eigen::Index n = sys.n();
    const Eigen::MatrixXd& A = sys.A().eigen();
    const Eigen::MatrixXd& B = sys.B().eigen();
    const Eigen::MatrixXd psi = detail::metzler_part(A);
    const Eigen::MatrixXd absB = B.cwiseAbs();

    auto rhs = [&](double t, const Vec& s) {
        Vec ds(2 * n);
        ds.head(n) = A * s.head(n) + B * w_box.center(t);
        ds.tail(n) = psi * s.tail(n) + absB * w_box.radius(t);
        return ds;
    };

    Vec s(2 * n);
    s << x0_box.center(), x0_box.radius();
    EstimatorRun run = empty_run("metzler", grid);
    const double h = grid.step() / ode.substeps;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k > 0) {
            for (int q = 0; q < ode.substeps; ++q) {
                s = rk4_step(rhs, grid[k - 1] + q * h, s, h);
            }
        }
        run.centers[k] = s.head(n);
        run.radii[k] = s.tail(n).cwiseMax(0.0);
    }
    run.bibo_certified = is_hurwitz(metzler_part(sys.A()));
    if (!run.bibo_certified) {
        run.notes.emplace_back("psi(A) is not Hurwitz: not an interval estimator on unbounded horizons");
    }
    return run;
}

}  // namespace intbox
