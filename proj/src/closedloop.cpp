#include "intbox/closedloop.hpp"

#include <algorithm>
#include <string>

#include "intbox/error.hpp"
#include "intbox/ode.hpp"

namespace intbox {

ObserverConfig build_observer(const LtiSystem& sys, const Mat& L) {
    const Mat& C = sys.require_C();
    if (L.rows() != sys.n() || L.cols() != sys.ny()) {
        throw DimensionError("build_observer: L must be n x n_y");
    }
    const Eigen::Index n = sys.n(), nw = sys.nw(), ny = sys.ny();
    Eigen::MatrixXd G(n, nw + 2 * ny);
    G << sys.B().eigen(), L.eigen(), -L.eigen();
    Mat A_cl = sys.A() - L * C;
    Mat psi = metzler_part(A_cl);
    const bool a_ok = is_hurwitz(A_cl);
    const bool psi_ok = is_hurwitz(psi);
    return ObserverConfig{sys, L, Mat(std::move(G)), std::move(A_cl), std::move(psi), a_ok, psi_ok};
}

EstimatorRun closed_loop_estimate(const ObserverConfig& obs, const IntervalBox& x0_box, const BoxSignal& s_box,
                                  const TimeGrid& grid, const OdeSpec& ode) {
    ode.validate();
    const Eigen::Index n = obs.sys.n();
    if (x0_box.dimension() != n) {
        throw DimensionError("closed_loop_estimate: x0_box dimension must equal n");
    }
    if (s_box.dimension() != obs.ns()) {
        throw DimensionError("closed_loop_estimate: s_box dimension must be n_w + 2 n_y");
    }
    if (obs.psi_a_cl_hurwitz && !obs.a_cl_hurwitz) {
        throw NumericalError("closed_loop_estimate: psi(A-LC) Hurwitz but A-LC reported unstable");
    }
    // Fail before integrating when the grid leaves the measurement span.
    (void)s_box.radius(grid.horizon());
    // Real-axis RK4 stability limit is about 2.785; a large gain makes the observer stiff.
    const double h_rk = grid.step() / ode.substeps;
    const double stiff = std::max(spectral_radius(obs.A_cl), spectral_radius(obs.psi_A_cl)) * h_rk;
    if (stiff > 2.5) {
        throw NumericalError("closed_loop_estimate: RK4 step " + std::to_string(h_rk) +
                             " is unstable for this gain (spectral radius * step = " + std::to_string(stiff) +
                             "); raise ode.substeps or bound the gain");
    }

    const Eigen::MatrixXd& Acl = obs.A_cl.eigen();
    const Eigen::MatrixXd& psi = obs.psi_A_cl.eigen();
    const Eigen::MatrixXd& G = obs.G.eigen();
    const Eigen::MatrixXd absG = G.cwiseAbs();
    auto rhs = [&](double t, const Vec& s) {
        Vec ds(2 * n);
        ds.head(n) = Acl * s.head(n) + G * s_box.center(t);
        ds.tail(n) = psi * s.tail(n) + absG * s_box.radius(t);
        return ds;
    };

    EstimatorRun run;
    run.method = "closed_loop";
    run.times = grid.times();
    run.centers.resize(grid.size());
    run.radii.resize(grid.size());
    for (Eigen::Index i = 0; i < obs.L.rows(); ++i) {
        for (Eigen::Index j = 0; j < obs.L.cols(); ++j) {
            run.params["L_" + std::to_string(i + 1) + "_" + std::to_string(j + 1)] = obs.L(i, j);
        }
    }
    Vec s(2 * n);
    s << x0_box.center(), x0_box.radius();
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
    run.bibo_certified = obs.psi_a_cl_hurwitz;
    if (!run.bibo_certified) {
        run.notes.emplace_back("psi(A-LC) is not Hurwitz: not an interval observer");
    }
    return run;
}

Vec closed_loop_steady_radius(const ObserverConfig& obs, const Vec& sup_ps) {
    if (!obs.psi_a_cl_hurwitz) {
        throw InvalidArgument("closed_loop_steady_radius: psi(A-LC) is not Hurwitz");
    }
    if (sup_ps.size() != obs.ns()) {
        throw DimensionError("closed_loop_steady_radius: sup_ps has wrong dimension");
    }
    return -obs.psi_A_cl.eigen().partialPivLu().solve(obs.G.eigen().cwiseAbs() * sup_ps);
}

}  // namespace intbox
