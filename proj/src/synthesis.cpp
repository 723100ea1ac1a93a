#include "intbox/synthesis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "intbox/error.hpp"
#include "parallel.hpp"

namespace intbox {

namespace {

Eigen::MatrixXd lmi_matrix(const Eigen::MatrixXd& S, const Vec& p, double alpha) {
    Eigen::MatrixXd off = S.cwiseAbs();
    off.diagonal().setZero();
    Eigen::MatrixXd M = off + off.transpose();
    M.diagonal() = 2.0 * S.diagonal() + alpha * p;
    return M;
}

struct TopEigen {
    double value;
    Vec vector;
};

TopEigen top_eigen(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("synthesis: symmetric eigen-solver did not converge");
    }
    const auto last = M.rows() - 1;
    // M is Metzler, so |u| attains the same Rayleigh quotient as u.
    return {solver.eigenvalues()(last), solver.eigenvectors().col(last).cwiseAbs()};
}

double sgn0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Euclidean projection onto { lo <= p_i <= hi, sum p = target }.
Vec project_capped_simplex(const Vec& x, double lo, double hi, double target) {
    auto mass = [&](double theta) { return (x.array() - theta).max(lo).min(hi).sum(); };
    double a = x.minCoeff() - hi;
    double b = x.maxCoeff() - lo;
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        (mass(mid) > target ? a : b) = mid;
    }
    return (x.array() - 0.5 * (a + b)).max(lo).min(hi).matrix();
}

struct StartResult {
    double value = std::numeric_limits<double>::infinity();
    Vec p;
    Eigen::MatrixXd Y;
    int iterations = 0;
};

StartResult run_start(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C, double alpha, const SolverOptions& opts,
                      Vec p, Eigen::MatrixXd Y) {
    const auto n = static_cast<double>(A.rows());
    const double hi = 1.0 / opts.eps;
    p = project_capped_simplex(p, opts.eps, hi, n);
    Y = Y.cwiseMax(-opts.gain_bound).cwiseMin(opts.gain_bound);

    StartResult best;
    int since_improvement = 0;
    for (int k = 0; k < opts.max_iterations; ++k) {
        const Eigen::MatrixXd S = p.asDiagonal() * A - Y * C;
        const TopEigen top = top_eigen(lmi_matrix(S, p, alpha));
        best.iterations = k + 1;
        if (!std::isfinite(best.value) || top.value < best.value - 1e-12 * (1.0 + std::fabs(best.value))) {
            best.value = top.value;
            best.p = p;
            best.Y = Y;
            since_improvement = 0;
        } else if (++since_improvement >= opts.stall_iterations) {
            break;
        }

        // d lambda / dS through the entrywise maps of psi(S) + psi(S)^T.
        const Vec& u = top.vector;
        Eigen::MatrixXd gS = 2.0 * u * u.transpose();
        for (Eigen::Index i = 0; i < S.rows(); ++i) {
            for (Eigen::Index j = 0; j < S.cols(); ++j) {
                if (i != j) gS(i, j) *= sgn0(S(i, j));
            }
        }
        const Vec gp = (gS.cwiseProduct(A)).rowwise().sum() + alpha * u.cwiseAbs2();
        const Eigen::MatrixXd gY = -gS * C.transpose();
        const double norm = std::sqrt(gp.squaredNorm() + gY.squaredNorm());
        if (norm == 0.0) {
            break;
        }
        const double step = opts.step0 / std::sqrt(static_cast<double>(k) + 1.0) / norm;
        p = project_capped_simplex(p - step * gp, opts.eps, hi, n);
        Y = (Y - step * gY).cwiseMax(-opts.gain_bound).cwiseMin(opts.gain_bound);
    }
    return best;
}

// inf over {l : l*dc > da} of |oa - l*oc| / (l*dc - da); +inf when the set is empty.
double row_ratio_infimum(double da, double dc, double oa, double oc) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (dc == 0.0) {
        if (da >= 0.0) return inf;
        return (oc != 0.0 ? 0.0 : std::fabs(oa)) / (-da);
    }
    if (oc == 0.0) return 0.0;
    const double l_star = oa / oc;
    if (l_star * dc > da) return 0.0;
    return std::fabs(oc) / std::fabs(dc);
}

}  // namespace

double synthesis_objective(const LtiSystem& sys, const Vec& p_diag, const Eigen::MatrixXd& Y, double alpha) {
    const Mat& C = sys.require_C();
    if (p_diag.size() != sys.n() || Y.rows() != sys.n() || Y.cols() != sys.ny()) {
        throw DimensionError("synthesis_objective: shape mismatch");
    }
    const Eigen::MatrixXd S = p_diag.asDiagonal() * sys.A().eigen() - Y * C.eigen();
    return top_eigen(lmi_matrix(S, p_diag, alpha)).value;
}

bool verify_certificate(const LtiSystem& sys, const GainCertificate& cert, double tol) {
    const Mat& C = sys.require_C();
    const Eigen::Index n = sys.n();
    if (cert.P.rows() != n || cert.P.cols() != n || cert.Y.rows() != n || cert.Y.cols() != sys.ny() ||
        cert.X.rows() != n || cert.X.cols() != n || cert.L.rows() != n || cert.L.cols() != sys.ny()) {
        throw DimensionError("verify_certificate: shape mismatch");
    }
    const Eigen::MatrixXd& P = cert.P.eigen();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && P(i, j) != 0.0) {
                throw InvalidArgument("verify_certificate: P must be diagonal");
            }
        }
        if (!(P(i, i) > 0.0)) {
            throw InvalidArgument("verify_certificate: P must have strictly positive diagonal");
        }
    }
    if (cert.alpha < 0.0) {
        throw InvalidArgument("verify_certificate: negative alpha");
    }
    const Eigen::MatrixXd S = P * sys.A().eigen() - cert.Y.eigen() * C.eigen();
    Eigen::MatrixXd off = S.cwiseAbs();
    off.diagonal().setZero();
    if (((off - cert.X.eigen()).array() > tol).any()) {
        return false;
    }
    Eigen::MatrixXd M = cert.X.eigen() + cert.X.eigen().transpose();
    M.diagonal() += 2.0 * S.diagonal() + cert.alpha * P.diagonal();
    if (!(top_eigen(M).value < -tol)) {
        return false;
    }
    const Eigen::MatrixXd L = P.diagonal().cwiseInverse().asDiagonal() * cert.Y.eigen();
    if (((L - cert.L.eigen()).array().abs() > tol * (1.0 + L.cwiseAbs().maxCoeff())).any()) {
        return false;
    }
    return is_hurwitz(metzler_part(sys.A() - cert.L * C));
}

std::optional<bool> gain_exists_n2(const LtiSystem& sys) {
    if (sys.n() != 2) {
        return std::nullopt;
    }
    const Eigen::MatrixXd& A = sys.A().eigen();
    const Eigen::MatrixXd& C = sys.require_C().eigen();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double cutoff = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    const auto rank = (sv.array() > cutoff).count();
    if (rank >= 2) {
        return true;  // L can place A - LC anywhere
    }
    if (rank == 0) {
        return is_hurwitz(metzler_part(sys.A()));
    }
    // Row space of C spanned by c: A - LC = A - l c^T with l free, and each row of A - l c^T
    // depends only on its own entry of l. psi(.) 2x2 Metzler is Hurwitz iff both diagonal entries
    // are negative and (-m11)(-m22) > |m12||m21|.
    const Vec c = svd.matrixV().col(0);
    const double r1 = row_ratio_infimum(A(0, 0), c(0), A(0, 1), c(1));
    const double r2 = row_ratio_infimum(A(1, 1), c(1), A(1, 0), c(0));
    return std::isfinite(r1) && std::isfinite(r2) && r1 * r2 < 1.0;
}

SynthesisResult synthesize_gain(const LtiSystem& sys, double alpha, const SolverOptions& opts) {
    const Mat& Cm = sys.require_C();
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("synthesize_gain: alpha must be >= 0");
    }
    if (sys.ny() > sys.n()) {
        throw DimensionError("synthesize_gain: C must have at most n rows");
    }
    if (opts.starts < 1 || opts.max_iterations < 1 || !(opts.eps > 0.0 && opts.eps < 1.0)) {
        throw InvalidArgument("synthesize_gain: invalid solver options");
    }
    if (const auto exists = gain_exists_n2(sys); exists && !*exists) {
        return Infeasible{std::numeric_limits<double>::infinity(), true, true, 0,
                          "analytic obstruction: no L makes psi(A - LC) Hurwitz (n = 2 closed-form test)"};
    }

    const Eigen::MatrixXd& A = sys.A().eigen();
    const Eigen::MatrixXd& C = Cm.eigen();
    const Eigen::Index n = sys.n(), ny = sys.ny();

    // Starting points are drawn up front so results do not depend on the thread count.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> up(0.5, 1.5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec> p0(static_cast<std::size_t>(opts.starts));
    std::vector<Eigen::MatrixXd> y0(p0.size());
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    for (std::size_t s = 0; s < p0.size(); ++s) {
        if (s == 0) {
            p0[s] = Vec::Ones(n);
            y0[s] = Eigen::MatrixXd::Zero(n, ny);
        } else {
            p0[s] = Vec::NullaryExpr(n, [&] { return up(rng); });
            y0[s] = Eigen::MatrixXd::NullaryExpr(n, ny, [&] { return scale * gauss(rng); });
        }
    }
    std::vector<StartResult> results(p0.size());
    detail::parallel_for(p0.size(), [&](std::size_t s) { results[s] = run_start(A, C, alpha, opts, p0[s], y0[s]); });

    std::size_t best = 0;
    int iterations = 0;
    for (std::size_t s = 0; s < results.size(); ++s) {
        iterations += results[s].iterations;
        if (results[s].value < results[best].value) best = s;
    }
    const StartResult& r = results[best];
    if (r.value < -opts.tol) {
        const Eigen::MatrixXd P = r.p.asDiagonal();
        const Eigen::MatrixXd S = P * A - r.Y * C;
        Eigen::MatrixXd X = S.cwiseAbs();
        X.diagonal().setZero();
        const Eigen::MatrixXd L = r.p.cwiseInverse().asDiagonal() * r.Y;
        return GainCertificate{Mat(P), Mat(r.Y), Mat(X), Mat(L), r.value, alpha};
    }
    std::ostringstream msg;
    msg << "best lambda_max " << r.value << " after " << iterations << " iterations over " << opts.starts
        << " starts; not a proof of infeasibility";
    return Infeasible{r.value, false, false, iterations, msg.str()};
}

}  // namespace intbox
