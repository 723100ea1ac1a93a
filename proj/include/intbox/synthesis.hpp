#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "intbox/system.hpp"

namespace intbox {

/**
 * Witness that psi(A - L C) is Hurwitz (with decay alpha):
 *   S = P A - Y C,   |S - diag(S)| <= X,   X^T + X + 2 diag(S) + alpha P < 0,   L = P^{-1} Y
 * with P diagonal positive definite.
 */
struct GainCertificate {
    Mat P;
    Mat Y;
    Mat X;
    Mat L;
    double lambda_max;  // largest eigenvalue of X^T + X + 2 diag(S) + alpha P
    double alpha;
};

struct SolverOptions {
    double eps = 1e-6;            // P entries kept in [eps, 1/eps]
    int max_iterations = 20000;   // per start
    double tol = 1e-8;            // certificate requires lambda_max < -tol
    int starts = 8;
    std::uint64_t seed = 1;
    double gain_bound = 1e3;      // |Y_ij| <= gain_bound
    double step0 = 1.0;           // diminishing step step0 / sqrt(k + 1) on normalized subgradients
    int stall_iterations = 1500;  // a start ends after this many iterations without improvement
};

struct Infeasible {
    double best_value;           // best lambda_max found (>= -tol)
    bool analytic_obstruction;   // n = 2 closed-form test proved no gain exists
    bool proven;                 // false: best-effort verdict of the subgradient search
    int iterations;
    std::string diagnostics;
};

using SynthesisResult = std::variant<GainCertificate, Infeasible>;

/**
 * lambda_max(psi(S) + psi(S)^T + alpha diag(p)) with S = diag(p) A - Y C. Convex in (p, Y)
 * for p > 0.
 */
double synthesis_objective(const LtiSystem& sys, const Vec& p_diag, const Eigen::MatrixXd& Y, double alpha);

/**
 * Checks both matrix conditions within tol, L = P^{-1} Y, and that psi(A - L C) is Hurwitz.
 * Throws InvalidArgument if P is not diagonal with strictly positive entries.
 */
bool verify_certificate(const LtiSystem& sys, const GainCertificate& cert, double tol = 1e-9);

/// For n = 2: exact answer to "does some L make psi(A - L C) Hurwitz?". nullopt for n != 2.
std::optional<bool> gain_exists_n2(const LtiSystem& sys);

/**
 * Minimizes synthesis_objective over diagonal P (entries in [eps, 1/eps], trace n) and boxed Y
 * by projected subgradient with multi-start, eliminating X = |S - diag(S)|. Returns a
 * certificate when the best value is below -tol. Infeasible verdicts are proofs only when
 * `analytic_obstruction` is set.
 */
SynthesisResult synthesize_gain(const LtiSystem& sys, double alpha, const SolverOptions& opts = {});

}  // namespace intbox
