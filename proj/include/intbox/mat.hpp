#pragma once

#include <Eigen/Dense>
#include <initializer_list>

namespace intbox {

using Vec = Eigen::VectorXd;

/// Absolute slack used by entrywise matrix comparisons.
inline constexpr double kCompareSlack = 1e-9;

/// Tolerance on eigenvalue real parts / moduli used by the stability predicates.
inline constexpr double kEigenTolerance = 1e-9;

/**
 * @brief Dense real matrix with at least one row and one column and only finite entries.
 *
 * Validation happens once, at construction. Every other routine in the library can assume
 * a Mat is well formed.
 */
class Mat {
   public:
    explicit Mat(Eigen::MatrixXd m);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(Eigen::Index n);
    static Mat zeros(Eigen::Index rows, Eigen::Index cols);

    [[nodiscard]] Eigen::Index rows() const { return m_.rows(); }
    [[nodiscard]] Eigen::Index cols() const { return m_.cols(); }
    [[nodiscard]] bool is_square() const { return m_.rows() == m_.cols(); }
    [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
    [[nodiscard]] const Eigen::MatrixXd& eigen() const { return m_; }

   private:
    Eigen::MatrixXd m_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);

/// Entrywise |A|.
Mat abs_mat(const Mat& a);

/// Metzler part: off-diagonal entries replaced by their absolute values, diagonal kept.
Mat metzler_part(const Mat& a);

/// e^{A t}. Accurate to ~1e-12 relative for ||A t||_inf <= 50.
Mat expm(const Mat& a, double t);

/// Largest real part over the spectrum. Throws NumericalError if the eigen-solver fails.
double spectral_abscissa(const Mat& a);

/// Largest eigenvalue modulus. Throws NumericalError if the eigen-solver fails.
double spectral_radius(const Mat& a);

/// True iff every eigenvalue has real part < -(margin + kEigenTolerance).
bool is_hurwitz(const Mat& a, double margin = 0.0);

/// True iff all off-diagonal entries are nonnegative.
bool is_metzler(const Mat& a);

/// True iff the spectral radius is < 1 - kEigenTolerance (Schur stability).
bool spectral_radius_lt_one(const Mat& a);

/// Entrywise a <= b + slack.
bool entrywise_leq(const Mat& a, const Mat& b, double slack = kCompareSlack);

namespace detail {
// Raw-Eigen kernels shared by the estimators; arguments are assumed already validated.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);
Eigen::MatrixXd metzler_part(const Eigen::MatrixXd& a);
double spectral_abscissa(const Eigen::MatrixXd& a);
double spectral_radius(const Eigen::MatrixXd& a);
void require_finite(const Eigen::MatrixXd& m, const char* what);
void require_finite(const Eigen::VectorXd& v, const char* what);
}  // namespace detail

}  // namespace intbox
