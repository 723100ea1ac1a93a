#include "intbox/mat.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <string>

#include "intbox/error.hpp"

namespace intbox {

namespace detail {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
    if (!v.allFinite()) {
        throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

// Pade(13) scaling and squaring (Higham 2005). For the small systems handled here a single
// high-order approximant is simpler than the cost-optimal degree selection and loses nothing.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    static constexpr double theta13 = 5.371920351148152;

    const auto n = a.rows();
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 == 0.0) {
        return Eigen::MatrixXd::Identity(n, n);
    }
    int s = 0;
    if (norm1 > theta13) {
        s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    const Eigen::MatrixXd as = a / std::ldexp(1.0, s);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = as * as;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;

    const Eigen::MatrixXd u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                                    b[5] * a4 + b[3] * a2 + b[1] * id;
    const Eigen::MatrixXd u = as * u_inner;
    const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                              b[4] * a4 + b[2] * a2 + b[0] * id;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k) {
        r = r * r;
    }
    return r;
}

Eigen::MatrixXd metzler_part(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd out = a.cwiseAbs();
    out.diagonal() = a.diagonal();
    return out;
}

namespace {
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigen-solver did not converge");
    }
    return solver.eigenvalues();
}
}  // namespace

double spectral_abscissa(const Eigen::MatrixXd& a) { return eigenvalues(a).real().maxCoeff(); }

double spectral_radius(const Eigen::MatrixXd& a) { return eigenvalues(a).cwiseAbs().maxCoeff(); }

}  // namespace detail

Mat::Mat(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() < 1 || m_.cols() < 1) {
        throw InvalidArgument("Mat: empty matrix");
    }
    detail::require_finite(m_, "Mat");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    Eigen::MatrixXd m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != c) {
            throw DimensionError("Mat: ragged initializer");
        }
        Eigen::Index j = 0;
        for (double v : row) {
            m(i, j++) = v;
        }
        ++i;
    }
    *this = Mat(std::move(m));
}

Mat Mat::identity(Eigen::Index n) { return Mat(Eigen::MatrixXd::Identity(n, n)); }

Mat Mat::zeros(Eigen::Index rows, Eigen::Index cols) {
    return Mat(Eigen::MatrixXd::Zero(rows, cols));
}

namespace {
void require_same_shape(const Mat& a, const Mat& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch");
    }
}
void require_square(const Mat& a, const char* op) {
    if (!a.is_square()) {
        throw DimensionError(std::string(op) + ": matrix must be square");
    }
}
}  // namespace

Mat operator+(const Mat& a, const Mat& b) {
    require_same_shape(a, b, "operator+");
    return Mat(a.eigen() + b.eigen());
}

Mat operator-(const Mat& a, const Mat& b) {
    require_same_shape(a, b, "operator-");
    return Mat(a.eigen() - b.eigen());
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("operator*: inner dimensions differ");
    }
    return Mat(a.eigen() * b.eigen());
}

Mat operator*(double s, const Mat& a) { return Mat(s * a.eigen()); }

Mat abs_mat(const Mat& a) { return Mat(a.eigen().cwiseAbs()); }

Mat metzler_part(const Mat& a) {
    require_square(a, "metzler_part");
    return Mat(detail::metzler_part(a.eigen()));
}

Mat expm(const Mat& a, double t) {
    require_square(a, "expm");
    if (!std::isfinite(t)) {
        throw InvalidArgument("expm: non-finite time");
    }
    return Mat(detail::expm(a.eigen() * t));
}

double spectral_abscissa(const Mat& a) {
    require_square(a, "spectral_abscissa");
    return detail::spectral_abscissa(a.eigen());
}

double spectral_radius(const Mat& a) {
    require_square(a, "spectral_radius");
    return detail::spectral_radius(a.eigen());
}

bool is_hurwitz(const Mat& a, double margin) {
    if (margin < 0.0) {
        throw InvalidArgument("is_hurwitz: negative margin");
    }
    return spectral_abscissa(a) < -(margin + kEigenTolerance);
}

bool is_metzler(const Mat& a) {
    require_square(a, "is_metzler");
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i != j && a(i, j) < 0.0) {
                return false;
            }
        }
    }
    return true;
}

bool spectral_radius_lt_one(const Mat& a) { return spectral_radius(a) < 1.0 - kEigenTolerance; }

bool entrywise_leq(const Mat& a, const Mat& b, double slack) {
    require_same_shape(a, b, "entrywise_leq");
    return ((a.eigen() - b.eigen()).array() <= slack).all();
}

}  // namespace intbox
