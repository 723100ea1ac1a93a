#include "intbox/interval.hpp"

#include <cmath>
#include <string>

#include "intbox/error.hpp"

namespace intbox {

IntervalBox::IntervalBox(Vec center, Vec radius) : center_(std::move(center)), radius_(std::move(radius)) {
    if (center_.size() != radius_.size() || center_.size() == 0) {
        throw DimensionError("IntervalBox: center/radius size mismatch");
    }
    detail::require_finite(center_, "IntervalBox center");
    detail::require_finite(radius_, "IntervalBox radius");
    for (Eigen::Index i = 0; i < radius_.size(); ++i) {
        if (radius_(i) < 0.0) {
            throw InvalidArgument("IntervalBox: negative radius at index " + std::to_string(i));
        }
    }
    lower_ = center_ - radius_;
    upper_ = center_ + radius_;
}

IntervalBox IntervalBox::from_bounds(const Vec& lower, const Vec& upper) {
    if (lower.size() != upper.size() || lower.size() == 0) {
        throw DimensionError("from_bounds: lower/upper size mismatch");
    }
    detail::require_finite(lower, "from_bounds lower");
    detail::require_finite(upper, "from_bounds upper");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (lower(i) > upper(i)) {
            throw InvalidArgument("from_bounds: lower > upper at index " + std::to_string(i));
        }
    }
    IntervalBox box;
    box.lower_ = lower;
    box.upper_ = upper;
    box.center_ = (upper + lower) / 2.0;
    box.radius_ = ((upper - lower) / 2.0).cwiseMax(0.0);
    return box;
}

bool IntervalBox::contains(const Vec& x, double slack) const {
    if (x.size() != dimension()) {
        throw DimensionError("IntervalBox::contains: dimension mismatch");
    }
    return ((lower_.array() - slack) <= x.array()).all() && (x.array() <= (upper_.array() + slack)).all();
}

void QuadratureSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidArgument("QuadratureSpec: step must be > 0");
    }
    if (substeps < 1) {
        throw InvalidArgument("QuadratureSpec: substeps must be >= 1");
    }
    if (rule == QuadratureRule::Simpson && substeps % 2 != 0) {
        throw InvalidArgument("QuadratureSpec: Simpson needs an even number of substeps");
    }
}

namespace detail {

void quadrature_nodes(double t0, double t1, const QuadratureSpec& quad, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    quad.validate();
    if (!(t1 >= t0)) {
        throw InvalidArgument("quadrature: t1 < t0");
    }
    nodes.clear();
    weights.clear();
    if (t1 == t0) {
        nodes.push_back(t0);
        weights.push_back(0.0);
        return;
    }
    long panels = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / quad.panel() - 1e-9)));
    if (quad.rule == QuadratureRule::Simpson && panels % 2 != 0) {
        ++panels;
    }
    const double h = (t1 - t0) / static_cast<double>(panels);
    nodes.resize(static_cast<std::size_t>(panels) + 1);
    weights.resize(nodes.size());
    for (long m = 0; m <= panels; ++m) {
        nodes[m] = (m == panels) ? t1 : t0 + static_cast<double>(m) * h;
        double w = 0.0;
        if (quad.rule == QuadratureRule::Trapezoid) {
            w = (m == 0 || m == panels) ? h / 2.0 : h;
        } else {
            w = (m == 0 || m == panels) ? h / 3.0 : (m % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
        }
        weights[m] = w;
    }
}

}  // namespace detail

namespace {

void check_terms(const Mat& F, const IntervalBox& z_box, const std::vector<WeightedKernelTerm>& terms) {
    if (F.cols() != z_box.dimension()) {
        throw DimensionError("affine image: F columns must match z_box dimension");
    }
    for (const auto& term : terms) {
        if (!term.H) {
            throw InvalidArgument("affine image: kernel term without H");
        }
        if (!(term.t1 >= term.t0)) {
            throw InvalidArgument("affine image: kernel term with t1 < t0");
        }
    }
}

Eigen::MatrixXd eval_kernel(const WeightedKernelTerm& term, double tau, Eigen::Index rows) {
    Eigen::MatrixXd H = term.H(tau);
    if (H.rows() != rows || H.cols() != term.w_box.dimension()) {
        throw DimensionError("affine image: kernel H(tau) has wrong shape");
    }
    return H;
}

}  // namespace

IntervalBox tightest_affine_image(const Mat& F, const IntervalBox& z_box, const std::vector<WeightedKernelTerm>& terms,
                                  const QuadratureSpec& quad) {
    quad.validate();
    check_terms(F, z_box, terms);
    const Eigen::MatrixXd& f = F.eigen();
    Vec c = f * z_box.center();
    Vec p = f.cwiseAbs() * z_box.radius();

    std::vector<double> nodes, weights;
    for (const auto& term : terms) {
        detail::quadrature_nodes(term.t0, term.t1, quad, nodes, weights);
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            const Eigen::MatrixXd H = eval_kernel(term, nodes[m], f.rows());
            c += weights[m] * (H * term.w_box.center(nodes[m]));
            p += weights[m] * (H.cwiseAbs() * term.w_box.radius(nodes[m]));
        }
    }
    return IntervalBox(std::move(c), p.cwiseMax(0.0));
}

namespace {
double sign_plus(double x) { return x >= 0.0 ? 1.0 : -1.0; }
}  // namespace

ExtremalRealization extremal_realizers(const Mat& F, const IntervalBox& z_box,
                                       const std::vector<WeightedKernelTerm>& terms, Eigen::Index coord,
                                       Sense sense) {
    check_terms(F, z_box, terms);
    if (coord < 0 || coord >= F.rows()) {
        throw InvalidArgument("extremal_realizers: coordinate " + std::to_string(coord) + " out of range");
    }
    const double orient = sense == Sense::Max ? 1.0 : -1.0;
    ExtremalRealization out;
    const Eigen::MatrixXd& f = F.eigen();
    out.z = z_box.center();
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        out.z(j) += orient * z_box.radius()(j) * sign_plus(f(coord, j));
    }
    const Eigen::Index rows = f.rows();
    for (const auto& term : terms) {
        out.w.emplace_back([term, coord, orient, rows](double tau) {
            const Eigen::MatrixXd H = eval_kernel(term, tau, rows);
            Vec w = term.w_box.center(tau);
            const Vec p = term.w_box.radius(tau);
            for (Eigen::Index j = 0; j < w.size(); ++j) {
                w(j) += orient * p(j) * sign_plus(H(coord, j));
            }
            return w;
        });
    }
    return out;
}

Vec evaluate_affine_map(const Mat& F, const Vec& z, const std::vector<WeightedKernelTerm>& terms,
                        const std::vector<VecFn>& w, const QuadratureSpec& quad) {
    quad.validate();
    if (F.cols() != z.size()) {
        throw DimensionError("evaluate_affine_map: F columns must match z");
    }
    if (w.size() != terms.size()) {
        throw DimensionError("evaluate_affine_map: one signal per kernel term required");
    }
    Vec x = F.eigen() * z;
    std::vector<double> nodes, weights;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        detail::quadrature_nodes(terms[k].t0, terms[k].t1, quad, nodes, weights);
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            x += weights[m] * (eval_kernel(terms[k], nodes[m], F.rows()) * w[k](nodes[m]));
        }
    }
    return x;
}

}  // namespace intbox
