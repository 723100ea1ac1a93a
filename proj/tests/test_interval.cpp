#include <doctest.h>

#include "helpers.hpp"
#include "intbox/error.hpp"
#include "intbox/interval.hpp"

using namespace intbox;
using testing::vec;

namespace {

std::vector<WeightedKernelTerm> one_term(MatFn h, BoxSignal w, double t0, double t1) {
    return {WeightedKernelTerm{std::move(h), std::move(w), t0, t1}};
}

// Piecewise-constant admissible signal with levels drawn in [-1, 1].
VecFn random_piecewise(std::mt19937_64& rng, const BoxSignal& box, double t0, double t1, int pieces) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec> levels;
    for (int k = 0; k < pieces; ++k) levels.push_back(Vec::NullaryExpr(box.dimension(), [&] { return u(rng); }));
    return [=](double t) {
        const double s = (t - t0) / (t1 - t0);
        const int k = std::clamp(static_cast<int>(s * pieces), 0, pieces - 1);
        return Vec(box.center(t) + box.radius(t).cwiseProduct(levels[static_cast<std::size_t>(k)]));
    };
}

}  // namespace

TEST_SUITE("interval") {

TEST_CASE("from_bounds examples") {
    const auto b = IntervalBox::from_bounds(vec({-5, 0.2}), vec({1, 4.2}));
    CHECK(b.center()(0) == -2.0);
    CHECK(b.center()(1) == doctest::Approx(2.2));
    CHECK(b.radius()(0) == 3.0);
    CHECK(b.radius()(1) == doctest::Approx(2.0));

    const auto d = IntervalBox::from_bounds(vec({7}), vec({7}));
    CHECK(d.center()(0) == 7.0);
    CHECK(d.radius()(0) == 0.0);

    const auto p = testing::example_x0();
    CHECK(p.lower()(0) == -5.0);
    CHECK(p.lower()(1) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(p.upper()(0) == 1.0);
    CHECK(p.upper()(1) == doctest::Approx(4.2).epsilon(1e-15));
}

TEST_CASE("invalid boxes") {
    CHECK_THROWS_AS(IntervalBox(vec({0, 0}), vec({1, -1})), InvalidArgument);
    CHECK_THROWS_AS(IntervalBox(vec({0, 0}), vec({1})), DimensionError);
    CHECK_THROWS_AS(IntervalBox::from_bounds(vec({0, 2}), vec({1, 1})), InvalidArgument);
    try {
        (void)IntervalBox::from_bounds(vec({0, 2}), vec({1, 1}));
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("contains examples") {
    const IntervalBox b(vec({0}), vec({1}));
    CHECK(b.contains(vec({1})));
    CHECK_FALSE(b.contains(vec({1.0000001}), 0.0));
    CHECK(b.contains(vec({1.0000001}), 1e-6));
    CHECK(testing::example_x0().contains(vec({-5, -0.2})));
    CHECK_THROWS_AS((void)b.contains(vec({0, 0})), DimensionError);
}

TEST_CASE("round trip is exact") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 500; ++trial) {
        Vec lo(3), hi(3);
        for (int i = 0; i < 3; ++i) {
            const double a = u(rng), b = u(rng);
            lo(i) = std::min(a, b);
            hi(i) = std::max(a, b);
        }
        const auto b = IntervalBox::from_bounds(lo, hi);
        const auto r = IntervalBox::from_bounds(b.lower(), b.upper());
        CHECK(r.lower() == b.lower());
        CHECK(r.upper() == b.upper());
        CHECK(r.center() == b.center());
        CHECK(r.radius() == b.radius());
    }
}

TEST_CASE("affine image examples") {
    const IntervalBox z(vec({1, 2}), vec({0.5, 0.5}));
    const auto same = tightest_affine_image(Mat::identity(2), z, {});
    CHECK(same.center() == z.center());
    CHECK(same.radius() == z.radius());

    const auto r = tightest_affine_image(Mat{{1, -1}}, z, {});
    CHECK(r.center()(0) == -1.0);
    CHECK(r.radius()(0) == 1.0);

    const auto terms = one_term([](double) { return Eigen::MatrixXd::Ones(1, 1); },
                                constant_box_signal(vec({0}), vec({1})), 0.0, 1.0);
    const auto k = tightest_affine_image(Mat{{0}}, IntervalBox(vec({0}), vec({0})), terms);
    CHECK(k.center()(0) == doctest::Approx(0.0));
    CHECK(k.radius()(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("affine image without terms equals vertex enumeration") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(-3, 3), up(0, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const Mat F(testing::random_matrix(rng, 2, 2, 3.0));
        const IntervalBox z(vec({u(rng), u(rng)}), vec({up(rng), up(rng)}));
        const auto img = tightest_affine_image(F, z, {});
        Vec hi = Vec::Constant(2, -1e300), lo = Vec::Constant(2, 1e300);
        for (int v = 0; v < 4; ++v) {
            const Vec corner = z.center() + z.radius().cwiseProduct(vec({v & 1 ? 1.0 : -1.0, v & 2 ? 1.0 : -1.0}));
            const Vec y = F.eigen() * corner;
            hi = hi.cwiseMax(y);
            lo = lo.cwiseMin(y);
        }
        CHECK((img.upper() - hi).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((img.lower() - lo).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("extremal realizer examples") {
    const IntervalBox z(vec({1, 2}), vec({0.5, 0.25}));
    const auto up = extremal_realizers(Mat::identity(2), z, {}, 0, Sense::Max);
    CHECK(up.z(0) == 1.5);
    const auto neg = extremal_realizers(Mat{{-1, 0}}, z, {}, 0, Sense::Max);
    CHECK(neg.z(0) == 0.5);
    const auto lo = extremal_realizers(Mat{{-1, 0}}, z, {}, 0, Sense::Min);
    CHECK(lo.z(0) == 1.5);
    CHECK_THROWS_AS(extremal_realizers(Mat::identity(2), z, {}, 2, Sense::Max), InvalidArgument);
}

TEST_CASE("enclosure, attainability and monotonicity with a kernel term") {
    const Eigen::MatrixXd A = testing::example_A().eigen();
    const Eigen::MatrixXd B = testing::example_B().eigen();
    const double t = 0.7;
    const Mat F = expm(testing::example_A(), t);
    const MatFn H = [=](double tau) -> Eigen::MatrixXd { return detail::expm(A * (t - tau)) * B; };
    const BoxSignal w = constant_box_signal(vec({0.3}), vec({1.5}));
    const auto terms = one_term(H, w, 0.0, t);
    const IntervalBox z = testing::example_x0();
    const QuadratureSpec quad{1e-3, QuadratureRule::Trapezoid, 1};
    const auto img = tightest_affine_image(F, z, terms, quad);

    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec zs = z.center() + z.radius().cwiseProduct(vec({u(rng), u(rng)}));
        const Vec y = evaluate_affine_map(F, zs, terms, {random_piecewise(rng, w, 0.0, t, 1 + trial % 20)}, quad);
        CHECK(img.contains(y, 1e-12));
    }

    for (Eigen::Index i = 0; i < 2; ++i) {
        const auto hi = extremal_realizers(F, z, terms, i, Sense::Max);
        const auto lo = extremal_realizers(F, z, terms, i, Sense::Min);
        const Vec yh = evaluate_affine_map(F, hi.z, terms, hi.w, quad);
        const Vec yl = evaluate_affine_map(F, lo.z, terms, lo.w, quad);
        CHECK(yh(i) == doctest::Approx(img.upper()(i)).epsilon(1e-9));
        CHECK(yl(i) == doctest::Approx(img.lower()(i)).epsilon(1e-9));
    }

    const auto bigger_z = tightest_affine_image(F, IntervalBox(z.center(), 1.5 * z.radius()), terms, quad);
    const auto bigger_w =
        tightest_affine_image(F, z, one_term(H, constant_box_signal(vec({0.3}), vec({2.0})), 0.0, t), quad);
    CHECK(((bigger_z.radius() - img.radius()).array() >= 0.0).all());
    CHECK(((bigger_w.radius() - img.radius()).array() >= 0.0).all());
}

TEST_CASE("quadrature rules integrate polynomials exactly") {
    std::vector<double> nodes, weights;
    const auto integrate = [&](const QuadratureSpec& q, auto f) {
        detail::quadrature_nodes(0.0, 1.0, q, nodes, weights);
        double s = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
        return s;
    };
    const QuadratureSpec trap{0.1, QuadratureRule::Trapezoid, 1};
    const QuadratureSpec simp{0.1, QuadratureRule::Simpson, 2};
    CHECK(integrate(trap, [](double x) { return 3 * x + 1; }) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(integrate(simp, [](double x) { return x * x * x; }) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(integrate(simp, [](double x) { return std::exp(x); }) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-7));
    CHECK_THROWS_AS((QuadratureSpec{0.1, QuadratureRule::Simpson, 3}.validate()), InvalidArgument);
    CHECK_THROWS_AS((QuadratureSpec{0.0, QuadratureRule::Trapezoid, 1}.validate()), InvalidArgument);
}

TEST_CASE("kernel shape is checked") {
    const auto terms = one_term([](double) { return Eigen::MatrixXd::Ones(3, 1); },
                                constant_box_signal(vec({0}), vec({1})), 0.0, 1.0);
    CHECK_THROWS_AS(tightest_affine_image(Mat::identity(2), testing::example_x0(), terms), DimensionError);
    CHECK_THROWS_AS(tightest_affine_image(Mat::identity(3), testing::example_x0(), {}), DimensionError);
}

}  // TEST_SUITE
