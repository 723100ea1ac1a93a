#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "intbox/error.hpp"
#include "intbox/signals.hpp"

using namespace intbox;
using testing::vec;

TEST_SUITE("signals") {

TEST_CASE("sinusoid box signal") {
    const BoxSignal w = testing::example_w();
    CHECK(w.dimension() == 1);
    CHECK(w.center(0.25)(0) == doctest::Approx(5.0 * std::sin(2 * std::numbers::pi * 0.3 * 0.25)));
    CHECK(w.radius(0.0041)(0) == doctest::Approx(std::fabs(2.0 * std::sin(2 * std::numbers::pi * 50 * 0.0041))));
    REQUIRE(w.sup_radius());
    CHECK((*w.sup_radius())(0) == 2.0);
    CHECK_FALSE(w.has_constant_radius());

    const BoxSignal point = sinusoid_box_signal(1.0, 1.0, 0.0, 3.0);
    for (double t : {0.0, 0.1, 0.37, 2.0}) CHECK(point.radius(t)(0) == 0.0);
    CHECK(point.has_constant_radius());
}

TEST_CASE("negative radius from a callable is rejected") {
    const BoxSignal bad(1, [](double) { return vec({0}); }, [](double t) { return vec({t - 1.0}); });
    CHECK(bad.radius(2.0)(0) == 1.0);
    CHECK_THROWS_AS((void)bad.radius(0.0), InvalidArgument);
    const BoxSignal wrong(2, [](double) { return vec({0, 0}); }, [](double) { return vec({1}); });
    CHECK_THROWS_AS((void)wrong.radius(0.0), DimensionError);
}

TEST_CASE("constant radius hull") {
    const BoxSignal h = constant_radius_hull(testing::example_w());
    CHECK(h.has_constant_radius());
    for (double t : {0.0, 0.003, 0.005, 1.234}) {
        CHECK(h.radius(t)(0) == 2.0);
        CHECK(h.center(t)(0) == testing::example_w().center(t)(0));
    }

    const BoxSignal c = constant_box_signal(vec({1, 2}), vec({0.5, 0.25}));
    const BoxSignal same = constant_radius_hull(c);
    CHECK(same.radius(3.0) == c.radius(3.0));

    const BoxSignal bump(1, [](double) { return vec({0}); }, [](double t) { return vec({std::fabs(std::sin(t)) + 1.0}); });
    CHECK(scan_sup_radius(bump, 2 * std::numbers::pi, 1e-3)(0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK_THROWS_AS(constant_radius_hull(bump), InvalidArgument);
    const BoxSignal hb = constant_radius_hull(bump, HullSearch{2 * std::numbers::pi});
    for (double t = 0.0; t < 7.0; t += 0.01) CHECK(hb.radius(t)(0) >= bump.radius(t)(0));
    CHECK(hb.radius(0.0)(0) == doctest::Approx(2.0 * 1.01).epsilon(1e-5));
}

TEST_CASE("sampled signal interpolation") {
    const SampledSignal s({0.0, 1.0, 3.0}, {vec({0}), vec({2}), vec({-2})});
    CHECK(s(0.5)(0) == doctest::Approx(1.0));
    CHECK(s(2.0)(0) == doctest::Approx(0.0));
    CHECK(s(3.0)(0) == -2.0);
    CHECK_THROWS_AS((void)s(3.5), InvalidArgument);
    CHECK_THROWS_AS((void)s(-0.1), InvalidArgument);

    const SampledSignal z({0.0, 1.0, 3.0}, {vec({0}), vec({2}), vec({-2})}, Interpolation::ZeroOrderHold);
    CHECK(z(0.99)(0) == 0.0);
    CHECK(z(1.5)(0) == 2.0);

    CHECK_THROWS_AS(SampledSignal({0.0, 0.0}, {vec({0}), vec({1})}), InvalidArgument);
    CHECK_THROWS_AS(SampledSignal({0.0, 1.0}, {vec({0}), vec({1, 2})}), DimensionError);
}

TEST_CASE("closed-loop stacking") {
    const SampledSignal y({0.0, 1.0}, {vec({1.0}), vec({3.0})});
    const BoxSignal zero_w = constant_box_signal(vec({0}), vec({0}));
    const BoxSignal zero_v = constant_box_signal(vec({0}), vec({0}));
    const BoxSignal s0 = stack_closed_loop_signal(zero_w, zero_v, y);
    CHECK(s0.dimension() == 3);
    CHECK(s0.radius(0.3) == Vec::Zero(3));

    const BoxSignal w = testing::example_w();
    const BoxSignal v = constant_box_signal(vec({0.01}), vec({0.1}));
    const BoxSignal s = stack_closed_loop_signal(w, v, y);
    const double t = 0.5;
    const Vec c = s.center(t), p = s.radius(t);
    CHECK(c(0) == w.center(t)(0));
    CHECK(c(1) == doctest::Approx(2.0));
    CHECK(c(2) == 0.01);
    CHECK(p(0) == w.radius(t)(0));
    CHECK(p(1) == 0.0);
    CHECK(p(2) == 0.1);
    CHECK_THROWS_AS((void)s.center(1.5), InvalidArgument);
}

}  // TEST_SUITE
