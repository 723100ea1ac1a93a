#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "intbox/interval.hpp"
#include "intbox/mat.hpp"
#include "intbox/signals.hpp"
#include "intbox/system.hpp"

namespace testing {

inline intbox::Mat example_A() { return intbox::Mat{{-3.0, 1.5}, {-2.0, -2.0}}; }
inline intbox::Mat example_B() { return intbox::Mat{{-1.0}, {0.0}}; }

inline intbox::LtiSystem example_system(bool with_c = false) {
    if (with_c) return intbox::LtiSystem(example_A(), example_B(), intbox::Mat{{1.0, 0.0}});
    return intbox::LtiSystem(example_A(), example_B());
}

inline intbox::IntervalBox example_x0() {
    return intbox::IntervalBox(intbox::Vec((Eigen::Vector2d() << -2.0, 2.0).finished()),
                               intbox::Vec((Eigen::Vector2d() << 3.0, 2.2).finished()));
}

inline intbox::BoxSignal example_w() { return intbox::sinusoid_box_signal(5.0, 0.3, 2.0, 50.0); }

inline intbox::Vec vec(std::initializer_list<double> xs) {
    intbox::Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

// Independent exponential: Taylor series on A / 2^s with ||A / 2^s|| <= 1/2, then squaring.
inline Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    while (norm / std::ldexp(1.0, s) > 0.5) ++s;
    const Eigen::MatrixXd x = a / std::ldexp(1.0, s);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < s; ++k) sum = sum * sum;
    return sum;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return Eigen::MatrixXd::NullaryExpr(r, c, [&] { return u(rng); });
}

}  // namespace testing
