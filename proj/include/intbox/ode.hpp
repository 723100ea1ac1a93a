#pragma once

#include "intbox/mat.hpp"

namespace intbox {

/// One classical RK4 step of x' = f(t, x).
template <class F>
Vec rk4_step(F&& f, double t, const Vec& x, double h) {
    const Vec k1 = f(t, x);
    const Vec k2 = f(t + h / 2.0, x + (h / 2.0) * k1);
    const Vec k3 = f(t + h / 2.0, x + (h / 2.0) * k2);
    const Vec k4 = f(t + h, x + h * k3);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace intbox
