#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "attractorlab/hull.hpp"

namespace attractorlab {

/// Composite Simpson rule on a smooth integrand, panels of width <= step.
/// Fourth order in the panel width.
template <class F>
double simpson_smooth(F&& f, double a, double b, double step) {
    if (a == b) return 0.0;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double l = a + i * h;
        const double r = (i + 1 == n) ? b : a + (i + 1) * h;
        sum += (r - l) / 6.0 * (f(l) + 4.0 * f(0.5 * (l + r)) + f(r));
    }
    return sum;
}

/// Signed integral of the coefficient t -> evaluate(hp, t) over [t0, t1],
/// with quadrature nodes forced at the driver's branch switches so each
/// Simpson panel sees a smooth integrand.
double integrate_coefficient(const HullPoint& hp, double t0, double t1, double step);

}  // namespace attractorlab
