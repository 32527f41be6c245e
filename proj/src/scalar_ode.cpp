#include "attractorlab/scalar_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "attractorlab/cocycle.hpp"
#include "attractorlab/errors.hpp"

namespace attractorlab {

namespace {

// Odd power |w|^{theta-1} w keeps RK stages well defined if an iterate
// grazes zero from below.
double odd_pow(double w, double theta) {
    return std::copysign(std::pow(std::abs(w), theta), w);
}

template <class F>
double rk4_step(F&& f, double t, double y, double h) {
    const double k1 = f(t, y);
    const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(t + h, y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Step-doubling error control around the classical RK4 step.
template <class F>
double advance_adaptive(F&& f, double t0, double t1, double y,
                        double rtol = 1e-10, double atol = 1e-12,
                        bool clamp_nonneg = true) {
    double t = t0;
    double h = std::min(0.5, t1 - t0);
    while (t < t1) {
        h = std::min({h, t1 - t, std::max(1.0, std::abs(t) / 64.0)});
        for (;;) {
            const double y_full = rk4_step(f, t, y, h);
            double y_half = rk4_step(f, t, y, 0.5 * h);
            y_half = rk4_step(f, t + 0.5 * h, y_half, 0.5 * h);
            const double err = std::abs(y_half - y_full) / 15.0;
            const double tol = atol + rtol * std::max(std::abs(y), std::abs(y_half));
            if (err <= tol || h <= 1e-12) {
                y = y_half + (y_half - y_full) / 15.0;
                if (clamp_nonneg && y < 0.0) y = 0.0;
                t += h;
                const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
                h *= std::clamp(grow, 0.2, 5.0);
                break;
            }
            h *= std::max(0.2, 0.9 * std::pow(tol / err, 0.2));
        }
    }
    return y;
}

}  // namespace

ScalarProblem::ScalarProblem(double theta_, HullPoint driver_)
    : theta(theta_), driver(std::move(driver_)) {
    if (!(theta > 1.0)) throw std::invalid_argument("scalar problem needs theta > 1");
}

double scalar_absorbing_radius(const ScalarProblem& sp) {
    const double bound = sp.driver.is_limit() ? std::abs(evaluate(sp.driver, 0.0))
                                              : sp.driver.driver.bound();
    return std::pow(2.0 * bound, 1.0 / (sp.theta - 1.0)) + 1.0;
}

double closed_form_v(const HullPoint& hp, double t, double tol) {
    const HullPoint at_t = advance(hp, t);
    // Push the fit window past any branch switch of the shifted driver.
    const double shift = at_t.is_limit() ? 0.0 : at_t.shift;
    const double T = std::max(400.0, 10.0 * (shift + 2.0));
    const auto res = tail_integral(at_t, 1.0, T, tol, 5e-3);
    if (!res.integrable)
        throw DivergentTail("exp(int a) is not integrable on (-inf,0]; the explicit solution formula does not apply at " +
                            at_t.label());
    if (res.fit.residual > 1e-3)
        throw InconclusiveFit("tail model residual too large to certify the improper integral");
    return res.value + res.tail_bound;
}

double entire_solution_w0(const HullPoint& hp, double t, double theta, double tol) {
    if (!(theta > 1.0)) throw std::invalid_argument("entire_solution_w0 needs theta > 1");
    return std::pow(closed_form_v(hp, t, tol), 1.0 / (1.0 - theta));
}

ScalarTrajectory integrate_scalar(const ScalarProblem& sp, double r, double t0,
                                  double t1, double dt) {
    if (r < 0.0)
        throw NegativeInitialCondition("scalar problems live on the nonnegative half line");
    if (!(dt > 0.0)) throw std::invalid_argument("output spacing dt must be positive");
    if (t1 < t0) throw std::invalid_argument("integration runs forward: t1 >= t0");

    const double inv = 1.0 / (sp.theta - 1.0);
    const auto f = [&](double t, double w) {
        return inv * (evaluate(sp.driver, t) * w - odd_pow(w, sp.theta));
    };

    ScalarTrajectory tr;
    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / dt - 1e-12)));
    tr.times.reserve(n + 1);
    tr.values.reserve(n + 1);
    tr.times.push_back(t0);
    tr.values.push_back(r);
    double y = r;
    for (int i = 1; i <= n; ++i) {
        const double ta = t0 + (t1 - t0) * (i - 1) / n;
        const double tb = (i == n) ? t1 : t0 + (t1 - t0) * i / n;
        y = advance_adaptive(f, ta, tb, y);
        tr.times.push_back(tb);
        tr.values.push_back(y);
    }
    return tr;
}

ScalarTrajectory integrate_reaction(const std::function<double(double)>& coeff,
                                    const std::function<double(double)>& g,
                                    double r, double t0, double t1, double dt) {
    if (r < 0.0)
        throw NegativeInitialCondition("reaction trajectories start in the nonnegative cone");
    const auto f = [&](double t, double y) { return coeff(t) * y + g(y); };
    ScalarTrajectory tr;
    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / dt - 1e-12)));
    tr.times.push_back(t0);
    tr.values.push_back(r);
    double y = r;
    for (int i = 1; i <= n; ++i) {
        const double ta = t0 + (t1 - t0) * (i - 1) / n;
        const double tb = (i == n) ? t1 : t0 + (t1 - t0) * i / n;
        y = advance_adaptive(f, ta, tb, y);
        tr.times.push_back(tb);
        tr.values.push_back(y);
    }
    return tr;
}

ScalarAttractor pullback_bstar(const ScalarProblem& sp, double r,
                               const std::vector<double>& horizons, double tol) {
    if (horizons.empty() || !std::is_sorted(horizons.begin(), horizons.end()))
        throw std::invalid_argument("pullback horizons must be a nonempty increasing list");
    if (r < scalar_absorbing_radius(sp))
        throw PreconditionFailed("pullback start must lie above the absorbing radius");

    const double inv = 1.0 / (sp.theta - 1.0);
    const auto f = [&](double t, double w) {
        return inv * (evaluate(sp.driver, t) * w - odd_pow(w, sp.theta));
    };

    ScalarAttractor out;
    out.hull_point = sp.driver;
    double prev = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::infinity();
    for (double T : horizons) {
        const double v = advance_adaptive(f, -T, 0.0, r);
        if (!std::isnan(prev)) gap = std::abs(v - prev);
        prev = v;
        out.b_star = v;
        out.horizon = T;
        out.cauchy_gap = gap;
        if (gap < tol) break;
    }
    if (!(out.cauchy_gap < tol))
        throw NotConverged("scalar pullback still moving at the largest horizon",
                           out.b_star, out.cauchy_gap);

    if (out.b_star >= kStronglyPositiveThreshold) {
        out.classification = SectionClass::StronglyPositive;
    } else if (out.b_star <= kTrivialThreshold && out.cauchy_gap <= 1e-8) {
        out.classification = SectionClass::Trivial;
    } else {
        out.classification = SectionClass::Indeterminate;
    }
    return out;
}

}  // namespace attractorlab
