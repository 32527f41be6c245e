#pragma once

#include <functional>
#include <vector>

#include "attractorlab/classification.hpp"
#include "attractorlab/hull.hpp"

namespace attractorlab {

/// Scalar dissipative problem w' = (a(p.t) w - w^theta) / (theta - 1) on
/// the nonnegative half line. This is the exactly solvable reduction the
/// PDE modules are checked against in the spatially homogeneous Neumann
/// case.
struct ScalarProblem {
    double theta = 3.0;  // > 1
    HullPoint driver;

    ScalarProblem(double theta_, HullPoint driver_);
};

/// Radius above which every solution decreases: (2 sup|a|)^{1/(theta-1)} + 1.
double scalar_absorbing_radius(const ScalarProblem& sp);

/// v(t) = integral_{-inf}^t exp(-integral_s^t a) ds, the bounded solution of
/// v' = -a v + 1. Requires exp(int_0^t a) integrable on (-inf, 0]; throws
/// DivergentTail otherwise. The quadrature is truncated with a fitted tail
/// whose certified residual stays below tol.
double closed_form_v(const HullPoint& hp, double t, double tol = 1e-8);

/// Entire positive bounded solution w0(t) = v(t)^{1/(1-theta)}.
double entire_solution_w0(const HullPoint& hp, double t, double theta,
                          double tol = 1e-8);

struct ScalarTrajectory {
    std::vector<double> times;
    std::vector<double> values;
    double final_value() const { return values.empty() ? 0.0 : values.back(); }
};

/// Adaptive 4th-order integration of the scalar problem from (t0, r) to t1,
/// sampled every dt. Nonnegative data stay nonnegative. Throws
/// NegativeInitialCondition for r < 0.
ScalarTrajectory integrate_scalar(const ScalarProblem& sp, double r, double t0,
                                  double t1, double dt);

/// General scalar reaction integrator y' = coeff(t) y + g(y), same stepper.
/// Serves as the independent oracle for spatially homogeneous PDE runs.
ScalarTrajectory integrate_reaction(const std::function<double(double)>& coeff,
                                    const std::function<double(double)>& g,
                                    double r, double t0, double t1, double dt);

struct ScalarAttractor {
    HullPoint hull_point;
    double b_star = 0.0;
    double horizon = 0.0;
    double cauchy_gap = 0.0;
    SectionClass classification = SectionClass::Indeterminate;
};

/// Pullback limit b*(p) = lim_T w(T, p.(-T), r) over a growing horizon
/// ladder; stops when successive values differ by less than tol. Throws
/// NotConverged when the gap at the last horizon is still above tol.
ScalarAttractor pullback_bstar(const ScalarProblem& sp, double r,
                               const std::vector<double>& horizons, double tol);

}  // namespace attractorlab
