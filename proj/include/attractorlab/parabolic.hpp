#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "attractorlab/hull.hpp"

namespace attractorlab {

enum class BoundaryKind { Neumann, Robin, Dirichlet };

std::string to_string(BoundaryKind bc);

/// Uniform 1-D grid on [0, length].
struct Grid {
    double length = 1.0;
    int n_nodes = 64;
    BoundaryKind bc = BoundaryKind::Neumann;
    double robin_alpha = 0.0;  // boundary weight, >= 0

    Grid() = default;
    Grid(double length_, int n_nodes_, BoundaryKind bc_, double robin_alpha_ = 0.0);

    double dx() const { return length / (n_nodes - 1); }
    std::vector<double> nodes() const;
};

/// Grid function with its boundary-condition tag. Dirichlet fields vanish
/// at the boundary nodes.
struct FieldState {
    std::vector<double> values;
    BoundaryKind bc = BoundaryKind::Neumann;

    double sup_norm() const;
    double min_value() const;
    double min_interior() const;

    static FieldState constant(const Grid& grid, double c);
};

/// Dissipative reaction term. PurePower: g(y) = -rho |y|^{theta-1} y.
/// Deadzone: g(y) = -rho sign(y) (|y| - r0)_+^theta, identically zero on
/// the band |y| <= r0 where the problem is exactly linear.
struct NonlinearitySpec {
    enum class Kind { PurePower, Deadzone };
    Kind kind = Kind::PurePower;
    double rho = 1.0;    // > 0
    double theta = 3.0;  // > 1
    double r0 = 0.0;     // Deadzone only, > 0

    static NonlinearitySpec pure_power(double rho, double theta);
    static NonlinearitySpec deadzone(double rho, double theta, double r0);

    double g(double y) const;
    double dg(double y) const;
    bool linear_dissipative() const { return kind == Kind::Deadzone; }
};

/// Linear coefficient h(p.t, x) = gamma_offset + a(p.t) * profile(x). An
/// empty profile means the all-ones profile (spatially homogeneous).
struct LinearCoefficientSpec {
    double gamma_offset = 0.0;
    HullPoint driver;
    std::vector<double> spatial_profile;

    bool homogeneous() const;
    /// The constant profile value; throws HeterogeneousProfile otherwise.
    double profile_value() const;
    LinearCoefficientSpec at(const HullPoint& hp) const;
    double sup_coefficient() const;
};

/// Smallest eigenvalue of the discrete -Laplacian under the grid's boundary
/// condition, with its positive eigenvector normalized to sup-norm one.
std::pair<double, FieldState> principal_eigenpair(const Grid& grid);

/// One IMEX trajectory: backward-Euler diffusion, explicit reaction. The
/// step must satisfy dt * max(|h| + |g'(y)|) <= 1, which keeps the scheme
/// order preserving; violations throw StepTooLarge.
FieldState evolve(const LinearCoefficientSpec& coeff, const NonlinearitySpec& g,
                  const Grid& grid, const FieldState& z0, double t, double dt);

FieldState evolve_linear(const LinearCoefficientSpec& coeff, const Grid& grid,
                         const FieldState& z0, double t, double dt);

/// Linear evolution tracking the field in normalized form together with the
/// log of its sup-norm, so exponentially growing or decaying runs neither
/// overflow nor underflow.
struct LogNormField {
    FieldState direction;  // sup-norm one
    double log_norm = 0.0;
};

LogNormField evolve_linear_lognorm(const LinearCoefficientSpec& coeff,
                                   const Grid& grid, const FieldState& z0,
                                   double t, double dt);

/// Sampled evolve: calls on_sample(t, field) at every multiple of
/// dt_sample (including t = 0) while stepping with dt.
void evolve_sampled(const LinearCoefficientSpec& coeff, const NonlinearitySpec* g,
                    const Grid& grid, const FieldState& z0, double t, double dt,
                    double dt_sample,
                    const std::function<void(double, const FieldState&)>& on_sample);

/// Principal-mode multiplier c(t, p) of the linear flow, extracted from the
/// sup-norm of the evolved eigenvector. Negative times use the relation
/// c(-t, p) = 1 / c(t, p.(-t)). Requires a spatially constant profile.
double pde_cocycle(const LinearCoefficientSpec& coeff, const Grid& grid,
                   double t, double dt);

/// Absorbing radius for pullback experiments with this problem.
double absorbing_radius(const LinearCoefficientSpec& coeff,
                        const NonlinearitySpec& g);

}  // namespace attractorlab
