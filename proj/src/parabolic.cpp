#include "attractorlab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "attractorlab/errors.hpp"

namespace attractorlab {

namespace {

void check_field(const Grid& grid, const FieldState& z) {
    if (static_cast<int>(z.values.size()) != grid.n_nodes)
        throw std::invalid_argument("field size does not match the grid");
    if (grid.bc == BoundaryKind::Dirichlet) {
        if (std::abs(z.values.front()) > 1e-12 || std::abs(z.values.back()) > 1e-12)
            throw std::invalid_argument("Dirichlet fields must vanish at the boundary nodes");
    }
}

// Tridiagonal system (I + mu*A) y = rhs where A is the discrete -Laplacian
// stencil including the ghost-node boundary closure. Rows:
//   Neumann   : A_00 =  2, A_01 = -2
//   Robin     : A_00 =  2 (1 + alpha dx), A_01 = -2
//   Dirichlet : identity row, rhs forced to zero
struct ImplicitSolver {
    int n;
    BoundaryKind bc;
    std::vector<double> diag, off_lo, off_hi;  // matrix I + mu*A
    std::vector<double> cp;                    // Thomas forward coefficients
    mutable std::vector<double> dp;

    ImplicitSolver(const Grid& grid, double dt) {
        n = grid.n_nodes;
        bc = grid.bc;
        const double mu = dt / (grid.dx() * grid.dx());
        diag.assign(n, 1.0 + 2.0 * mu);
        off_lo.assign(n, -mu);
        off_hi.assign(n, -mu);
        switch (grid.bc) {
            case BoundaryKind::Neumann:
                off_hi[0] = -2.0 * mu;
                off_lo[n - 1] = -2.0 * mu;
                break;
            case BoundaryKind::Robin: {
                const double adx = grid.robin_alpha * grid.dx();
                diag[0] = 1.0 + 2.0 * mu * (1.0 + adx);
                off_hi[0] = -2.0 * mu;
                diag[n - 1] = 1.0 + 2.0 * mu * (1.0 + adx);
                off_lo[n - 1] = -2.0 * mu;
                break;
            }
            case BoundaryKind::Dirichlet:
                diag[0] = diag[n - 1] = 1.0;
                off_hi[0] = 0.0;
                off_lo[n - 1] = 0.0;
                break;
        }
        // Precompute the forward-elimination coefficients once; only the
        // right-hand side changes between steps.
        cp.assign(n, 0.0);
        dp.assign(n, 0.0);
        cp[0] = off_hi[0] / diag[0];
        for (int i = 1; i < n; ++i)
            cp[i] = off_hi[i] / (diag[i] - off_lo[i] * cp[i - 1]);
    }

    void solve(std::vector<double>& rhs) const {
        if (bc == BoundaryKind::Dirichlet) rhs.front() = rhs.back() = 0.0;
        dp[0] = rhs[0] / diag[0];
        for (int i = 1; i < n; ++i)
            dp[i] = (rhs[i] - off_lo[i] * dp[i - 1]) / (diag[i] - off_lo[i] * cp[i - 1]);
        rhs[n - 1] = dp[n - 1];
        for (int i = n - 2; i >= 0; --i) rhs[i] = dp[i] - cp[i] * rhs[i + 1];
    }

    // y -> A y (for eigenvalue residuals), using mu = 1.
    static std::vector<double> apply_neg_laplacian(const Grid& grid,
                                                   const std::vector<double>& y) {
        const int n = grid.n_nodes;
        const double idx2 = 1.0 / (grid.dx() * grid.dx());
        std::vector<double> out(n, 0.0);
        for (int i = 1; i + 1 < n; ++i)
            out[i] = (-y[i - 1] + 2.0 * y[i] - y[i + 1]) * idx2;
        switch (grid.bc) {
            case BoundaryKind::Neumann:
                out[0] = (2.0 * y[0] - 2.0 * y[1]) * idx2;
                out[n - 1] = (2.0 * y[n - 1] - 2.0 * y[n - 2]) * idx2;
                break;
            case BoundaryKind::Robin: {
                const double adx = grid.robin_alpha * grid.dx();
                out[0] = (2.0 * (1.0 + adx) * y[0] - 2.0 * y[1]) * idx2;
                out[n - 1] = (2.0 * (1.0 + adx) * y[n - 1] - 2.0 * y[n - 2]) * idx2;
                break;
            }
            case BoundaryKind::Dirichlet:
                out[0] = out[n - 1] = 0.0;
                break;
        }
        return out;
    }
};

struct StepContext {
    const LinearCoefficientSpec& coeff;
    const NonlinearitySpec* g;
    const Grid& grid;
    std::vector<double> profile;

    StepContext(const LinearCoefficientSpec& c, const NonlinearitySpec* gg, const Grid& gr)
        : coeff(c), g(gg), grid(gr) {
        if (c.spatial_profile.empty()) {
            profile.assign(gr.n_nodes, 1.0);
        } else {
            if (static_cast<int>(c.spatial_profile.size()) != gr.n_nodes)
                throw std::invalid_argument("spatial profile size does not match the grid");
            profile = c.spatial_profile;
        }
    }
};

// One explicit reaction evaluation y -> y + dt*(h y + g(y)), with the
// monotonicity bound enforced.
void explicit_reaction(const StepContext& ctx, double t, double dt,
                       std::vector<double>& y) {
    const double a = evaluate(ctx.coeff.driver, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double h = ctx.coeff.gamma_offset + a * ctx.profile[i];
        const double gp = ctx.g ? ctx.g->dg(y[i]) : 0.0;
        worst = std::max(worst, std::abs(h) + std::abs(gp));
        y[i] = y[i] * (1.0 + dt * h) + (ctx.g ? dt * ctx.g->g(y[i]) : 0.0);
    }
    if (dt * worst > 1.0 + 1e-12)
        throw StepTooLarge("dt * max(|h| + |g'(y)|) = " + std::to_string(dt * worst) +
                           " exceeds 1; shrink the time step");
}

FieldState run_imex(const LinearCoefficientSpec& coeff, const NonlinearitySpec* g,
                    const Grid& grid, const FieldState& z0, double t, double dt,
                    double dt_sample,
                    const std::function<void(double, const FieldState&)>* on_sample,
                    double* log_norm_out) {
    check_field(grid, z0);
    if (t < 0.0) throw std::invalid_argument("evolve runs forward in time");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");

    FieldState state = z0;
    if (log_norm_out) *log_norm_out = 0.0;
    if (on_sample) (*on_sample)(0.0, state);
    if (t == 0.0) return state;

    const long n_steps = std::max<long>(1, std::lround(std::ceil(t / dt - 1e-9)));
    const double h = t / static_cast<double>(n_steps);
    const ImplicitSolver solver(grid, h);
    const StepContext ctx(coeff, g, grid);

    long sample_every = 0;
    if (on_sample && dt_sample > 0.0)
        sample_every = std::max<long>(1, std::lround(dt_sample / h));

    for (long k = 0; k < n_steps; ++k) {
        const double tk = h * static_cast<double>(k);
        explicit_reaction(ctx, tk, h, state.values);
        solver.solve(state.values);
        if (log_norm_out) {
            const double s = state.sup_norm();
            if (s > 0.0) {
                *log_norm_out += std::log(s);
                for (double& v : state.values) v /= s;
            }
        }
        if (sample_every && ((k + 1) % sample_every == 0 || k + 1 == n_steps))
            (*on_sample)(h * static_cast<double>(k + 1), state);
    }
    return state;
}

}  // namespace

std::string to_string(BoundaryKind bc) {
    switch (bc) {
        case BoundaryKind::Neumann: return "neumann";
        case BoundaryKind::Robin: return "robin";
        case BoundaryKind::Dirichlet: return "dirichlet";
    }
    return "neumann";
}

Grid::Grid(double length_, int n_nodes_, BoundaryKind bc_, double robin_alpha_)
    : length(length_), n_nodes(n_nodes_), bc(bc_), robin_alpha(robin_alpha_) {
    if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
    if (n_nodes < 16) throw std::invalid_argument("grid needs at least 16 nodes");
    if (robin_alpha < 0.0) throw std::invalid_argument("Robin weight must be nonnegative");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(n_nodes);
    for (int i = 0; i < n_nodes; ++i) xs[i] = length * i / (n_nodes - 1);
    return xs;
}

double FieldState::sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double FieldState::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

double FieldState::min_interior() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < values.size(); ++i) m = std::min(m, values[i]);
    return m;
}

FieldState FieldState::constant(const Grid& grid, double c) {
    FieldState f;
    f.bc = grid.bc;
    f.values.assign(grid.n_nodes, c);
    if (grid.bc == BoundaryKind::Dirichlet) {
        f.values.front() = 0.0;
        f.values.back() = 0.0;
    }
    return f;
}

namespace {

// Numeric self-check of the dissipativity conditions on a sample grid:
// g(0) = g'(0) = 0, the sign condition y g(y) <= 0, oddness, the zero set
// [-r0, r0] exactly, strict sublinearity beyond the band for theta > 1,
// and g(y)/y decreasing toward -infinity.
void check_dissipativity(const NonlinearitySpec& g) {
    if (g.g(0.0) != 0.0 || g.dg(0.0) != 0.0)
        throw std::invalid_argument("reaction term must vanish to first order at zero");
    const double eps = g.r0 > 0.0 ? g.r0 * 1e-3 : 1e-6;
    if (g.r0 > 0.0 && (g.g(g.r0 - eps) != 0.0 || g.g(g.r0 + eps) >= 0.0))
        throw std::invalid_argument("zero set of the reaction term must be exactly the band");
    if (g.r0 == 0.0 && !(g.g(eps) < 0.0))
        throw std::invalid_argument("purely dissipative term must be active near zero");
    double prev_quotient = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double y = g.r0 + std::pow(2.0, k - 1);
        if (!(y * g.g(y) <= 0.0) || g.g(-y) != -g.g(y))
            throw std::invalid_argument("reaction term must be odd with y g(y) <= 0");
        for (double lambda : {1.5, 2.0, 5.0})
            if (!(g.g(lambda * y) < lambda * g.g(y)))
                throw std::invalid_argument("reaction term must be strictly sublinear beyond the band");
        const double q = g.g(y) / y;
        if (!(q < prev_quotient))
            throw std::invalid_argument("g(y)/y must decrease without bound");
        prev_quotient = q;
    }
}

}  // namespace

NonlinearitySpec NonlinearitySpec::pure_power(double rho, double theta) {
    if (!(rho > 0.0) || !(theta > 1.0))
        throw std::invalid_argument("pure power term needs rho > 0 and theta > 1");
    NonlinearitySpec g;
    g.kind = Kind::PurePower;
    g.rho = rho;
    g.theta = theta;
    check_dissipativity(g);
    return g;
}

NonlinearitySpec NonlinearitySpec::deadzone(double rho, double theta, double r0) {
    if (!(rho > 0.0) || !(theta > 1.0) || !(r0 > 0.0))
        throw std::invalid_argument("deadzone term needs rho > 0, theta > 1 and r0 > 0");
    NonlinearitySpec g;
    g.kind = Kind::Deadzone;
    g.rho = rho;
    g.theta = theta;
    g.r0 = r0;
    check_dissipativity(g);
    return g;
}

double NonlinearitySpec::g(double y) const {
    if (kind == Kind::PurePower)
        return -rho * std::pow(std::abs(y), theta - 1.0) * y;
    const double s = std::abs(y) - r0;
    if (s <= 0.0) return 0.0;
    return -rho * std::copysign(std::pow(s, theta), y);
}

double NonlinearitySpec::dg(double y) const {
    if (kind == Kind::PurePower) return -rho * theta * std::pow(std::abs(y), theta - 1.0);
    const double s = std::abs(y) - r0;
    if (s <= 0.0) return 0.0;
    return -rho * theta * std::pow(s, theta - 1.0);
}

bool LinearCoefficientSpec::homogeneous() const {
    if (spatial_profile.empty()) return true;
    for (double v : spatial_profile)
        if (std::abs(v - spatial_profile.front()) > 1e-14) return false;
    return true;
}

double LinearCoefficientSpec::profile_value() const {
    if (!homogeneous())
        throw HeterogeneousProfile(
            "operation needs a spatially constant profile; the principal direction of a "
            "heterogeneous coefficient is not computed here");
    return spatial_profile.empty() ? 1.0 : spatial_profile.front();
}

LinearCoefficientSpec LinearCoefficientSpec::at(const HullPoint& hp) const {
    LinearCoefficientSpec c = *this;
    c.driver = hp;
    return c;
}

double LinearCoefficientSpec::sup_coefficient() const {
    const double bound = driver.is_limit() ? std::abs(evaluate(driver, 0.0))
                                           : driver.driver.bound();
    double prof = 1.0;
    if (!spatial_profile.empty()) {
        prof = 0.0;
        for (double v : spatial_profile) prof = std::max(prof, std::abs(v));
    }
    return std::abs(gamma_offset) + bound * prof;
}

std::pair<double, FieldState> principal_eigenpair(const Grid& grid) {
    const int n = grid.n_nodes;
    // Inverse iteration on (A + I) with A the discrete -Laplacian; the
    // smallest eigenpair of A survives the shift.
    const ImplicitSolver shifted(grid, 1.0);  // I + 1*A

    std::vector<double> x(n, 1.0);
    if (grid.bc == BoundaryKind::Dirichlet) {
        // Start from a positive interior bump.
        const auto xs = grid.nodes();
        for (int i = 0; i < n; ++i)
            x[i] = xs[i] * (grid.length - xs[i]);
    }

    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        shifted.solve(x);
        double mx = 0.0;
        for (double v : x) mx = std::max(mx, std::abs(v));
        for (double& v : x) v /= mx;

        const auto ax = ImplicitSolver::apply_neg_laplacian(grid, x);
        double num = 0.0, den = 0.0, resid = 0.0;
        const int lo = grid.bc == BoundaryKind::Dirichlet ? 1 : 0;
        const int hi = grid.bc == BoundaryKind::Dirichlet ? n - 1 : n;
        for (int i = lo; i < hi; ++i) {
            num += x[i] * ax[i];
            den += x[i] * x[i];
        }
        lambda = num / den;
        for (int i = lo; i < hi; ++i) resid = std::max(resid, std::abs(ax[i] - lambda * x[i]));
        if (resid <= 1e-12 * std::max(1.0, std::abs(lambda))) break;
    }

    FieldState e0;
    e0.bc = grid.bc;
    e0.values = x;
    if (e0.values[n / 2] < 0.0)
        for (double& v : e0.values) v = -v;
    const double s = e0.sup_norm();
    for (double& v : e0.values) v /= s;
    if (grid.bc == BoundaryKind::Dirichlet) {
        e0.values.front() = 0.0;
        e0.values.back() = 0.0;
    }
    return {lambda, e0};
}

FieldState evolve(const LinearCoefficientSpec& coeff, const NonlinearitySpec& g,
                  const Grid& grid, const FieldState& z0, double t, double dt) {
    return run_imex(coeff, &g, grid, z0, t, dt, 0.0, nullptr, nullptr);
}

FieldState evolve_linear(const LinearCoefficientSpec& coeff, const Grid& grid,
                         const FieldState& z0, double t, double dt) {
    return run_imex(coeff, nullptr, grid, z0, t, dt, 0.0, nullptr, nullptr);
}

LogNormField evolve_linear_lognorm(const LinearCoefficientSpec& coeff,
                                   const Grid& grid, const FieldState& z0,
                                   double t, double dt) {
    LogNormField out;
    double ln = 0.0;
    out.direction = run_imex(coeff, nullptr, grid, z0, t, dt, 0.0, nullptr, &ln);
    out.log_norm = ln;
    return out;
}

void evolve_sampled(const LinearCoefficientSpec& coeff, const NonlinearitySpec* g,
                    const Grid& grid, const FieldState& z0, double t, double dt,
                    double dt_sample,
                    const std::function<void(double, const FieldState&)>& on_sample) {
    run_imex(coeff, g, grid, z0, t, dt, dt_sample, &on_sample, nullptr);
}

double pde_cocycle(const LinearCoefficientSpec& coeff, const Grid& grid,
                   double t, double dt) {
    coeff.profile_value();  // rejects heterogeneous profiles
    if (t == 0.0) return 1.0;
    if (t < 0.0) {
        const auto shifted = coeff.at(advance(coeff.driver, t));
        return 1.0 / pde_cocycle(shifted, grid, -t, dt);
    }
    const auto [gamma0, e0] = principal_eigenpair(grid);
    (void)gamma0;
    const auto ln = evolve_linear_lognorm(coeff, grid, e0, t, dt);
    return std::exp(ln.log_norm + std::log(ln.direction.sup_norm()));
}

double absorbing_radius(const LinearCoefficientSpec& coeff, const NonlinearitySpec& g) {
    const double base = std::pow(2.0 * coeff.sup_coefficient() / g.rho, 1.0 / (g.theta - 1.0));
    return (g.kind == NonlinearitySpec::Kind::Deadzone ? g.r0 : 0.0) + base + 1.0;
}

}  // namespace attractorlab
