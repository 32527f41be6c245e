#include "attractorlab/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "attractorlab/errors.hpp"
#include "attractorlab/quadrature.hpp"

namespace attractorlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double effective_offset_rate(const ProblemSetup& setup) {
    const auto [gamma0, e0] = principal_eigenpair(setup.grid);
    (void)e0;
    return setup.coeff.gamma_offset - gamma0;
}

AttractorSection run_ladder(const ProblemSetup& setup, const HullPoint& hp,
                            const PullbackOptions& opts) {
    if (opts.horizons.empty() || !std::is_sorted(opts.horizons.begin(), opts.horizons.end()))
        throw std::invalid_argument("pullback horizons must be a nonempty increasing list");

    const double r = opts.r > 0.0 ? opts.r : absorbing_radius(setup.coeff, setup.g);
    const auto [gamma0, e0] = principal_eigenpair(setup.grid);
    (void)gamma0;
    FieldState start = e0;
    for (double& v : start.values) v *= r;

    AttractorSection sec;
    sec.hull_point = hp;
    sec.cauchy_gap = kInf;

    FieldState prev;
    for (double T : opts.horizons) {
        const auto anchored = setup.coeff.at(advance(hp, -T));
        FieldState v = evolve(anchored, setup.g, setup.grid, start, T, opts.dt);

        if (!prev.values.empty()) {
            double gap = 0.0, rise = 0.0;
            for (std::size_t i = 0; i < v.values.size(); ++i) {
                gap = std::max(gap, std::abs(v.values[i] - prev.values[i]));
                rise = std::max(rise, v.values[i] - prev.values[i]);
            }
            if (rise > 10.0 * opts.tol)
                throw MonotonicityViolation(
                    "pullback iterate increased by " + std::to_string(rise) +
                    " across horizons; the scheme lost the super-equilibrium property");
            sec.cauchy_gap = gap;
        }
        prev = v;
        sec.b_field = std::move(v);
        sec.horizon = T;
        sec.ladder_horizons.push_back(T);
        sec.ladder_sup_norms.push_back(sec.b_field.sup_norm());
        if (sec.cauchy_gap < opts.tol) break;
    }

    sec.converged = sec.cauchy_gap < opts.tol;
    sec.sup_norm = sec.b_field.sup_norm();
    sec.min_interior = sec.b_field.min_interior();

    if (sec.sup_norm <= kTrivialThreshold) {
        sec.classification = SectionClass::Trivial;
    } else {
        bool strongly = true;
        if (setup.grid.bc == BoundaryKind::Dirichlet) {
            const auto [g0, e] = principal_eigenpair(setup.grid);
            (void)g0;
            for (std::size_t i = 1; i + 1 < sec.b_field.values.size(); ++i)
                strongly = strongly &&
                           sec.b_field.values[i] >= kStronglyPositiveThreshold * e.values[i];
        } else {
            strongly = sec.b_field.min_value() >= kStronglyPositiveThreshold;
        }
        sec.classification = strongly ? SectionClass::StronglyPositive
                                      : SectionClass::Indeterminate;
    }
    return sec;
}

std::string ladder_trend(const AttractorSection& sec) {
    const auto& s = sec.ladder_sup_norms;
    if (s.size() < 3) return sec.converged ? "converged" : "unclear";
    std::vector<double> ratios;
    for (std::size_t i = s.size() - std::min<std::size_t>(4, s.size()) + 1; i < s.size(); ++i) {
        if (s[i - 1] <= 0.0) return s.back() <= kTrivialThreshold ? "decaying" : "unclear";
        ratios.push_back(s[i] / s[i - 1]);
    }
    const bool all_decaying = std::all_of(ratios.begin(), ratios.end(),
                                          [](double r) { return r <= 0.9; });
    const bool all_stable = std::all_of(ratios.begin(), ratios.end(), [](double r) {
        return r > 0.9 && r <= 1.0 + 1e-9;
    });
    if (all_decaying && s.back() < 0.8 * s.front()) return "decaying";
    if (all_stable) return "stabilizing";
    return "unclear";
}

// Geometric samples of the effective log cocycle on [-T, 0], largest |t| first.
std::vector<std::pair<double, double>> backward_log_samples(const ProblemSetup& setup,
                                                            const HullPoint& hp,
                                                            double T, int count) {
    const double offset = effective_offset_rate(setup);
    const double scale = setup.coeff.profile_value();
    std::vector<double> ts;
    const double t_min = std::min(1.0, T / 64.0);
    for (int i = 0; i < count; ++i)
        ts.push_back(-t_min * std::pow(T / t_min, static_cast<double>(i) / (count - 1)));
    std::sort(ts.begin(), ts.end(), std::greater<double>());  // toward -T

    std::vector<std::pair<double, double>> out;
    out.reserve(ts.size() + 1);
    out.emplace_back(0.0, 0.0);
    double acc = 0.0, prev = 0.0;
    for (double t : ts) {
        acc += integrate_coefficient(hp, prev, t, 1e-2);
        prev = t;
        out.emplace_back(t, offset * t + scale * acc);
    }
    return out;
}

}  // namespace

AttractorSection pullback_section(const ProblemSetup& setup, const HullPoint& hp,
                                  const PullbackOptions& opts) {
    return run_ladder(setup, hp, opts);
}

AttractorSection pullback_boundary(const ProblemSetup& setup, const HullPoint& hp,
                                   const PullbackOptions& opts) {
    AttractorSection sec = run_ladder(setup, hp, opts);
    if (!sec.converged)
        throw NotConverged("pullback boundary at " + hp.label() +
                               " still moving at the largest horizon",
                           sec.sup_norm, sec.cauchy_gap);
    return sec;
}

CombinedClassification classify_section(const AttractorSection& section,
                                        std::optional<bool> criterion_positive) {
    CombinedClassification c;
    c.raw = section.classification;
    c.converged = section.converged;
    c.criterion_available = criterion_positive.has_value();
    c.criterion_positive = criterion_positive.value_or(false);
    c.trend = ladder_trend(section);

    if (section.converged && section.classification != SectionClass::Indeterminate) {
        c.final = section.classification;
        return c;
    }
    if (c.criterion_available) {
        // Slow backward decay makes the raw value untrustworthy (or leaves
        // it inside the gap band); the tail criterion breaks the tie and
        // the raw record stays in the report.
        c.used_criterion = true;
        c.final = c.criterion_positive ? SectionClass::StronglyPositive
                                       : SectionClass::Trivial;
        return c;
    }
    if (c.trend == "decaying") {
        c.final = SectionClass::Trivial;
    } else if (c.trend == "stabilizing" &&
               section.classification == SectionClass::StronglyPositive) {
        c.final = SectionClass::StronglyPositive;
    } else {
        c.final = SectionClass::Indeterminate;
    }
    return c;
}

bool integrability_criterion(const HullPoint& hp, double theta, double T, double tol) {
    if (!(theta > 1.0)) throw std::invalid_argument("criterion needs theta > 1");
    return tail_integral(hp, theta - 1.0, T, tol).integrable;
}

bool integrability_criterion(const ProblemSetup& setup, const HullPoint& hp,
                             double T, double tol) {
    const double scale = setup.coeff.profile_value();
    const double offset = effective_offset_rate(setup);
    return tail_integral(hp, setup.g.theta - 1.0, T, tol, 1e-2, offset, scale).integrable;
}

EquivalenceReport equivalence_report(const ProblemSetup& setup, const HullPoint& hp,
                                     double horizon, const PullbackOptions& pb) {
    if (!setup.g.linear_dissipative())
        throw std::invalid_argument(
            "the three-way equivalence holds in the linear-dissipative case only; "
            "a pure power term is rejected because backward boundedness is not "
            "sufficient there");

    EquivalenceReport rep;
    rep.point = hp;

    // (i) nontrivial section via the pullback ladder.
    PullbackOptions opts = pb;
    if (opts.horizons.empty() || opts.horizons.back() != horizon)
        opts.horizons = {horizon / 8.0, horizon / 4.0, horizon / 2.0, horizon};
    const AttractorSection sec = pullback_section(setup, hp, opts);
    const CombinedClassification cls = classify_section(sec, std::nullopt);
    rep.section_trend = cls.trend;
    rep.section_positive = cls.final == SectionClass::StronglyPositive;
    const bool section_conclusive = cls.final != SectionClass::Indeterminate;

    // (ii) backward boundedness of the 1-dim cocycle, judged from the
    // stabilization of its running maximum across the horizon ladder.
    const auto samples = backward_log_samples(setup, hp, horizon, 49);
    double max_half = -kInf, max_full = -kInf;
    for (const auto& [t, L] : samples) {
        max_full = std::max(max_full, L);
        if (t >= -horizon / 2.0) max_half = std::max(max_half, L);
    }
    rep.log_cocycle_max_half = max_half;
    rep.log_cocycle_max_full = max_full;
    rep.cocycle_bounded = max_full <= max_half + std::log(1.05);

    // (iii) persistence of the pullback norms of the linear flow, computed
    // independently through the discretized evolution.
    const auto [gamma0, e0] = principal_eigenpair(setup.grid);
    (void)gamma0;
    std::vector<double> lognorms;
    for (double T : {horizon / 8.0, horizon / 4.0, horizon / 2.0, horizon}) {
        const auto anchored = setup.coeff.at(advance(hp, -T));
        const auto ln = evolve_linear_lognorm(anchored, setup.grid, e0, T, pb.dt);
        lognorms.push_back(ln.log_norm + std::log(ln.direction.sup_norm()));
    }
    rep.linear_pullback_log_first = lognorms.front();
    rep.linear_pullback_log_last = lognorms.back();
    const bool steadily_decaying =
        lognorms.back() - lognorms[lognorms.size() - 2] <= -std::log(1.25) &&
        lognorms.back() < lognorms.front();
    rep.pullback_persistent = !steadily_decaying && lognorms.back() >= std::log(1e-4);

    rep.agree = rep.section_positive == rep.cocycle_bounded &&
                rep.cocycle_bounded == rep.pullback_persistent;
    rep.conclusive = section_conclusive;
    return rep;
}

TrichotomyReport trichotomy_report(const ProblemSetup& setup,
                                   const std::vector<HullPoint>& samples,
                                   const TrichotomyOptions& opts) {
    TrichotomyReport rep;
    rep.purely_dissipative = !setup.g.linear_dissipative();

    // Effective principal spectrum: affine image of the driver spectrum.
    const double scale = setup.coeff.profile_value();
    const double offset = effective_offset_rate(setup);
    if (setup.coeff.driver.is_limit() ||
        setup.coeff.driver.driver.kind == DriverKind::Constant) {
        const double c = offset + scale * evaluate(setup.coeff.driver, 0.0);
        rep.spectrum.alpha_lower = c;
        rep.spectrum.lambda_upper = c;
        rep.spectrum.horizons = opts.lyapunov_horizons;
        rep.spectrum.samples = 1;
    } else {
        SpectralInterval raw = spectrum_estimate(setup.coeff.driver.driver,
                                                 opts.lyapunov_horizons,
                                                 opts.lyapunov_shifts);
        rep.spectrum = raw;
        rep.spectrum.alpha_lower = offset + scale * raw.alpha_lower;
        rep.spectrum.lambda_upper = offset + scale * raw.lambda_upper;
    }

    const double a = rep.spectrum.alpha_lower;
    const double l = rep.spectrum.lambda_upper;
    const double tol = opts.sign_tolerance;
    if (l < -tol)
        rep.case_tag = "s1";
    else if (a > tol)
        rep.case_tag = "s5";
    else if (a < -tol && l > tol)
        rep.case_tag = "s3";
    else if (a < -tol)
        rep.case_tag = "s2";
    else
        rep.case_tag = "s4";

    const bool criterion_applies = !setup.g.linear_dissipative();
    bool inconsistent = false;
    bool inconclusive = false;
    double uniform_min = kInf;

    for (const auto& p : samples) {
        const AttractorSection sec = pullback_section(setup, p, opts.pullback);
        std::optional<bool> crit;
        if (criterion_applies) {
            try {
                crit = integrability_criterion(setup, p, opts.criterion_horizon,
                                               opts.criterion_tol);
            } catch (const InconclusiveFit&) {
                crit = std::nullopt;
            }
        }
        const CombinedClassification cls = classify_section(sec, crit);
        rep.points.push_back({p, cls, sec.sup_norm, sec.min_interior});
        uniform_min = std::min(uniform_min, sec.min_interior);

        if (cls.final == SectionClass::Indeterminate) inconclusive = true;

        const bool must_be_trivial =
            rep.case_tag == "s1" || (rep.case_tag == "s2" && rep.purely_dissipative);
        if (must_be_trivial && cls.final == SectionClass::StronglyPositive) {
            inconsistent = true;
            rep.notes.push_back("witness against triviality at " + p.label());
        }
        if (rep.case_tag == "s5" && cls.final != SectionClass::StronglyPositive) {
            inconsistent = true;
            rep.notes.push_back("missing uniform positivity at " + p.label());
        }
    }

    if (rep.case_tag == "s1") {
        // Measured decay rate of the sup-norm from e0 on t in [10, 40].
        const auto [g0, e0] = principal_eigenpair(setup.grid);
        (void)g0;
        std::vector<double> ts, ys;
        evolve_sampled(setup.coeff, &setup.g, setup.grid, e0, 40.0, opts.pullback.dt, 0.5,
                       [&](double t, const FieldState& f) {
                           if (t >= 10.0 && f.sup_norm() > 0.0) {
                               ts.push_back(t);
                               ys.push_back(std::log(f.sup_norm()));
                           }
                       });
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            sx += ts[i]; sy += ys[i]; sxx += ts[i] * ts[i]; sxy += ts[i] * ys[i];
        }
        const double n = static_cast<double>(ts.size());
        rep.measured_decay_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    if (rep.case_tag == "s5") {
        rep.uniform_lower_bound = uniform_min;
        if (!(uniform_min >= kStronglyPositiveThreshold)) inconsistent = true;
    }

    rep.verdict = inconsistent ? "Inconsistent" : (inconclusive ? "Inconclusive" : "Consistent");
    return rep;
}

OrbitTrace orbit_trace(const ProblemSetup& setup, const HullPoint& hp,
                       double t_min, double t_max, double dt_sample,
                       const PullbackOptions& pb) {
    if (!(t_max > t_min)) throw std::invalid_argument("orbit trace needs t_max > t_min");
    const HullPoint base = advance(hp, t_min);
    const AttractorSection sec = pullback_boundary(setup, base, pb);

    OrbitTrace tr;
    const auto anchored = setup.coeff.at(base);
    evolve_sampled(anchored, &setup.g, setup.grid, sec.b_field, t_max - t_min, pb.dt,
                   dt_sample, [&](double tau, const FieldState& f) {
                       tr.times.push_back(t_min + tau);
                       tr.sup_norms.push_back(f.sup_norm());
                   });

    // Spot re-pullbacks cross-validate the forward transport of the section.
    for (double q : {0.25, 0.5, 0.75}) {
        const double tq = t_min + q * (t_max - t_min);
        const AttractorSection check = pullback_section(setup, advance(hp, tq), pb);
        const auto it = std::lower_bound(tr.times.begin(), tr.times.end(), tq - 1e-9);
        if (it == tr.times.end()) continue;
        const std::size_t k = static_cast<std::size_t>(it - tr.times.begin());
        tr.check_times.push_back(tr.times[k]);
        tr.check_deltas.push_back(std::abs(tr.sup_norms[k] - check.sup_norm));
    }
    return tr;
}

ConvergenceCurves sublinear_convergence_check(const ProblemSetup& setup,
                                              const HullPoint& hp,
                                              const FieldState& z_below,
                                              const FieldState& z_above,
                                              double horizon,
                                              const PullbackOptions& pb) {
    const AttractorSection sec = pullback_boundary(setup, hp, pb);
    if (sec.classification != SectionClass::StronglyPositive)
        throw PreconditionFailed("sublinear convergence needs a strongly positive section at " +
                                 hp.label());
    for (std::size_t i = 0; i < sec.b_field.values.size(); ++i) {
        const bool interior = i > 0 && i + 1 < sec.b_field.values.size();
        if (setup.grid.bc == BoundaryKind::Dirichlet && !interior) continue;
        if (!(z_below.values[i] > 0.0) || z_below.values[i] > sec.b_field.values[i] + 1e-12 ||
            z_above.values[i] < sec.b_field.values[i] - 1e-12)
            throw PreconditionFailed("need 0 < z_below <= b(p) <= z_above nodewise");
    }

    const auto anchored = setup.coeff.at(hp);
    std::vector<std::vector<std::vector<double>>> fields(3);
    const FieldState* starts[3] = {&sec.b_field, &z_below, &z_above};
    std::vector<double> times;
    for (int k = 0; k < 3; ++k) {
        evolve_sampled(anchored, &setup.g, setup.grid, *starts[k], horizon, pb.dt, 0.5,
                       [&](double t, const FieldState& f) {
                           if (k == 0) times.push_back(t);
                           fields[k].push_back(f.values);
                       });
    }

    double forward_max_late = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] >= horizon / 2.0)
            for (double v : fields[0][i]) forward_max_late = std::max(forward_max_late, std::abs(v));
    if (forward_max_late <= kStronglyPositiveThreshold)
        throw PreconditionFailed("forward sup-norms of the boundary vanish; no persistent orbit to compare against");

    ConvergenceCurves out;
    out.times = times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double gb = 0.0, ga = 0.0;
        for (std::size_t j = 0; j < fields[0][i].size(); ++j) {
            gb = std::max(gb, std::abs(fields[0][i][j] - fields[1][i][j]));
            ga = std::max(ga, std::abs(fields[2][i][j] - fields[0][i][j]));
        }
        out.gap_below.push_back(gb);
        out.gap_above.push_back(ga);
    }
    out.final_gap_below = out.gap_below.back();
    out.final_gap_above = out.gap_above.back();
    return out;
}

}  // namespace attractorlab
