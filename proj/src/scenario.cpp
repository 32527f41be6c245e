#include "attractorlab/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <thread>

#include "attractorlab/errors.hpp"
#include "attractorlab/io.hpp"
#include "attractorlab/scalar_ode.hpp"

namespace attractorlab {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw std::runtime_error("unknown key \"" + it.key() + "\" in " + ctx);
    }
}

double require_num(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw std::runtime_error("missing numeric \"" + std::string(key) + "\" in " + ctx);
    return j[key].get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
}

std::vector<double> vec_or(const json& j, const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    return j[key].get<std::vector<double>>();
}

DriverSpec parse_driver(const json& j) {
    check_keys(j, {"kind", "value", "amplitudes", "frequencies", "phases", "beta",
                   "terms", "reversed"},
               "driver");
    const std::string kind = j.at("kind").get<std::string>();
    DriverSpec d;
    if (kind == "p0") d = DriverSpec::p0();
    else if (kind == "p1") d = DriverSpec::p1();
    else if (kind == "p2") d = DriverSpec::p2();
    else if (kind == "constant") d = DriverSpec::constant(require_num(j, "value", "driver"));
    else if (kind == "quasiperiodic")
        d = DriverSpec::quasi_periodic(j.at("amplitudes").get<std::vector<double>>(),
                                       j.at("frequencies").get<std::vector<double>>(),
                                       j.at("phases").get<std::vector<double>>());
    else if (kind == "slowgrowth")
        d = DriverSpec::slow_growth(num_or(j, "beta", 0.5),
                                    static_cast<int>(num_or(j, "terms", 16)));
    else
        throw std::runtime_error("unknown driver kind \"" + kind + "\"");
    if (j.contains("reversed") && j["reversed"].get<bool>()) d = d.time_reversed();
    return d;
}

BoundaryKind parse_bc(const std::string& s) {
    if (s == "neumann") return BoundaryKind::Neumann;
    if (s == "robin") return BoundaryKind::Robin;
    if (s == "dirichlet") return BoundaryKind::Dirichlet;
    throw std::runtime_error("unknown boundary condition \"" + s + "\"");
}

NonlinearitySpec parse_nonlinearity(const json& j) {
    check_keys(j, {"kind", "rho", "theta", "r0"}, "nonlinearity");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pure_power")
        return NonlinearitySpec::pure_power(require_num(j, "rho", "nonlinearity"),
                                            require_num(j, "theta", "nonlinearity"));
    if (kind == "deadzone")
        return NonlinearitySpec::deadzone(require_num(j, "rho", "nonlinearity"),
                                          require_num(j, "theta", "nonlinearity"),
                                          require_num(j, "r0", "nonlinearity"));
    throw std::runtime_error("unknown nonlinearity kind \"" + kind + "\"");
}

HullPoint resolve_point(const Scenario& sc, const json& j) {
    check_keys(j, {"shift", "limit", "value", "expect"}, "point");
    if (j.contains("limit")) {
        const std::string tag = j["limit"].get<std::string>();
        if (tag == "zero") return HullPoint::limit_zero(sc.driver);
        if (tag == "const")
            return HullPoint::limit_const(sc.driver, require_num(j, "value", "point"));
        throw std::runtime_error("unknown limit tag \"" + tag + "\"");
    }
    return advance(sc.base_point(), num_or(j, "shift", 0.0));
}

PullbackOptions parse_pullback(const json& j) {
    PullbackOptions pb;
    pb.horizons = vec_or(j, "horizons", pb.horizons);
    pb.tol = num_or(j, "tol", pb.tol);
    pb.dt = num_or(j, "dt", pb.dt);
    pb.r = num_or(j, "r", 0.0);
    return pb;
}

json point_json(const HullPoint& p, const CombinedClassification& cls,
                const AttractorSection& sec) {
    json o;
    o["hull_point"] = p.label();
    o["classification"] = to_string(cls.final);
    o["sup_norm"] = sec.sup_norm;
    o["min_interior"] = sec.min_interior;
    o["horizon"] = sec.horizon;
    o["cauchy_gap"] = sec.cauchy_gap;
    o["converged"] = sec.converged;
    o["raw_classification"] = to_string(cls.raw);
    o["trend"] = cls.trend;
    if (cls.criterion_available) o["criterion_positive"] = cls.criterion_positive;
    o["criterion_used"] = cls.used_criterion;
    return o;
}

double interior_max(const FieldState& f) {
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < f.values.size(); ++i)
        m = std::max(m, std::abs(f.values[i]));
    return m;
}

struct Runner {
    const Scenario& sc;
    const ExperimentSpec& ex;
    std::filesystem::path outdir;
    ProblemSetup setup;

    ExperimentResult run() {
        ExperimentResult res;
        res.name = ex.name;
        res.type = ex.type;
        res.anchor = ex.anchor;
        try {
            if (ex.type == "integrability_sweep") run_sweep(res);
            else if (ex.type == "pullback_sections") run_sections(res);
            else if (ex.type == "scalar_pullback") run_scalar(res);
            else if (ex.type == "orbit_trace") run_orbit(res);
            else if (ex.type == "trichotomy") run_trichotomy(res);
            else if (ex.type == "equivalence") run_equivalence(res);
            else if (ex.type == "decay_rate") run_decay(res);
            else if (ex.type == "uniform_persistence") run_persistence(res);
            else if (ex.type == "spectrum") run_spectrum(res);
            else if (ex.type == "verify_lemma") run_lemma(res);
            else throw std::runtime_error("unknown experiment type \"" + ex.type + "\"");
        } catch (const std::exception& e) {
            res.status = "fail";
            res.details["error"] = std::string(e.what()) + " [experiment " + ex.name + "]";
        }
        return res;
    }

    void save(ExperimentResult& res, const std::string& suffix, const json& payload) {
        const std::string fname = ex.name + suffix;
        write_file_atomic(outdir / fname, payload.dump(2) + "\n");
        res.artifacts.push_back(fname);
    }

    void run_sweep(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"thetas", "criterion_horizon", "criterion_tol", "horizons",
                       "tol", "dt", "threshold"},
                   ex.name);
        const auto thetas = p.at("thetas").get<std::vector<double>>();
        const double crit_T = num_or(p, "criterion_horizon", 1000.0);
        const double crit_tol = num_or(p, "criterion_tol", 1e-6);
        const PullbackOptions pb = parse_pullback(p);
        const std::optional<double> threshold =
            p.contains("threshold") ? std::optional<double>(p["threshold"].get<double>())
                                    : std::nullopt;

        json rows = json::array();
        bool fail = false, inconclusive = false;
        for (double theta : thetas) {
            ProblemSetup s = setup;
            s.g = NonlinearitySpec::pure_power(setup.g.rho, theta);
            const bool crit = integrability_criterion(s, sc.base_point(), crit_T, crit_tol);
            const AttractorSection sec = pullback_section(s, sc.base_point(), pb);
            const CombinedClassification cls = classify_section(sec, crit);

            json row = point_json(sc.base_point(), cls, sec);
            row["theta"] = theta;
            row["criterion"] = crit;
            const SectionClass predicted =
                crit ? SectionClass::StronglyPositive : SectionClass::Trivial;
            const bool hard_conflict = sec.converged &&
                                       sec.classification != SectionClass::Indeterminate &&
                                       sec.classification != predicted;
            row["consistent"] = !hard_conflict;
            if (hard_conflict) fail = true;
            if (cls.final == SectionClass::Indeterminate) inconclusive = true;
            if (threshold && crit != (theta > *threshold)) {
                fail = true;
                row["threshold_mismatch"] = true;
            }
            rows.push_back(std::move(row));
        }
        res.details["rows"] = rows;
        res.status = fail ? "fail" : (inconclusive ? "inconclusive" : "pass");
        save(res, ".sweep.json", rows);
    }

    void run_sections(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"points", "horizons", "tol", "dt", "r", "use_criterion",
                       "criterion_horizon", "criterion_tol"},
                   ex.name);
        const PullbackOptions pb = parse_pullback(p);
        const bool use_crit = p.contains("use_criterion")
                                  ? p["use_criterion"].get<bool>()
                                  : !setup.g.linear_dissipative();
        const double crit_T = num_or(p, "criterion_horizon", 1000.0);
        const double crit_tol = num_or(p, "criterion_tol", 1e-6);

        json rows = json::array();
        bool fail = false, inconclusive = false;
        for (const auto& pj : p.at("points")) {
            const HullPoint hp = resolve_point(sc, pj);
            std::optional<bool> crit;
            if (use_crit) crit = integrability_criterion(setup, hp, crit_T, crit_tol);
            const AttractorSection sec = pullback_section(setup, hp, pb);
            const CombinedClassification cls = classify_section(sec, crit);
            json row = point_json(hp, cls, sec);

            // interior dichotomy: a converged section may not be small
            // somewhere and large somewhere else at the same time
            if (sec.converged && sec.min_interior <= kTrivialThreshold &&
                interior_max(sec.b_field) >= kStronglyPositiveThreshold) {
                row["dichotomy_violation"] = true;
                fail = true;
            }
            if (pj.contains("expect")) {
                const std::string want = pj["expect"].get<std::string>();
                row["expect"] = want;
                if (to_string(cls.final) != want) fail = true;
            } else if (cls.final == SectionClass::Indeterminate) {
                inconclusive = true;
            }
            rows.push_back(std::move(row));
        }
        res.details["sections"] = rows;
        res.status = fail ? "fail" : (inconclusive ? "inconclusive" : "pass");
        save(res, ".sections.json", rows);
    }

    // Scalar reduction of the family: pullback value, trajectory CSV and
    // the attractor JSON of the solvable 1-dim problem.
    void run_scalar(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"theta", "r", "horizons", "tol", "trajectory", "expect_positive"},
                   ex.name);
        const double theta = num_or(p, "theta", setup.g.theta);
        const ScalarProblem sp(theta, sc.base_point());
        const double r = num_or(p, "r", scalar_absorbing_radius(sp));
        const auto horizons = vec_or(p, "horizons", {100.0, 200.0, 400.0, 800.0});
        const double tol = num_or(p, "tol", 1e-3);

        const ScalarAttractor att = pullback_bstar(sp, r, horizons, tol);
        json o;
        o["hull_point"] = att.hull_point.label();
        o["b_star"] = att.b_star;
        o["horizon"] = att.horizon;
        o["cauchy_gap"] = att.cauchy_gap;
        o["classification"] = to_string(att.classification);
        res.details = o;
        save(res, ".attractor.json", o);

        if (p.contains("trajectory")) {
            const json& tj = p["trajectory"];
            check_keys(tj, {"t0", "t1", "dt", "r"}, ex.name + ".trajectory");
            const auto tr = integrate_scalar(sp, num_or(tj, "r", att.b_star),
                                             require_num(tj, "t0", ex.name),
                                             require_num(tj, "t1", ex.name),
                                             num_or(tj, "dt", 0.25));
            const std::string fname = ex.name + ".trajectory.csv";
            write_csv(outdir / fname, {{"t", &tr.times}, {"w", &tr.values}});
            res.artifacts.push_back(fname);
        }

        bool fail = false;
        if (p.contains("expect_positive") &&
            p["expect_positive"].get<bool>() != (att.b_star > kStronglyPositiveThreshold))
            fail = true;
        res.status = fail ? "fail" : "pass";
    }

    void run_orbit(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"point", "t_min", "t_max", "dt_sample", "horizons", "tol", "dt",
                       "r", "terminal_value", "terminal_tol", "cross_tol", "archive"},
                   ex.name);
        const HullPoint hp = p.contains("point") ? resolve_point(sc, p["point"])
                                                 : sc.base_point();
        const PullbackOptions pb = parse_pullback(p);
        const double t_min = require_num(p, "t_min", ex.name);
        const double t_max = require_num(p, "t_max", ex.name);
        const double dt_sample = num_or(p, "dt_sample", 0.5);
        const OrbitTrace tr = orbit_trace(setup, hp, t_min, t_max, dt_sample, pb);

        const std::string fname = ex.name + ".trace.csv";
        write_csv(outdir / fname, {{"t", &tr.times}, {"sup_norm", &tr.sup_norms}});
        res.artifacts.push_back(fname);

        if (p.contains("archive") && p["archive"].get<bool>()) {
            // full field history in row-major order, t outer
            const auto base = advance(hp, t_min);
            const auto sec = pullback_boundary(setup, base, pb);
            const auto xs = setup.grid.nodes();
            std::vector<double> ct, cx, cv;
            evolve_sampled(setup.coeff.at(base), &setup.g, setup.grid, sec.b_field,
                           t_max - t_min, pb.dt, dt_sample,
                           [&](double tau, const FieldState& f) {
                               for (int i = 0; i < setup.grid.n_nodes; ++i) {
                                   ct.push_back(t_min + tau);
                                   cx.push_back(xs[i]);
                                   cv.push_back(f.values[i]);
                               }
                           });
            const std::string aname = ex.name + ".fields.csv";
            write_csv(outdir / aname, {{"t", &ct}, {"x", &cx}, {"value", &cv}});
            res.artifacts.push_back(aname);
        }

        bool fail = false;
        res.details["terminal_sup_norm"] = tr.sup_norms.back();
        if (p.contains("terminal_value")) {
            const double want = p["terminal_value"].get<double>();
            const double tol = num_or(p, "terminal_tol", 1e-3);
            if (std::abs(tr.sup_norms.back() - want) > tol) fail = true;
        }
        double worst_cross = 0.0;
        for (double d : tr.check_deltas) worst_cross = std::max(worst_cross, d);
        res.details["max_cross_check_delta"] = worst_cross;
        if (p.contains("cross_tol") && worst_cross > p["cross_tol"].get<double>())
            fail = true;
        res.status = fail ? "fail" : "pass";
    }

    void run_trichotomy(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"points", "lyapunov_horizons", "shifts", "sign_tol", "horizons",
                       "tol", "dt", "r", "criterion_horizon", "criterion_tol",
                       "expected_case", "expected_rate", "rate_tol"},
                   ex.name);
        TrichotomyOptions opts;
        opts.lyapunov_horizons = vec_or(p, "lyapunov_horizons", opts.lyapunov_horizons);
        opts.lyapunov_shifts = vec_or(p, "shifts", opts.lyapunov_shifts);
        opts.sign_tolerance = num_or(p, "sign_tol", opts.sign_tolerance);
        opts.pullback = parse_pullback(p);
        opts.criterion_horizon = num_or(p, "criterion_horizon", opts.criterion_horizon);
        opts.criterion_tol = num_or(p, "criterion_tol", opts.criterion_tol);

        std::vector<HullPoint> pts;
        if (p.contains("points"))
            for (const auto& pj : p["points"]) pts.push_back(resolve_point(sc, pj));
        else
            pts.push_back(sc.base_point());

        const TrichotomyReport rep = trichotomy_report(setup, pts, opts);
        json o;
        o["case"] = rep.case_tag;
        o["verdict"] = rep.verdict;
        o["spectrum"] = {rep.spectrum.alpha_lower, rep.spectrum.lambda_upper};
        if (rep.measured_decay_rate) o["measured_decay_rate"] = *rep.measured_decay_rate;
        if (rep.uniform_lower_bound) o["uniform_lower_bound"] = *rep.uniform_lower_bound;
        json rows = json::array();
        for (const auto& pv : rep.points) {
            json row;
            row["hull_point"] = pv.point.label();
            row["classification"] = to_string(pv.cls.final);
            row["sup_norm"] = pv.sup_norm;
            rows.push_back(std::move(row));
        }
        o["points"] = rows;
        o["notes"] = rep.notes;

        bool fail = rep.verdict == "Inconsistent";
        if (p.contains("expected_case") &&
            rep.case_tag != p["expected_case"].get<std::string>())
            fail = true;
        if (p.contains("expected_rate") && rep.measured_decay_rate) {
            const double want = p["expected_rate"].get<double>();
            if (std::abs(*rep.measured_decay_rate - want) > num_or(p, "rate_tol", 0.02))
                fail = true;
        }
        res.details = o;
        res.status = fail ? "fail" : (rep.verdict == "Inconclusive" ? "inconclusive" : "pass");
        save(res, ".trichotomy.json", o);
    }

    void run_equivalence(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"points", "horizon", "tol", "dt", "r", "family"}, ex.name);
        const double horizon = num_or(p, "horizon", 400.0);
        PullbackOptions pb = parse_pullback(p);

        // optional driver override: probe points of a sibling hull with the
        // same reaction term and grid
        Scenario local = sc;
        ProblemSetup lsetup = setup;
        if (p.contains("family")) {
            local.driver = parse_driver(p["family"]);
            local.experiments.clear();
            lsetup = local.setup();
        }

        json rows = json::array();
        bool fail = false, inconclusive = false;
        for (const auto& pj : p.at("points")) {
            const HullPoint hp = resolve_point(local, pj);
            const EquivalenceReport rep = equivalence_report(lsetup, hp, horizon, pb);
            json row;
            row["hull_point"] = hp.label();
            row["section_positive"] = rep.section_positive;
            row["cocycle_bounded"] = rep.cocycle_bounded;
            row["pullback_persistent"] = rep.pullback_persistent;
            row["agree"] = rep.agree;
            row["conclusive"] = rep.conclusive;
            if (!rep.agree) fail = true;
            if (!rep.conclusive) inconclusive = true;
            rows.push_back(std::move(row));
        }
        res.details["points"] = rows;
        res.status = fail ? "fail" : (inconclusive ? "inconclusive" : "pass");
        save(res, ".equivalence.json", rows);
    }

    void run_decay(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"expected_rate", "tol", "t_max", "fit_from", "dt", "dt_sample"},
                   ex.name);
        const double t_max = num_or(p, "t_max", 40.0);
        const double fit_from = num_or(p, "fit_from", 10.0);
        const double dt = num_or(p, "dt", 1e-3);
        const double dt_sample = num_or(p, "dt_sample", 0.5);

        const auto [g0, e0] = principal_eigenpair(setup.grid);
        (void)g0;
        std::vector<double> ts, sups;
        evolve_sampled(setup.coeff, &setup.g, setup.grid, e0, t_max, dt, dt_sample,
                       [&](double t, const FieldState& f) {
                           ts.push_back(t);
                           sups.push_back(f.sup_norm());
                       });
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] < fit_from || sups[i] <= 0.0) continue;
            const double y = std::log(sups[i]);
            sx += ts[i]; sy += y; sxx += ts[i] * ts[i]; sxy += ts[i] * y;
            ++n;
        }
        const double rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        res.details["measured_rate"] = rate;

        const std::string fname = ex.name + ".decay.csv";
        write_csv(outdir / fname, {{"t", &ts}, {"sup_norm", &sups}});
        res.artifacts.push_back(fname);

        const double want = require_num(p, "expected_rate", ex.name);
        res.status = std::abs(rate - want) <= require_num(p, "tol", ex.name) ? "pass" : "fail";
    }

    void run_persistence(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"multipliers", "t_final", "expected_value", "tol", "dt"}, ex.name);
        const auto mults = p.at("multipliers").get<std::vector<double>>();
        const double t_final = num_or(p, "t_final", 60.0);
        const double want = require_num(p, "expected_value", ex.name);
        const double tol = require_num(p, "tol", ex.name);
        const double dt = num_or(p, "dt", 5e-3);

        const auto [g0, e0] = principal_eigenpair(setup.grid);
        (void)g0;
        json rows = json::array();
        bool fail = false;
        for (double m : mults) {
            FieldState z0 = e0;
            for (double& v : z0.values) v *= m;
            const FieldState f = evolve(setup.coeff, setup.g, setup.grid, z0, t_final, dt);
            json row;
            row["multiplier"] = m;
            row["final_sup_norm"] = f.sup_norm();
            if (std::abs(f.sup_norm() - want) > tol) fail = true;
            rows.push_back(std::move(row));
        }
        res.details["runs"] = rows;
        res.status = fail ? "fail" : "pass";
        save(res, ".persistence.json", rows);
    }

    void run_spectrum(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"horizons", "shifts", "expected", "tol", "effective"}, ex.name);
        const auto horizons = vec_or(p, "horizons", {400.0});
        const auto shifts = vec_or(p, "shifts", {0.0, -10.0, 10.0, -100.0});
        const bool effective = p.contains("effective") ? p["effective"].get<bool>() : true;

        SpectralInterval si = spectrum_estimate(sc.driver, horizons, shifts);
        if (effective) {
            const double scale = setup.coeff.profile_value();
            const auto [gamma0, e0] = principal_eigenpair(setup.grid);
            (void)e0;
            const double off = setup.coeff.gamma_offset - gamma0;
            si.alpha_lower = off + scale * si.alpha_lower;
            si.lambda_upper = off + scale * si.lambda_upper;
        }
        json o;
        o["alpha"] = si.alpha_lower;
        o["lambda"] = si.lambda_upper;
        o["samples"] = si.samples;
        res.details = o;

        bool fail = false;
        if (p.contains("expected")) {
            const auto want = p["expected"].get<std::vector<double>>();
            const double tol = num_or(p, "tol", 0.05);
            if (want.size() != 2) throw std::runtime_error("expected must be [alpha, lambda]");
            if (std::abs(si.alpha_lower - want[0]) > tol ||
                std::abs(si.lambda_upper - want[1]) > tol)
                fail = true;
        }
        res.status = fail ? "fail" : "pass";
        save(res, ".spectrum.json", o);
    }

    void run_lemma(ExperimentResult& res) {
        const json& p = ex.params;
        check_keys(p, {"thetas", "n_samples", "t_min", "t_max", "tol"}, ex.name);
        const auto thetas = vec_or(p, "thetas", {2.0, 3.0});
        const int n = static_cast<int>(num_or(p, "n_samples", 200));
        const double t_min = num_or(p, "t_min", -40.0);
        const double t_max = num_or(p, "t_max", 8.0);
        const double tol = num_or(p, "tol", 1e-6);

        json rows = json::array();
        bool fail = false;
        for (double theta : thetas) {
            const double worst = lemma_max_residual(sc.base_point(), theta, n, t_min, t_max);
            json row;
            row["theta"] = theta;
            row["max_residual"] = worst;
            if (!(worst < tol)) fail = true;
            rows.push_back(std::move(row));
        }
        res.details["rows"] = rows;
        res.status = fail ? "fail" : "pass";
        save(res, ".lemma.json", rows);
    }
};

int thread_cap() {
    if (const char* env = std::getenv("ATTRACTOR_LAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

ProblemSetup Scenario::setup() const {
    ProblemSetup s;
    s.grid = grid;
    s.g = nonlinearity;
    s.coeff.driver = base_point();
    s.coeff.gamma_offset = gamma_auto ? principal_eigenpair(grid).first : gamma_explicit;
    if (coefficient_scale != 1.0)
        s.coeff.spatial_profile.assign(grid.n_nodes, coefficient_scale);
    return s;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
    std::ifstream is(config_path);
    if (!is) throw std::runtime_error("cannot read config " + config_path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(config_path.string() + ": " + e.what());
    }

    check_keys(j, {"schema", "name", "description", "driver", "bc", "robin_alpha",
                   "grid", "nonlinearity", "gamma_offset", "coefficient_scale",
                   "experiments"},
               config_path.string());
    if (!j.contains("schema") || j["schema"].get<int>() != 1)
        throw std::runtime_error(config_path.string() + ": requires \"schema\": 1");

    Scenario sc;
    sc.name = j.at("name").get<std::string>();
    sc.description = j.contains("description") ? j["description"].get<std::string>() : "";
    sc.driver = parse_driver(j.at("driver"));

    const auto& gj = j.at("grid");
    check_keys(gj, {"length", "n_nodes"}, "grid");
    sc.grid = Grid(num_or(gj, "length", 1.0),
                   static_cast<int>(require_num(gj, "n_nodes", "grid")),
                   parse_bc(j.at("bc").get<std::string>()), num_or(j, "robin_alpha", 0.0));
    sc.nonlinearity = parse_nonlinearity(j.at("nonlinearity"));

    if (j.contains("gamma_offset")) {
        if (j["gamma_offset"].is_string()) {
            if (j["gamma_offset"].get<std::string>() != "auto")
                throw std::runtime_error("gamma_offset must be \"auto\" or a number");
            sc.gamma_auto = true;
        } else {
            sc.gamma_auto = false;
            sc.gamma_explicit = j["gamma_offset"].get<double>();
        }
    }
    sc.coefficient_scale = num_or(j, "coefficient_scale", 1.0);

    for (const auto& ej : j.at("experiments")) {
        if (!ej.contains("name") || !ej.contains("type") || !ej.contains("anchor"))
            throw std::runtime_error("every experiment needs name, type and anchor");
        ExperimentSpec ex;
        ex.name = ej["name"].get<std::string>();
        ex.type = ej["type"].get<std::string>();
        ex.anchor = ej["anchor"].get<std::string>();
        ex.params = ej;
        ex.params.erase("name");
        ex.params.erase("type");
        ex.params.erase("anchor");
        for (const auto& prior : sc.experiments)
            if (prior.name == ex.name)
                throw std::runtime_error("duplicate experiment name \"" + ex.name + "\"");
        sc.experiments.push_back(std::move(ex));
    }
    return sc;
}

RunReport run_scenario(const Scenario& sc, const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);
    const ProblemSetup setup = sc.setup();

    RunReport report;
    report.scenario = sc.name;
    report.results.resize(sc.experiments.size());

    std::atomic<std::size_t> next{0};
    const int n_threads =
        std::min<int>(thread_cap(), static_cast<int>(sc.experiments.size()));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sc.experiments.size()) return;
            Runner r{sc, sc.experiments[i], output_dir, setup};
            report.results[i] = r.run();
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    bool fail = false, inconclusive = false;
    json results = json::array();
    for (const auto& r : report.results) {
        json o;
        o["experiment"] = r.name;
        o["type"] = r.type;
        o["anchor"] = r.anchor;
        o["status"] = r.status;
        o["details"] = r.details;
        o["artifacts"] = r.artifacts;
        results.push_back(std::move(o));
        if (r.status == "fail") fail = true;
        if (r.status == "inconclusive") inconclusive = true;
    }
    report.exit_code = fail ? 1 : (inconclusive ? 2 : 0);

    json top;
    top["schema"] = 1;
    top["scenario"] = sc.name;
    top["description"] = sc.description;
    top["results"] = results;
    top["exit_code"] = report.exit_code;
    write_file_atomic(output_dir / "report.json", top.dump(2) + "\n");
    return report;
}

int run_scenario_file(const std::filesystem::path& config_path,
                      const std::filesystem::path& output_dir) {
    const Scenario sc = load_scenario(config_path);
    return run_scenario(sc, output_dir).exit_code;
}

double lemma_max_residual(const HullPoint& hp, double theta, int n_samples,
                          double t_min, double t_max) {
    const double delta = 1e-3;
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double t = t_min + (t_max - t_min) * i / (n_samples - 1);
        const double w = entire_solution_w0(hp, t, theta);
        const double wp = (entire_solution_w0(hp, t + delta, theta) -
                           entire_solution_w0(hp, t - delta, theta)) /
                          (2.0 * delta);
        const double rhs =
            (evaluate(hp, t) * w - std::pow(w, theta)) / (theta - 1.0);
        worst = std::max(worst, std::abs(wp - rhs));
    }
    return worst;
}

}  // namespace attractorlab
