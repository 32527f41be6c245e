// Command-line front end: scenario runs plus single-operation subcommands.
//
// Exit codes: 0 all checks passed, 2 inconclusive results present,
// 1 violation or runtime error, 64 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

#include "attractorlab/attractor.hpp"
#include "attractorlab/errors.hpp"
#include "attractorlab/io.hpp"
#include "attractorlab/scalar_ode.hpp"
#include "attractorlab/scenario.hpp"

namespace al = attractorlab;
using json = nlohmann::ordered_json;

namespace {

al::DriverSpec parse_driver_arg(const std::string& s) {
    if (s == "p0") return al::DriverSpec::p0();
    if (s == "p1") return al::DriverSpec::p1();
    if (s == "p2") return al::DriverSpec::p2();
    if (s.rfind("constant:", 0) == 0)
        return al::DriverSpec::constant(std::stod(s.substr(9)));
    if (s == "slowgrowth") return al::DriverSpec::slow_growth();
    if (s.rfind("slowgrowth:", 0) == 0)
        return al::DriverSpec::slow_growth(std::stod(s.substr(11)));
    throw CLI::ValidationError("--driver",
                               "expected p0|p1|p2|constant:<c>|slowgrowth[:beta]");
}

al::BoundaryKind parse_bc_arg(const std::string& s) {
    if (s == "neumann") return al::BoundaryKind::Neumann;
    if (s == "robin") return al::BoundaryKind::Robin;
    if (s == "dirichlet") return al::BoundaryKind::Dirichlet;
    throw CLI::ValidationError("--bc", "expected neumann|robin|dirichlet");
}

void emit(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        al::write_file_atomic(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attractor-lab: pullback attractors of scalar parabolic problems over compact hull flows"};
    app.require_subcommand(1);

    std::string driver_s = "p0", bc_s = "neumann", out_path, config_path, out_dir;
    double shift = 0.0, theta = 3.0, rho = 1.0, horizon = 400.0, tol = 1e-5;
    double length = 1.0, robin_alpha = 1.0, dt = 1e-2, step = 1e-3;
    double t_min = -10.0, t_max = 10.0, dt_sample = 0.5, coeff_scale = 1.0;
    int grid_n = 64, samples = 201;

    auto add_common = [&](CLI::App* cmd, bool with_grid) {
        cmd->add_option("--driver", driver_s, "driver family (p0|p1|p2|constant:<c>|slowgrowth[:beta])");
        cmd->add_option("--shift", shift, "time shift of the hull point");
        cmd->add_option("--theta", theta, "nonlinearity exponent");
        cmd->add_option("--horizon", horizon, "time horizon");
        cmd->add_option("--tol", tol, "tolerance");
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        if (with_grid) {
            cmd->add_option("--grid-n", grid_n, "number of grid nodes");
            cmd->add_option("--bc", bc_s, "boundary condition (neumann|robin|dirichlet)");
            cmd->add_option("--length", length, "domain length");
            cmd->add_option("--robin-alpha", robin_alpha, "Robin boundary weight");
            cmd->add_option("--dt", dt, "time step");
            cmd->add_option("--rho", rho, "dissipation strength");
            cmd->add_option("--scale", coeff_scale, "constant coefficient profile value");
        }
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario config and write its artifacts");
    run->add_option("--config", config_path, "scenario JSON")->required();
    run->add_option("--out", out_dir, "output directory")->required();

    CLI::App* eigen = app.add_subcommand("eigen", "principal eigenpair of the discrete Laplacian");
    add_common(eigen, true);

    CLI::App* cocycle = app.add_subcommand("cocycle", "trace of log c(t,p) on [-horizon, horizon]");
    add_common(cocycle, false);
    cocycle->add_option("--step", step, "quadrature step");
    cocycle->add_option("--samples", samples, "number of trace samples");

    CLI::App* tail = app.add_subcommand("tail", "tail integral of c(t,p)^(theta-1) on (-inf,0]");
    add_common(tail, false);

    CLI::App* pullback = app.add_subcommand("pullback", "attractor boundary section at one hull point");
    add_common(pullback, true);

    std::string archive_path;
    CLI::App* orbit = app.add_subcommand("orbit", "forward trace of the boundary along the orbit");
    add_common(orbit, true);
    orbit->add_option("--t-min", t_min, "trace start");
    orbit->add_option("--t-max", t_max, "trace end");
    orbit->add_option("--dt-sample", dt_sample, "trace sampling interval");
    orbit->add_option("--archive", archive_path, "write the full field history as CSV t,x,value");

    CLI::App* trich = app.add_subcommand("trichotomy", "spectrum location and section classification report");
    add_common(trich, true);

    CLI::App* lemma = app.add_subcommand("verify-lemma", "residual of the explicit scalar solution");
    add_common(lemma, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (*run) return al::run_scenario_file(config_path, out_dir);

        const al::DriverSpec drv = parse_driver_arg(driver_s);
        const al::HullPoint hp = al::advance(al::HullPoint::of(drv), shift);

        if (*eigen) {
            const al::Grid grid(length, grid_n, parse_bc_arg(bc_s), robin_alpha);
            const auto [gamma0, e0] = al::principal_eigenpair(grid);
            std::cout << "gamma0 = " << al::format_double(gamma0) << "\n";
            if (!out_path.empty()) {
                const auto xs = grid.nodes();
                al::write_csv(out_path, {{"x", &xs}, {"value", &e0.values}});
            }
            return 0;
        }
        if (*cocycle) {
            std::vector<double> ts;
            for (int i = 0; i < samples; ++i)
                ts.push_back(-horizon + 2.0 * horizon * i / (samples - 1));
            const auto tr = al::cocycle_trace(hp, ts, step);
            if (!out_path.empty())
                al::write_csv(out_path, {{"t", &tr.times}, {"log_c", &tr.log_values}});
            const auto est = al::lyapunov(hp, horizon);
            json o;
            o["lambda_sup_plus"] = est.lambda_sup_plus;
            o["lambda_inf_plus"] = est.lambda_inf_plus;
            o["lambda_sup_minus"] = est.lambda_sup_minus;
            o["lambda_inf_minus"] = est.lambda_inf_minus;
            std::cout << o.dump(2) << "\n";
            return 0;
        }
        if (*tail) {
            const auto res = al::tail_integral(hp, theta - 1.0, horizon, tol);
            json o;
            o["beta"] = res.beta;
            o["T"] = res.truncation_T;
            o["value"] = res.value;
            o["tail_bound"] = res.tail_bound;
            o["converged"] = res.converged;
            o["integrable"] = res.integrable;
            emit(o, out_path);
            return 0;
        }
        if (*pullback) {
            al::ProblemSetup setup;
            setup.grid = al::Grid(length, grid_n, parse_bc_arg(bc_s), robin_alpha);
            setup.g = al::NonlinearitySpec::pure_power(rho, theta);
            setup.coeff.driver = hp;
            setup.coeff.gamma_offset = al::principal_eigenpair(setup.grid).first;
            if (coeff_scale != 1.0)
                setup.coeff.spatial_profile.assign(grid_n, coeff_scale);
            al::PullbackOptions pb;
            pb.horizons = {horizon / 16, horizon / 8, horizon / 4, horizon / 2, horizon};
            pb.tol = tol;
            pb.dt = dt;
            const auto sec = al::pullback_section(setup, hp, pb);
            const auto cls = al::classify_section(
                sec, al::integrability_criterion(setup, hp, 1000.0, 1e-6));
            json o;
            o["hull_point"] = hp.label();
            o["classification"] = al::to_string(cls.final);
            o["sup_norm"] = sec.sup_norm;
            o["min_interior"] = sec.min_interior;
            o["horizon"] = sec.horizon;
            o["cauchy_gap"] = sec.cauchy_gap;
            emit(o, out_path);
            return 0;
        }
        if (*orbit) {
            al::ProblemSetup setup;
            setup.grid = al::Grid(length, grid_n, parse_bc_arg(bc_s), robin_alpha);
            setup.g = al::NonlinearitySpec::pure_power(rho, theta);
            setup.coeff.driver = hp;
            setup.coeff.gamma_offset = al::principal_eigenpair(setup.grid).first;
            if (coeff_scale != 1.0)
                setup.coeff.spatial_profile.assign(grid_n, coeff_scale);
            al::PullbackOptions pb;
            pb.horizons = {horizon / 16, horizon / 8, horizon / 4, horizon / 2, horizon};
            pb.tol = tol;
            pb.dt = dt;
            const auto tr = al::orbit_trace(setup, hp, t_min, t_max, dt_sample, pb);
            if (!out_path.empty())
                al::write_csv(out_path, {{"t", &tr.times}, {"sup_norm", &tr.sup_norms}});
            if (!archive_path.empty()) {
                const auto base = al::advance(hp, t_min);
                const auto sec = al::pullback_boundary(setup, base, pb);
                const auto xs = setup.grid.nodes();
                std::vector<double> ct, cx, cv;
                al::evolve_sampled(setup.coeff.at(base), &setup.g, setup.grid,
                                   sec.b_field, t_max - t_min, pb.dt, dt_sample,
                                   [&](double tau, const al::FieldState& f) {
                                       for (int i = 0; i < setup.grid.n_nodes; ++i) {
                                           ct.push_back(t_min + tau);
                                           cx.push_back(xs[i]);
                                           cv.push_back(f.values[i]);
                                       }
                                   });
                al::write_csv(archive_path, {{"t", &ct}, {"x", &cx}, {"value", &cv}});
            }
            std::cout << "terminal sup-norm = " << al::format_double(tr.sup_norms.back())
                      << "\n";
            return 0;
        }
        if (*trich) {
            al::ProblemSetup setup;
            setup.grid = al::Grid(length, grid_n, parse_bc_arg(bc_s), robin_alpha);
            setup.g = al::NonlinearitySpec::pure_power(rho, theta);
            setup.coeff.driver = hp;
            setup.coeff.gamma_offset = al::principal_eigenpair(setup.grid).first;
            if (coeff_scale != 1.0)
                setup.coeff.spatial_profile.assign(grid_n, coeff_scale);
            al::TrichotomyOptions opts;
            opts.lyapunov_horizons = {horizon};
            std::vector<al::HullPoint> pts{hp};
            if (drv.has_listable_limits())
                for (auto& lp : al::limit_points(drv)) pts.push_back(lp);
            const auto rep = al::trichotomy_report(setup, pts, opts);
            json o;
            o["case"] = rep.case_tag;
            o["verdict"] = rep.verdict;
            o["spectrum"] = {rep.spectrum.alpha_lower, rep.spectrum.lambda_upper};
            emit(o, out_path);
            return rep.verdict == "Consistent" ? 0 : (rep.verdict == "Inconclusive" ? 2 : 1);
        }
        if (*lemma) {
            const double worst = al::lemma_max_residual(hp, theta, 200, -40.0, 8.0);
            std::cout << "max residual = " << al::format_double(worst) << "\n";
            return worst < 1e-6 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
