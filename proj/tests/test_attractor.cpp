#include <doctest.h>

#include <cmath>

#include "attractorlab/attractor.hpp"
#include "attractorlab/errors.hpp"
#include "attractorlab/scalar_ode.hpp"
#include "oracles.hpp"

using namespace attractorlab;

namespace {

ProblemSetup neumann_setup(HullPoint base, NonlinearitySpec g, double scale = 1.0,
                           int n_nodes = 64) {
    ProblemSetup s;
    s.grid = Grid(1.0, n_nodes, BoundaryKind::Neumann);
    s.g = std::move(g);
    s.coeff.driver = std::move(base);
    s.coeff.gamma_offset = 0.0;  // Neumann principal eigenvalue
    if (scale != 1.0) s.coeff.spatial_profile.assign(n_nodes, scale);
    return s;
}

PullbackOptions quick_ladder(std::vector<double> horizons, double tol, double dt) {
    PullbackOptions pb;
    pb.horizons = std::move(horizons);
    pb.tol = tol;
    pb.dt = dt;
    return pb;
}

}  // namespace

TEST_CASE("autonomous equilibrium boundary: b == 1") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::constant(1.0)),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    const auto sec = pullback_boundary(setup, setup.coeff.driver,
                                       quick_ladder({10.0, 20.0, 40.0}, 1e-6, 2e-3));
    CHECK(sec.converged);
    CHECK(sec.classification == SectionClass::StronglyPositive);
    for (double v : sec.b_field.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("heteroclinic family: strongly positive section at the initial point") {
    // coefficient a/2 and dissipation y^3/2: the scalar reduction is the
    // solvable problem with driver p1 and theta 3
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p1()),
                               NonlinearitySpec::pure_power(0.5, 3.0), 0.5);
    const auto sec = pullback_section(setup, setup.coeff.driver,
                                      quick_ladder({25.0, 50.0, 100.0, 200.0}, 2e-3, 2e-3));
    CHECK(sec.converged);
    CHECK(sec.classification == SectionClass::StronglyPositive);
    CHECK(sec.sup_norm == doctest::Approx(1.3272).epsilon(2e-3));
    CHECK(sec.sup_norm == doctest::Approx(oracles::w0_p1(0.0, 3.0)).epsilon(2e-3));
}

TEST_CASE("trivial family: every sampled section classifies trivial") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p2()),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    const auto pb = quick_ladder({25.0, 50.0, 100.0, 200.0}, 1e-5, 5e-3);
    for (const auto& hp : {HullPoint::of(DriverSpec::p2()),
                           HullPoint::limit_zero(DriverSpec::p2()),
                           HullPoint::limit_const(DriverSpec::p2(), -1.0)}) {
        const auto sec = pullback_section(setup, hp, pb);
        std::optional<bool> crit;
        try {
            crit = integrability_criterion(setup, hp, 400.0, 1e-6);
        } catch (const InconclusiveFit&) {}
        const auto cls = classify_section(sec, crit);
        CHECK(cls.final == SectionClass::Trivial);
    }
}

TEST_CASE("slow pullback decay raises NotConverged from the strict construction") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p2()),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    CHECK_THROWS_AS(pullback_boundary(setup, setup.coeff.driver,
                                      quick_ladder({25.0, 50.0, 100.0}, 1e-9, 5e-3)),
                    NotConverged);
}

TEST_CASE("Dirichlet boundary section is strongly positive against e0") {
    ProblemSetup setup;
    setup.grid = Grid(1.0, 64, BoundaryKind::Dirichlet);
    setup.g = NonlinearitySpec::pure_power(1.0, 3.0);
    setup.coeff.driver = HullPoint::of(DriverSpec::constant(0.5));
    setup.coeff.gamma_offset = principal_eigenpair(setup.grid).first;
    const auto sec = pullback_boundary(setup, setup.coeff.driver,
                                       quick_ladder({10.0, 20.0, 40.0, 80.0}, 1e-6, 2e-3));
    CHECK(sec.classification == SectionClass::StronglyPositive);
    const auto [g0, e0] = principal_eigenpair(setup.grid);
    (void)g0;
    for (std::size_t i = 1; i + 1 < sec.b_field.values.size(); ++i)
        CHECK(sec.b_field.values[i] >= 1e-3 * e0.values[i]);
    CHECK(sec.b_field.values.front() == 0.0);
    CHECK(sec.b_field.values.back() == 0.0);
}

TEST_CASE("integrability criterion: threshold of the homoclinic example") {
    const auto p0 = HullPoint::of(DriverSpec::p0());
    CHECK(integrability_criterion(p0, 3.0, 1000.0, 1e-6));
    CHECK_FALSE(integrability_criterion(p0, 1.4, 1000.0, 1e-6));
    CHECK(integrability_criterion(HullPoint::of(DriverSpec::constant(1.0)), 2.0, 200.0, 1e-6));
}

TEST_CASE("deadzone equivalences across the three hulls") {
    const auto g = NonlinearitySpec::deadzone(1.0, 3.0, 0.5);
    const auto pb = quick_ladder({50.0, 100.0, 200.0, 400.0}, 1e-4, 5e-3);

    struct Case {
        DriverSpec family;
        HullPoint point;
        bool expect;
    };
    const std::vector<Case> cases = {
        {DriverSpec::p0(), HullPoint::of(DriverSpec::p0()), true},
        {DriverSpec::p0(), HullPoint::limit_zero(DriverSpec::p0()), true},
        {DriverSpec::p1(), HullPoint::limit_const(DriverSpec::p1(), 2.0), true},
        {DriverSpec::p2(), HullPoint::of(DriverSpec::p2()), false},
        {DriverSpec::p2(), HullPoint::limit_const(DriverSpec::p2(), -1.0), false},
    };
    for (const auto& c : cases) {
        auto setup = neumann_setup(HullPoint::of(c.family), g);
        const auto rep = equivalence_report(setup, c.point, 400.0, pb);
        CHECK(rep.agree);
        CHECK(rep.section_positive == c.expect);
        CHECK(rep.cocycle_bounded == c.expect);
        CHECK(rep.pullback_persistent == c.expect);
    }
}

TEST_CASE("pure power input is rejected by the equivalence report") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p0()),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    CHECK_THROWS_AS(
        equivalence_report(setup, setup.coeff.driver, 100.0, quick_ladder({100.0}, 1e-4, 5e-3)),
        std::invalid_argument);
}

TEST_CASE("trichotomy: trivial family lands in the mixed-sign case, consistent") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p2()),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    TrichotomyOptions opts;
    opts.pullback = quick_ladder({25.0, 50.0, 100.0, 200.0}, 1e-5, 5e-3);
    opts.criterion_horizon = 400.0;
    const auto rep = trichotomy_report(
        setup,
        {HullPoint::of(DriverSpec::p2()), HullPoint::limit_zero(DriverSpec::p2()),
         HullPoint::limit_const(DriverSpec::p2(), -1.0)},
        opts);
    CHECK(rep.case_tag == "s2");
    CHECK(rep.verdict == "Consistent");
    CHECK(std::abs(rep.spectrum.alpha_lower + 1.0) < 0.05);
    CHECK(std::abs(rep.spectrum.lambda_upper) < 0.05);
    for (const auto& pv : rep.points) CHECK(pv.cls.final == SectionClass::Trivial);
}

TEST_CASE("trichotomy: stable autonomous case with measured decay rate") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::constant(-0.5)),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    TrichotomyOptions opts;
    opts.pullback = quick_ladder({10.0, 20.0, 40.0}, 1e-6, 1e-3);
    const auto rep = trichotomy_report(setup, {setup.coeff.driver}, opts);
    CHECK(rep.case_tag == "s1");
    CHECK(rep.verdict == "Consistent");
    REQUIRE(rep.measured_decay_rate.has_value());
    CHECK(*rep.measured_decay_rate == doctest::Approx(-0.5).epsilon(0.02 / 0.5));
}

TEST_CASE("trichotomy: uniformly persistent autonomous case") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::constant(0.5)),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    TrichotomyOptions opts;
    opts.pullback = quick_ladder({10.0, 20.0, 40.0}, 1e-6, 2e-3);
    const auto rep = trichotomy_report(setup, {setup.coeff.driver}, opts);
    CHECK(rep.case_tag == "s5");
    CHECK(rep.verdict == "Consistent");
    REQUIRE(rep.uniform_lower_bound.has_value());
    CHECK(*rep.uniform_lower_bound == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
}

TEST_CASE("homoclinic orbit trace: decay at both ends, backward power law") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p0()),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    const auto pb = quick_ladder({50.0, 100.0, 200.0, 400.0}, 1e-3, 2e-3);
    const auto tr = orbit_trace(setup, setup.coeff.driver, -20.0, 20.0, 0.5, pb);
    CHECK(tr.sup_norms.front() ==
          doctest::Approx(oracles::w_p0_theta3_backward(-20.0)).epsilon(2e-2));
    CHECK(tr.sup_norms.back() < 1e-2);
    // interior maximum: the orbit rises from near zero and sinks back
    double peak = 0.0;
    for (double v : tr.sup_norms) peak = std::max(peak, v);
    CHECK(peak > 0.5);
    for (double d : tr.check_deltas) CHECK(d < 5e-3);
}

TEST_CASE("heteroclinic orbit trace: terminal value sqrt(2)") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p1()),
                               NonlinearitySpec::pure_power(0.5, 3.0), 0.5);
    const auto pb = quick_ladder({100.0, 200.0, 400.0, 800.0, 1600.0}, 5e-3, 2e-3);
    const auto tr = orbit_trace(setup, setup.coeff.driver, -100.0, 10.0, 0.5, pb);
    CHECK(tr.sup_norms.back() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3 / 1.41));
    CHECK(tr.sup_norms.front() == doctest::Approx(0.1).epsilon(5e-2));
    // uniform agreement with the closed form along the whole trace
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        worst = std::max(worst,
                         std::abs(tr.sup_norms[i] - oracles::w0_p1(tr.times[i], 3.0)));
    CHECK(worst < 1e-2);
}

TEST_CASE("sublinear convergence from below and above") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p1()),
                               NonlinearitySpec::pure_power(0.5, 3.0), 0.5);
    const auto pb = quick_ladder({25.0, 50.0, 100.0, 200.0}, 2e-3, 2e-3);
    const auto sec = pullback_section(setup, setup.coeff.driver, pb);
    FieldState below = sec.b_field, above = sec.b_field;
    for (auto& v : below.values) v *= 0.5;
    for (auto& v : above.values) v *= 2.0;
    const auto curves =
        sublinear_convergence_check(setup, setup.coeff.driver, below, above, 30.0, pb);
    CHECK(curves.final_gap_below < 1e-3);
    CHECK(curves.final_gap_above < 1e-3);

    // autonomous persistent case: gaps collapse well below tolerance by t = 40
    auto aut = neumann_setup(HullPoint::of(DriverSpec::constant(0.5)),
                             NonlinearitySpec::pure_power(1.0, 3.0));
    const auto pba = quick_ladder({10.0, 20.0, 40.0}, 1e-6, 1e-3);
    const auto seca = pullback_section(aut, aut.coeff.driver, pba);
    FieldState b2 = seca.b_field, a2 = seca.b_field;
    for (auto& v : b2.values) v *= 0.3;
    for (auto& v : a2.values) v *= 3.0;
    const auto ca = sublinear_convergence_check(aut, aut.coeff.driver, b2, a2, 40.0, pba);
    CHECK(ca.final_gap_below < 1e-6);
    CHECK(ca.final_gap_above < 1e-6);
}

TEST_CASE("sublinear convergence refuses trivial sections") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::constant(-0.5)),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    const auto pb = quick_ladder({10.0, 20.0, 40.0, 80.0}, 1e-6, 1e-3);
    const auto z = FieldState::constant(setup.grid, 0.1);
    CHECK_THROWS_AS(
        sublinear_convergence_check(setup, setup.coeff.driver, z, z, 20.0, pb),
        PreconditionFailed);
}

TEST_CASE("pullback ladder decreases and b is an equilibrium") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p1()),
                               NonlinearitySpec::pure_power(0.5, 3.0), 0.5);
    const auto pb = quick_ladder({25.0, 50.0, 100.0, 200.0}, 2e-3, 2e-3);

    // monotone decrease across the ladder
    const auto [g0, e0] = principal_eigenpair(setup.grid);
    (void)g0;
    const double r = absorbing_radius(setup.coeff, setup.g);
    FieldState prev;
    for (double T : pb.horizons) {
        const auto anchored = setup.coeff.at(advance(setup.coeff.driver, -T));
        FieldState start = e0;
        for (auto& v : start.values) v *= r;
        const auto v = evolve(anchored, setup.g, setup.grid, start, T, pb.dt);
        if (!prev.values.empty())
            for (std::size_t i = 0; i < v.values.size(); ++i)
                CHECK(v.values[i] <= prev.values[i] + 10.0 * pb.tol);
        prev = v;
    }

    // equilibrium property: evolve(b(p), t) == b(p . t)
    const auto sec = pullback_section(setup, setup.coeff.driver, pb);
    for (double t : {1.0, 5.0, 10.0}) {
        const auto pushed = evolve(setup.coeff.at(setup.coeff.driver), setup.g,
                                   setup.grid, sec.b_field, t, pb.dt);
        const auto there =
            pullback_section(setup, advance(setup.coeff.driver, t), pb);
        double gap = 0.0;
        for (std::size_t i = 0; i < pushed.values.size(); ++i)
            gap = std::max(gap, std::abs(pushed.values[i] - there.b_field.values[i]));
        CHECK(gap < 5.0 * pb.tol);
    }
}

TEST_CASE("interior dichotomy of converged sections") {
    // strongly positive case: interior minimum must clear the band
    auto setup = neumann_setup(HullPoint::of(DriverSpec::constant(0.5)),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    const auto sec = pullback_section(setup, setup.coeff.driver,
                                      quick_ladder({10.0, 20.0, 40.0}, 1e-6, 2e-3));
    CHECK(sec.converged);
    const bool split = sec.min_interior <= kTrivialThreshold &&
                       sec.sup_norm >= kStronglyPositiveThreshold;
    CHECK_FALSE(split);
}

TEST_CASE("deadzone boundary dominates the pure power boundary") {
    const auto pb = quick_ladder({50.0, 100.0, 200.0}, 1e-3, 5e-3);
    auto pure = neumann_setup(HullPoint::of(DriverSpec::p0()),
                              NonlinearitySpec::pure_power(1.0, 3.0));
    auto dz = neumann_setup(HullPoint::of(DriverSpec::p0()),
                            NonlinearitySpec::deadzone(1.0, 3.0, 0.5));
    const auto sp = pullback_section(pure, pure.coeff.driver, pb);
    const auto sd = pullback_section(dz, dz.coeff.driver, pb);
    for (std::size_t i = 0; i < sp.b_field.values.size(); ++i)
        CHECK(sd.b_field.values[i] >= sp.b_field.values[i] - 1e-9);
}

TEST_CASE("smoother dissipation keeps the criterion-based prediction") {
    // g(y) = -y^5 vanishes to fourth order at zero: the criterion runs with
    // exponent 4 and still predicts a strongly positive section at p0
    const auto p0 = HullPoint::of(DriverSpec::p0());
    CHECK(integrability_criterion(p0, 5.0, 1000.0, 1e-6));
    auto setup = neumann_setup(p0, NonlinearitySpec::pure_power(1.0, 5.0));
    const auto sec = pullback_section(setup, p0, quick_ladder({50.0, 100.0, 200.0}, 1e-3, 2e-3));
    CHECK(sec.converged);
    CHECK(sec.classification == SectionClass::StronglyPositive);
    const double v_ref =
        4.0 * oracles::integrate(
                  [](double s) { return std::exp(4.0 * oracles::D_p0(s)); }, -200.0, 0.0);
    CHECK(sec.sup_norm == doctest::Approx(std::pow(v_ref, -0.25)).epsilon(3e-3));
}

TEST_CASE("homoclinic value against the quadrature oracle") {
    auto setup = neumann_setup(HullPoint::of(DriverSpec::p0()),
                               NonlinearitySpec::pure_power(1.0, 3.0));
    const auto sec = pullback_section(setup, setup.coeff.driver,
                                      quick_ladder({50.0, 100.0, 200.0}, 1e-3, 2e-3));
    const double v_ref =
        2.0 * oracles::integrate(
                  [](double s) { return std::exp(2.0 * oracles::D_p0(s)); }, -200.0, 0.0);
    CHECK(sec.sup_norm == doctest::Approx(std::pow(v_ref, -0.5)).epsilon(2e-3));
}
