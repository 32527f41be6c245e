#include <doctest.h>

#include <cmath>
#include <limits>

#include "attractorlab/cocycle.hpp"
#include "attractorlab/errors.hpp"
#include "attractorlab/scalar_ode.hpp"
#include "oracles.hpp"

using namespace attractorlab;

TEST_CASE("closed-form v against the symbolic oracle") {
    const auto c1 = HullPoint::of(DriverSpec::constant(1.0));
    CHECK(closed_form_v(c1, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(closed_form_v(c1, 17.0) == doctest::Approx(1.0).epsilon(1e-9));

    const auto p1 = HullPoint::of(DriverSpec::p1());
    CHECK(closed_form_v(p1, -2.0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(closed_form_v(p1, 0.0) == doctest::Approx(oracles::v_p1(0.0)).epsilon(1e-8));
    CHECK(closed_form_v(p1, 0.0) == doctest::Approx(0.56767).epsilon(1e-4));
    for (double t : {-30.0, -7.0, -1.0, 0.5, 3.0})
        CHECK(closed_form_v(p1, t) == doctest::Approx(oracles::v_p1(t)).epsilon(1e-8));
}

TEST_CASE("closed form rejects divergent tails") {
    CHECK_THROWS_AS(closed_form_v(HullPoint::of(DriverSpec::p2()), 0.0), DivergentTail);
    CHECK_THROWS_AS(closed_form_v(HullPoint::limit_zero(DriverSpec::p0()), 0.0),
                    DivergentTail);
}

TEST_CASE("entire bounded solution w0") {
    const auto c1 = HullPoint::of(DriverSpec::constant(1.0));
    CHECK(entire_solution_w0(c1, -5.0, 3.0) == doctest::Approx(1.0).epsilon(1e-9));

    const auto p1 = HullPoint::of(DriverSpec::p1());
    CHECK(entire_solution_w0(p1, -4.0, 3.0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(entire_solution_w0(p1, 0.0, 3.0) == doctest::Approx(1.3272).epsilon(1e-4));
    // the forward limit of the heteroclinic branch
    CHECK(entire_solution_w0(p1, 30.0, 3.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    // v stays above 1/C for C = sup a, so w0 stays bounded
    CHECK(closed_form_v(p1, 3.0) >= 1.0 / 2.0 - 1e-9);
}

TEST_CASE("lemma residual: the closed form solves the scalar problem") {
    for (double theta : {2.0, 3.0}) {
        for (auto d : {DriverSpec::constant(1.0), DriverSpec::p1()}) {
            const auto hp = HullPoint::of(d);
            const double delta = 1e-3;
            double worst = 0.0;
            for (int i = 0; i < 60; ++i) {
                const double t = -30.0 + i * 0.6;
                const double w = entire_solution_w0(hp, t, theta);
                const double wp = (entire_solution_w0(hp, t + delta, theta) -
                                   entire_solution_w0(hp, t - delta, theta)) /
                                  (2.0 * delta);
                const double rhs =
                    (evaluate(hp, t) * w - std::pow(w, theta)) / (theta - 1.0);
                worst = std::max(worst, std::abs(wp - rhs));
            }
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("change of variables: v from the formula vs integrating v' = -a v + 1") {
    const auto p1 = HullPoint::of(DriverSpec::p1());
    const auto coeff = [&](double t) { return -evaluate(p1, t); };
    const double t0 = -40.0;
    double w = closed_form_v(p1, t0);
    double tcur = t0;
    for (double target : {-20.0, -5.0, -1.0, 0.0, 2.0}) {
        // v' = -a v + 1 is coeff(t) y + g(y) with the unit source as g
        const auto tr =
            integrate_reaction(coeff, [](double) { return 1.0; }, w, tcur, target, 0.25);
        w = tr.final_value();
        tcur = target;
        CHECK(w == doctest::Approx(closed_form_v(p1, target)).epsilon(1e-6));
    }
}

TEST_CASE("scalar integration: equilibria and the null solution") {
    const ScalarProblem sp(3.0, HullPoint::of(DriverSpec::constant(1.0)));
    const auto tr = integrate_scalar(sp, 5.0, 0.0, 60.0, 0.5);
    CHECK(tr.final_value() == doctest::Approx(1.0).epsilon(1e-9));

    const auto zero = integrate_scalar(sp, 0.0, 0.0, 10.0, 0.5);
    for (double v : zero.values) CHECK(v == 0.0);

    CHECK_THROWS_AS(integrate_scalar(sp, -0.1, 0.0, 1.0, 0.1), NegativeInitialCondition);
}

TEST_CASE("forward integration from the entire solution stays on it") {
    const ScalarProblem sp(3.0, HullPoint::of(DriverSpec::p1()));
    // w0(-1) = 1 exactly (v(-1) = 1)
    const auto tr = integrate_scalar(sp, 1.0, -1.0, 0.0, 0.1);
    CHECK(tr.final_value() == doctest::Approx(1.3272).epsilon(1e-4));
}

TEST_CASE("scalar pullback attractor values") {
    const ScalarProblem cst(3.0, HullPoint::of(DriverSpec::constant(1.0)));
    const auto a = pullback_bstar(cst, 5.0, {10.0, 20.0, 40.0}, 1e-9);
    CHECK(a.b_star == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(a.classification == SectionClass::StronglyPositive);

    // homoclinic driver: b*(p0) > 0, value from the closed form
    const ScalarProblem hom(3.0, HullPoint::of(DriverSpec::p0()));
    const auto b = pullback_bstar(hom, 3.0, {100.0, 200.0, 400.0, 800.0}, 1e-3);
    const double v_ref = oracles::integrate(
        [](double s) { return std::exp(oracles::D_p0(s)); }, -800.0, 0.0);
    CHECK(b.b_star == doctest::Approx(std::pow(v_ref, -0.5)).epsilon(1e-3));
    CHECK(b.b_star > 1e-3);

    // trivial family: the pullback values sink to zero at long horizons
    const ScalarProblem triv(3.0, HullPoint::of(DriverSpec::p2()));
    const auto c = pullback_bstar(triv, 3.0, {1e5, 3e5, 6e5, 1e6}, 1e-6);
    CHECK(c.b_star <= 1e-6);

    // a ladder too short for the requested gap is reported, not rounded
    CHECK_THROWS_AS(pullback_bstar(triv, 3.0, {50.0, 100.0}, 1e-12), NotConverged);
}

TEST_CASE("pullback values decrease monotonically in the horizon") {
    const ScalarProblem sp(3.0, HullPoint::of(DriverSpec::p0()));
    const double r = scalar_absorbing_radius(sp);
    double prev = std::numeric_limits<double>::infinity();
    const auto f = [&](double T) {
        return integrate_scalar(sp, r, -T, 0.0, T).final_value();
    };
    for (double T : {25.0, 50.0, 100.0, 200.0}) {
        const double v = f(T);
        CHECK(v <= prev + 1e-10);
        prev = v;
    }
}

TEST_CASE("scalar converse: positivity needs the integrable tail") {
    // driver p1: spectrum in [0, 2], tail integrable, b* > 0
    const auto p1 = HullPoint::of(DriverSpec::p1());
    CHECK(tail_integral(p1, 1.0, 400.0, 1e-6).integrable);
    const ScalarProblem sp1(3.0, p1);
    const auto b1 = pullback_bstar(sp1, 3.0, {200.0, 400.0, 800.0, 1600.0}, 5e-3);
    CHECK(b1.b_star > 1e-3);

    // time-reversed p2: spectrum in [0, 1] but the tail diverges, b* -> 0
    const auto rev = HullPoint::of(DriverSpec::p2().time_reversed());
    CHECK_FALSE(tail_integral(rev, 1.0, 400.0, 1e-6).integrable);
    const ScalarProblem sp2(3.0, rev);
    const auto b2 = pullback_bstar(sp2, 3.0, {50.0, 100.0, 200.0}, 1e-8);
    CHECK(b2.b_star <= 1e-6);
}
