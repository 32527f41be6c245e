#include <doctest.h>

#include <cmath>
#include <random>

#include "attractorlab/cocycle.hpp"
#include "attractorlab/errors.hpp"
#include "oracles.hpp"

using namespace attractorlab;

TEST_CASE("log cocycle against symbolic antiderivatives") {
    const auto p0 = HullPoint::of(DriverSpec::p0());
    CHECK(log_cocycle(p0, -1.0) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(log_cocycle(p0, -10.0) ==
          doctest::Approx(-1.0 - 2.0 * std::log(10.0)).epsilon(1e-10));
    CHECK(log_cocycle(p0, -10.0) == doctest::Approx(-5.60517018599).epsilon(1e-8));

    const auto c = HullPoint::of(DriverSpec::constant(0.7));
    CHECK(log_cocycle(c, 13.0) == doctest::Approx(0.7 * 13.0).epsilon(1e-12));
    CHECK(log_cocycle(c, -3.0) == doctest::Approx(-2.1).epsilon(1e-12));

    // shifted points: the quadrature must agree with D(u) differences
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-30.0, 30.0);
    for (int i = 0; i < 25; ++i) {
        const double s = U(rng), t = U(rng);
        const auto hp = advance(HullPoint::of(DriverSpec::p1()), s);
        CHECK(log_cocycle(hp, t) ==
              doctest::Approx(oracles::D_p1(s + t) - oracles::D_p1(s)).epsilon(1e-9));
        const auto h2 = advance(HullPoint::of(DriverSpec::p2()), s);
        CHECK(log_cocycle(h2, t) ==
              doctest::Approx(oracles::D_p2(s + t) - oracles::D_p2(s)).epsilon(1e-9));
    }
}

TEST_CASE("cocycle identity: 100 random pairs per driver") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-50.0, 50.0);
    for (auto d : {DriverSpec::p0(), DriverSpec::p1(), DriverSpec::p2()}) {
        const auto base = HullPoint::of(d);
        for (int i = 0; i < 100; ++i) {
            const double t = U(rng), s = U(rng);
            const double lhs = log_cocycle(base, t + s);
            const double rhs = log_cocycle(advance(base, s), t) + log_cocycle(base, s);
            CHECK(std::abs(lhs - rhs) < 1e-8);
        }
    }
}

TEST_CASE("trace is anchored at zero and matches pointwise evaluation") {
    const auto p0 = HullPoint::of(DriverSpec::p0());
    const auto tr = cocycle_trace(p0, {-8.0, -2.5, -1.0, 0.0, 1.5, 4.0});
    CHECK(tr.log_values[3] == 0.0);
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        CHECK(tr.log_values[i] ==
              doctest::Approx(oracles::D_p0(tr.times[i])).epsilon(1e-9));
}

TEST_CASE("monotone refinement under step halving") {
    const auto qp = HullPoint::of(
        DriverSpec::quasi_periodic({0.8, 0.4}, {1.0, std::sqrt(2.0)}, {0.2, 1.1}));
    for (double t : {-100.0, -31.0, 42.0, 100.0}) {
        const double coarse = log_cocycle(qp, t, 1e-2);
        const double fine = log_cocycle(qp, t, 5e-3);
        CHECK(std::abs(coarse - fine) < 1e-6);
    }
}

TEST_CASE("lyapunov estimates: constant, p0, p2") {
    const auto c = HullPoint::of(DriverSpec::constant(0.7));
    const auto ec = lyapunov(c, 200.0);
    CHECK(ec.lambda_sup_plus == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(ec.lambda_inf_plus == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(ec.lambda_sup_minus == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(ec.lambda_inf_minus == doctest::Approx(0.7).epsilon(1e-6));

    // p0: all four exponents sink to zero like 2 ln|t| / |t|
    const auto p0 = HullPoint::of(DriverSpec::p0());
    const auto e1 = lyapunov(p0, 1e3);
    const auto e2 = lyapunov(p0, 1e4);
    for (double v : {e2.lambda_sup_plus, e2.lambda_inf_plus, e2.lambda_sup_minus,
                     e2.lambda_inf_minus})
        CHECK(std::abs(v) < 0.02);
    CHECK(std::abs(e2.lambda_inf_plus) < std::abs(e1.lambda_inf_plus));

    // p2: forward exponents -1 exactly, backward exponents near zero
    const auto p2 = HullPoint::of(DriverSpec::p2());
    const auto ep = lyapunov(p2, 1e3);
    CHECK(ep.lambda_sup_plus == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(ep.lambda_inf_plus == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(ep.lambda_sup_minus) < 0.05);
    CHECK(std::abs(ep.lambda_inf_minus) < 0.05);

    CHECK(ec.lambda_inf_plus <= ec.lambda_sup_plus);
    CHECK(ep.lambda_inf_minus <= ep.lambda_sup_minus);
}

TEST_CASE("spectrum estimates for the worked families") {
    const std::vector<double> horizons{800.0};
    const std::vector<double> shifts{0.0, -10.0, 10.0, -100.0};

    const auto s1 = spectrum_estimate(DriverSpec::p1(), horizons, shifts);
    CHECK(std::abs(s1.alpha_lower - 0.0) < 0.05);
    CHECK(std::abs(s1.lambda_upper - 2.0) < 0.05);

    const auto s2 = spectrum_estimate(DriverSpec::p2(), horizons, shifts);
    CHECK(std::abs(s2.alpha_lower + 1.0) < 0.05);
    CHECK(std::abs(s2.lambda_upper - 0.0) < 0.05);

    const auto sc = spectrum_estimate(DriverSpec::constant(1.3), {100.0}, {0.0});
    CHECK(sc.alpha_lower == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(sc.lambda_upper == doctest::Approx(1.3).epsilon(1e-9));
    CHECK(sc.alpha_lower <= sc.lambda_upper);
}

TEST_CASE("exponent estimates land inside the estimated spectral interval") {
    const std::vector<double> horizons{200.0, 800.0};
    const std::vector<double> shifts{0.0, -10.0, 10.0};
    for (auto d : {DriverSpec::p1(), DriverSpec::p2()}) {
        const auto si = spectrum_estimate(d, horizons, shifts);
        for (double s : shifts) {
            for (double h : horizons) {
                const auto est = lyapunov(advance(HullPoint::of(d), s), h);
                for (double v : {est.lambda_sup_plus, est.lambda_inf_plus,
                                 est.lambda_sup_minus, est.lambda_inf_minus}) {
                    CHECK(v >= si.alpha_lower - 1e-9);
                    CHECK(v <= si.lambda_upper + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("tail integral of the homoclinic driver") {
    const auto p0 = HullPoint::of(DriverSpec::p0());

    // beta = 2: convergent, value from the independent adaptive quadrature
    const auto r2 = tail_integral(p0, 2.0, 1e3, 1e-6);
    const double ref = oracles::tail_integral_p0(2.0, 1e3);
    CHECK(r2.value == doctest::Approx(ref).epsilon(1e-6));
    CHECK(r2.value == doctest::Approx(0.643).epsilon(2e-3));
    CHECK(r2.converged);
    CHECK(r2.integrable);
    // exact far tail: e^{-2} * T^{-3} / 3
    CHECK(r2.tail_bound ==
          doctest::Approx(std::exp(-2.0) / 3.0 * std::pow(1e3, -3.0)).epsilon(1e-3));

    // beta = 1/2: borderline divergent (fitted decay exponent exactly 1)
    const auto rhalf = tail_integral(p0, 0.5, 1e3, 1e-6);
    CHECK_FALSE(rhalf.converged);
    CHECK_FALSE(rhalf.integrable);

    // constant driver: exponential tail, unit integral
    const auto rc = tail_integral(HullPoint::of(DriverSpec::constant(1.0)), 1.0, 50.0, 1e-6);
    CHECK(rc.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rc.converged);
}

TEST_CASE("tail integral value is nondecreasing in the truncation horizon") {
    const auto p0 = HullPoint::of(DriverSpec::p0());
    double prev = 0.0;
    for (double T : {50.0, 100.0, 400.0, 1000.0}) {
        const auto r = tail_integral(p0, 0.7, T, 1e-6);
        CHECK(r.value >= prev - 1e-12);
        prev = r.value;
    }
}

TEST_CASE("integrability at beta implies integrability at 2 beta") {
    const auto p0 = HullPoint::of(DriverSpec::p0());
    const auto r1 = tail_integral(p0, 0.6, 1e3, 1e-3);
    REQUIRE(r1.integrable);
    const auto r2 = tail_integral(p0, 1.2, 1e3, 1e-3);
    CHECK(r2.integrable);
}

TEST_CASE("asymptotic points at minus infinity") {
    CHECK(is_asymptotic_at_minus_infinity(HullPoint::of(DriverSpec::p0()), 2.0, 1e3));
    CHECK(is_asymptotic_at_minus_infinity(HullPoint::of(DriverSpec::constant(1.0)), 1.0, 50.0));
    CHECK_FALSE(is_asymptotic_at_minus_infinity(
        HullPoint::limit_zero(DriverSpec::p0()), 2.0, 1e3));
}

TEST_CASE("bounded oscillation without a trend is inconclusive") {
    const auto qp = HullPoint::of(
        DriverSpec::quasi_periodic({1.0, 0.7}, {1.0, std::sqrt(2.0)}, {0.0, 0.4}));
    CHECK_THROWS_AS(tail_integral(qp, 1.0, 400.0, 1e-6), InconclusiveFit);
}

TEST_CASE("a drift through the affine exponent beats small oscillations") {
    // same oscillation riding on a decaying drift: clearly integrable
    const auto qp = HullPoint::of(
        DriverSpec::quasi_periodic({0.3}, {2.0}, {0.1}));
    const auto res = tail_integral(qp, 1.0, 400.0, 1e-3, 1e-2, 0.5, 1.0);
    CHECK(res.integrable);
    CHECK(res.fit.model == TailFit::Model::Exponential);
    CHECK(res.fit.slope == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("unbounded backward cocycles are flagged divergent") {
    const auto p2 = HullPoint::of(DriverSpec::p2());
    const auto r = tail_integral(p2, 2.0, 400.0, 1e-6);
    CHECK_FALSE(r.integrable);
    const auto cm1 = HullPoint::limit_const(DriverSpec::p2(), -1.0);
    const auto rm = tail_integral(cm1, 1.0, 200.0, 1e-6);
    CHECK_FALSE(rm.integrable);
}
