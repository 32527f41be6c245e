#pragma once

#include <string>
#include <vector>

namespace attractorlab {

enum class DriverKind {
    PiecewiseP0,   ///< odd map: -2t on [-1,1], -2/t outside
    PiecewiseP1,   ///< -2/t for t <= -1, constant 2 afterwards
    PiecewiseP2,   ///< 1/t for t <= -1, constant -1 afterwards
    Constant,
    QuasiPeriodic, ///< finite cosine series, phases live on a torus
    SlowGrowth,    ///< mean-zero series whose integral grows like t^beta
};

/// Description of a bounded, uniformly continuous forcing function. The
/// shift flow acting on a driver and its limit functions make up the
/// compact base space the rest of the library works over.
struct DriverSpec {
    DriverKind kind = DriverKind::Constant;
    double constant_value = 0.0;

    // cosine series parameters (QuasiPeriodic and SlowGrowth)
    std::vector<double> amplitudes;
    std::vector<double> frequencies;
    std::vector<double> phases;

    double growth_exponent = 0.5;  // SlowGrowth beta in (0,1)

    /// Evaluate the mirrored function t -> f(-t). Only supported for the
    /// piecewise and constant families; used to flip the direction of time
    /// in comparison experiments.
    bool reversed = false;

    static DriverSpec p0();
    static DriverSpec p1();
    static DriverSpec p2();
    static DriverSpec constant(double c);
    static DriverSpec quasi_periodic(std::vector<double> amplitudes,
                                     std::vector<double> frequencies,
                                     std::vector<double> phases);
    /// Default slow-growth series: amplitudes 2^{-k(1-beta)} at frequencies
    /// 2^{-k}, k = 1..terms. Partial integrals stay below C * t^beta.
    static DriverSpec slow_growth(double beta = 0.5, int terms = 16);

    DriverSpec time_reversed() const;

    /// Analytic bound on |f|.
    double bound() const;

    /// True when the hull's limit functions can be listed explicitly.
    bool has_listable_limits() const;

    std::string label() const;
};

enum class LimitTag { None, Zero, Const };

/// A point of the hull: either a time shift of the driver or one of the
/// named limit functions. Limit functions are fixed points of the shift
/// flow, so their shift is ignored.
struct HullPoint {
    DriverSpec driver;
    double shift = 0.0;
    LimitTag limit_tag = LimitTag::None;
    double limit_value = 0.0;

    static HullPoint of(DriverSpec d, double shift = 0.0);
    static HullPoint limit_zero(DriverSpec d);
    static HullPoint limit_const(DriverSpec d, double value);

    bool is_limit() const { return limit_tag != LimitTag::None; }
    std::string label() const;
};

/// Value of the coefficient along the orbit: a(hp . t).
double evaluate(const HullPoint& hp, double t);

/// Shift flow. advance(hp, 0) == hp and advance(advance(hp, s), t) is the
/// same point as advance(hp, s + t).
HullPoint advance(const HullPoint& hp, double t);

/// Limit functions of the hull. Throws UnsupportedDriver for the
/// quasi-periodic and slow-growth families, whose hulls are not finitely
/// listable; callers sample shifts instead.
std::vector<HullPoint> limit_points(const DriverSpec& d);

/// Local times in (a, b) at which the coefficient t -> evaluate(hp, t) has
/// a branch switch. Quadrature forces nodes there.
void append_breakpoints(const HullPoint& hp, double a, double b,
                        std::vector<double>& out);

}  // namespace attractorlab
