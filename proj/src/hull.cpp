#include "attractorlab/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "attractorlab/errors.hpp"

namespace attractorlab {

namespace {

double eval_series(const DriverSpec& d, double u) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.amplitudes.size(); ++i)
        s += d.amplitudes[i] * std::cos(d.frequencies[i] * u + d.phases[i]);
    return s;
}

double eval_base(const DriverSpec& d, double u) {
    switch (d.kind) {
        case DriverKind::Constant:
            return d.constant_value;
        case DriverKind::PiecewiseP0:
            return std::abs(u) <= 1.0 ? -2.0 * u : -2.0 / u;
        case DriverKind::PiecewiseP1:
            return u >= -1.0 ? 2.0 : -2.0 / u;
        case DriverKind::PiecewiseP2:
            return u >= -1.0 ? -1.0 : 1.0 / u;
        case DriverKind::QuasiPeriodic:
        case DriverKind::SlowGrowth:
            return eval_series(d, u);
    }
    return 0.0;
}

bool is_series(DriverKind k) {
    return k == DriverKind::QuasiPeriodic || k == DriverKind::SlowGrowth;
}

void validate_series(const DriverSpec& d) {
    if (d.amplitudes.size() != d.frequencies.size() ||
        d.amplitudes.size() != d.phases.size() || d.amplitudes.empty())
        throw std::invalid_argument("cosine series needs matching nonempty parameter lists");
    for (double w : d.frequencies)
        if (!(w > 0.0)) throw std::invalid_argument("series frequencies must be positive");
}

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

DriverSpec DriverSpec::p0() {
    DriverSpec d;
    d.kind = DriverKind::PiecewiseP0;
    return d;
}

DriverSpec DriverSpec::p1() {
    DriverSpec d;
    d.kind = DriverKind::PiecewiseP1;
    return d;
}

DriverSpec DriverSpec::p2() {
    DriverSpec d;
    d.kind = DriverKind::PiecewiseP2;
    return d;
}

DriverSpec DriverSpec::constant(double c) {
    DriverSpec d;
    d.kind = DriverKind::Constant;
    d.constant_value = c;
    return d;
}

DriverSpec DriverSpec::quasi_periodic(std::vector<double> amplitudes,
                                      std::vector<double> frequencies,
                                      std::vector<double> phases) {
    DriverSpec d;
    d.kind = DriverKind::QuasiPeriodic;
    d.amplitudes = std::move(amplitudes);
    d.frequencies = std::move(frequencies);
    d.phases = std::move(phases);
    validate_series(d);
    return d;
}

DriverSpec DriverSpec::slow_growth(double beta, int terms) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("slow-growth exponent must lie in (0,1)");
    if (terms < 1) throw std::invalid_argument("slow-growth series needs at least one term");
    DriverSpec d;
    d.kind = DriverKind::SlowGrowth;
    d.growth_exponent = beta;
    d.amplitudes.reserve(terms);
    d.frequencies.reserve(terms);
    d.phases.assign(terms, 0.0);
    for (int k = 1; k <= terms; ++k) {
        const double w = std::ldexp(1.0, -k);  // 2^{-k}
        d.frequencies.push_back(w);
        d.amplitudes.push_back(std::pow(w, 1.0 - beta));
    }
    return d;
}

DriverSpec DriverSpec::time_reversed() const {
    if (is_series(kind))
        throw UnsupportedDriver("time reversal is not supported for series drivers");
    DriverSpec d = *this;
    d.reversed = !d.reversed;
    return d;
}

double DriverSpec::bound() const {
    switch (kind) {
        case DriverKind::Constant: return std::abs(constant_value);
        case DriverKind::PiecewiseP0:
        case DriverKind::PiecewiseP1: return 2.0;
        case DriverKind::PiecewiseP2: return 1.0;
        case DriverKind::QuasiPeriodic:
        case DriverKind::SlowGrowth: {
            double s = 0.0;
            for (double a : amplitudes) s += std::abs(a);
            return s;
        }
    }
    return 0.0;
}

bool DriverSpec::has_listable_limits() const { return !is_series(kind); }

std::string DriverSpec::label() const {
    std::ostringstream os;
    switch (kind) {
        case DriverKind::PiecewiseP0: os << "p0"; break;
        case DriverKind::PiecewiseP1: os << "p1"; break;
        case DriverKind::PiecewiseP2: os << "p2"; break;
        case DriverKind::Constant: os << "constant:" << constant_value; break;
        case DriverKind::QuasiPeriodic: os << "quasiperiodic[" << amplitudes.size() << "]"; break;
        case DriverKind::SlowGrowth: os << "slowgrowth:beta=" << growth_exponent; break;
    }
    if (reversed) os << ":reversed";
    return os.str();
}

HullPoint HullPoint::of(DriverSpec d, double shift) {
    HullPoint hp;
    hp.driver = std::move(d);
    hp.shift = shift;
    return hp;
}

HullPoint HullPoint::limit_zero(DriverSpec d) {
    HullPoint hp;
    hp.driver = std::move(d);
    hp.limit_tag = LimitTag::Zero;
    return hp;
}

HullPoint HullPoint::limit_const(DriverSpec d, double value) {
    HullPoint hp;
    hp.driver = std::move(d);
    hp.limit_tag = LimitTag::Const;
    hp.limit_value = value;
    return hp;
}

std::string HullPoint::label() const {
    std::ostringstream os;
    os << driver.label();
    if (limit_tag == LimitTag::Zero) {
        os << ":limit(0)";
    } else if (limit_tag == LimitTag::Const) {
        os << ":limit(" << limit_value << ")";
    } else if (shift != 0.0) {
        os << ":shift=" << shift;
    }
    return os.str();
}

double evaluate(const HullPoint& hp, double t) {
    if (hp.limit_tag == LimitTag::Zero) return 0.0;
    if (hp.limit_tag == LimitTag::Const) return hp.limit_value;
    double u = hp.shift + t;
    if (hp.driver.reversed) u = -u;
    return eval_base(hp.driver, u);
}

HullPoint advance(const HullPoint& hp, double t) {
    if (hp.is_limit()) return hp;
    HullPoint out = hp;
    if (is_series(hp.driver.kind)) {
        // Fold the full shift into the torus phases to keep precision for
        // large times.
        const double total = hp.shift + t;
        for (std::size_t i = 0; i < out.driver.phases.size(); ++i) {
            double ph = std::fmod(out.driver.phases[i] + out.driver.frequencies[i] * total, two_pi);
            if (ph < 0.0) ph += two_pi;
            out.driver.phases[i] = ph;
        }
        out.shift = 0.0;
    } else {
        out.shift += t;
    }
    return out;
}

std::vector<HullPoint> limit_points(const DriverSpec& d) {
    switch (d.kind) {
        case DriverKind::PiecewiseP0:
            return {HullPoint::limit_zero(d)};
        case DriverKind::PiecewiseP1:
            return {HullPoint::limit_zero(d), HullPoint::limit_const(d, 2.0)};
        case DriverKind::PiecewiseP2:
            return {HullPoint::limit_zero(d), HullPoint::limit_const(d, -1.0)};
        case DriverKind::Constant:
            return {HullPoint::limit_const(d, d.constant_value)};
        case DriverKind::QuasiPeriodic:
        case DriverKind::SlowGrowth:
            throw UnsupportedDriver(
                "hull limit functions are not finitely listable for " + d.label() +
                "; sample shifts instead");
    }
    return {};
}

void append_breakpoints(const HullPoint& hp, double a, double b,
                        std::vector<double>& out) {
    if (hp.is_limit()) return;
    const DriverSpec& d = hp.driver;
    double kinks[2];
    int n_kinks = 0;
    switch (d.kind) {
        case DriverKind::PiecewiseP0:
            kinks[n_kinks++] = -1.0;
            kinks[n_kinks++] = 1.0;
            break;
        case DriverKind::PiecewiseP1:
        case DriverKind::PiecewiseP2:
            kinks[n_kinks++] = -1.0;
            break;
        default:
            return;  // smooth families
    }
    for (int i = 0; i < n_kinks; ++i) {
        const double t = d.reversed ? -hp.shift - kinks[i] : kinks[i] - hp.shift;
        if (t > a && t < b) out.push_back(t);
    }
}

}  // namespace attractorlab
