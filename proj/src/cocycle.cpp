#include "attractorlab/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "attractorlab/errors.hpp"
#include "attractorlab/quadrature.hpp"

namespace attractorlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Backward sweep from 0 down to -T. Panel widths grow proportionally to |t|
// so long tails stay cheap; panel edges are forced onto driver breakpoints.
// Produces log c at the panel edges and the accumulated integral of
// exp(beta * (offset_rate * t + scale * log c)).
struct TailSweep {
    std::vector<double> ts;    // descending from just below 0 to -T
    std::vector<double> logc;  // log c at ts
    double integral = 0.0;
};

double panel_width(double t, double step) {
    return step * std::max(1.0, std::abs(t) / 16.0);
}

TailSweep sweep_tail(const HullPoint& hp, double beta, double T, double step,
                     double offset_rate, double scale) {
    TailSweep out;
    out.ts.reserve(4096);
    out.logc.reserve(4096);

    std::vector<double> breaks;
    append_breakpoints(hp, -T, 0.0, breaks);
    std::sort(breaks.begin(), breaks.end(), std::greater<double>());
    std::size_t next_break = 0;

    const auto coeff = [&](double s) { return evaluate(hp, s); };
    const auto integrand_exponent = [&](double t, double L) {
        return beta * (offset_rate * t + scale * L);
    };

    double t = 0.0;
    double L = 0.0;
    double F_right = std::exp(integrand_exponent(0.0, 0.0));
    out.ts.push_back(t);
    out.logc.push_back(L);

    while (t > -T) {
        double tl = std::max(-T, t - panel_width(t, step));
        while (next_break < breaks.size() && breaks[next_break] >= t) ++next_break;
        if (next_break < breaks.size() && breaks[next_break] > tl)
            tl = breaks[next_break];

        const double tm = 0.5 * (tl + t);
        // Simpson increments over the two half panels keep log c 4th order.
        const double w_hi = t - tm;
        const double dL_hi = w_hi / 6.0 * (coeff(tm) + 4.0 * coeff(0.5 * (tm + t)) + coeff(t));
        const double L_mid = L - dL_hi;
        const double w_lo = tm - tl;
        const double dL_lo = w_lo / 6.0 * (coeff(tl) + 4.0 * coeff(0.5 * (tl + tm)) + coeff(tm));
        const double L_left = L_mid - dL_lo;

        const double F_mid = std::exp(integrand_exponent(tm, L_mid));
        const double F_left = std::exp(integrand_exponent(tl, L_left));
        out.integral += (t - tl) / 6.0 * (F_left + 4.0 * F_mid + F_right);

        t = tl;
        L = L_left;
        F_right = F_left;
        out.ts.push_back(t);
        out.logc.push_back(L);
    }
    return out;
}

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double residual = kInf;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinearFit f;
    const std::size_t n = xs.size();
    if (n < 4) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) return f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

// Numeric tail of the fitted model beyond -T, for the mixed case where no
// clean closed form applies. Integrates exp(g(t)) leftward on widening
// panels until the contribution is negligible.
double model_tail_numeric(const std::function<double(double)>& g, double T) {
    double total = 0.0;
    double t = -T;
    for (int i = 0; i < 4000; ++i) {
        const double w = std::max(T * 0.01, 1.0);
        const double tl = t - w;
        const double fl = std::exp(g(tl));
        const double fm = std::exp(g(0.5 * (tl + t)));
        const double fr = std::exp(g(t));
        const double piece = w / 6.0 * (fl + 4.0 * fm + fr);
        total += piece;
        if (piece < 1e-18 * std::max(total, 1.0)) return total;
        t = tl;
    }
    return kInf;  // did not decay: treat as divergent
}

}  // namespace

double log_cocycle(const HullPoint& hp, double t, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("quadrature step must be positive");
    return integrate_coefficient(hp, 0.0, t, step);
}

CocycleTrace cocycle_trace(const HullPoint& hp, std::vector<double> times, double step) {
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("trace times must be increasing");
    CocycleTrace tr;
    tr.hull_point = hp;
    tr.quadrature.step = step;
    tr.times = std::move(times);
    tr.log_values.assign(tr.times.size(), 0.0);

    // Anchor the cumulative sums at t = 0 so log c(0) is exactly zero.
    const auto first_pos = std::lower_bound(tr.times.begin(), tr.times.end(), 0.0);
    const std::size_t ip = static_cast<std::size_t>(first_pos - tr.times.begin());
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = ip; i < tr.times.size(); ++i) {
        acc += integrate_coefficient(hp, prev, tr.times[i], step);
        prev = tr.times[i];
        tr.log_values[i] = (tr.times[i] == 0.0) ? 0.0 : acc;
    }
    acc = 0.0;
    prev = 0.0;
    for (std::size_t j = ip; j-- > 0;) {
        acc += integrate_coefficient(hp, prev, tr.times[j], step);
        prev = tr.times[j];
        tr.log_values[j] = acc;
    }
    return tr;
}

LyapunovEstimate lyapunov(const HullPoint& hp, double horizon, double step) {
    if (!(horizon >= 16.0))
        throw std::invalid_argument("lyapunov horizon must be >= 16 so the sample window is meaningful");
    constexpr int kWindowSamples = 12;
    const double ratio = std::pow(1.0 / 8.0, 1.0 / (kWindowSamples - 1));

    LyapunovEstimate est;
    est.horizon = horizon;

    std::vector<double> ts(kWindowSamples);
    for (int i = 0; i < kWindowSamples; ++i)
        ts[i] = horizon * std::pow(ratio, kWindowSamples - 1 - i);  // ascending

    // forward direction
    double acc = 0.0, prev = 0.0;
    double sup = -kInf, inf = kInf;
    for (double t : ts) {
        acc += integrate_coefficient(hp, prev, t, step);
        prev = t;
        const double v = acc / t;
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    est.lambda_sup_plus = sup;
    est.lambda_inf_plus = inf;

    // backward direction
    acc = 0.0;
    prev = 0.0;
    sup = -kInf;
    inf = kInf;
    for (double t : ts) {
        acc += integrate_coefficient(hp, prev, -t, step);
        prev = -t;
        const double v = acc / (-t);
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    est.lambda_sup_minus = sup;
    est.lambda_inf_minus = inf;
    return est;
}

SpectralInterval spectrum_estimate(const DriverSpec& d,
                                   const std::vector<double>& horizons,
                                   const std::vector<double>& shifts,
                                   double step) {
    if (horizons.empty() || shifts.empty())
        throw std::invalid_argument("spectrum_estimate needs nonempty horizons and shifts");

    std::vector<HullPoint> points;
    for (double s : shifts) points.push_back(advance(HullPoint::of(d), s));
    if (d.has_listable_limits())
        for (auto& lp : limit_points(d)) points.push_back(lp);

    SpectralInterval si;
    si.horizons = horizons;
    si.alpha_lower = kInf;
    si.lambda_upper = -kInf;
    for (const auto& p : points) {
        for (double h : horizons) {
            const auto est = lyapunov(p, h, step);
            si.alpha_lower = std::min({si.alpha_lower, est.lambda_inf_plus, est.lambda_inf_minus});
            si.lambda_upper = std::max({si.lambda_upper, est.lambda_sup_plus, est.lambda_sup_minus});
            ++si.samples;
        }
    }
    return si;
}

TailIntegralResult tail_integral(const HullPoint& hp, double beta, double T,
                                 double tol, double step, double offset_rate,
                                 double scale) {
    if (!(beta > 0.0)) throw std::invalid_argument("tail exponent beta must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("truncation horizon must be positive");

    const TailSweep sw = sweep_tail(hp, beta, T, step, offset_rate, scale);

    TailIntegralResult res;
    res.beta = beta;
    res.truncation_T = T;
    res.value = sw.integral;

    // Fit the decay of the effective exponent on the last decade.
    const double t_hi = -T / 10.0;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sw.ts.size(); ++i)
        if (sw.ts[i] <= t_hi) idx.push_back(i);
    if (idx.size() < 8)  // widen for short horizons
        for (std::size_t i = 0; i < sw.ts.size(); ++i)
            if (sw.ts[i] <= -T / 100.0 && (idx.empty() || idx.back() != i)) idx.push_back(i);
    if (idx.size() < 8)
        throw InconclusiveFit("tail too short to fit a decay model; raise the horizon");

    // The power model regresses against absolute driver time shift + t, so
    // shifted hull points keep the exact kappa - m ln|u| form of their tails.
    const double shift = hp.is_limit() ? 0.0 : hp.shift;
    const std::size_t stride = std::max<std::size_t>(1, idx.size() / 256);
    std::vector<double> xs_pow, xs_exp, ys_pow, ys_exp;
    for (std::size_t k = 0; k < idx.size(); k += stride) {
        const double t = sw.ts[idx[k]];
        const double L_eff = offset_rate * t + scale * sw.logc[idx[k]];
        const double u = shift + t;
        if (std::abs(u) > 1e-9) {
            xs_pow.push_back(std::log(std::abs(u)));
            ys_pow.push_back(L_eff - offset_rate * t);  // remove the known drift
        }
        xs_exp.push_back(t);
        ys_exp.push_back(L_eff);
    }

    const LinearFit pw = fit_line(xs_pow, ys_pow);  // y = kappa - m ln|t|
    const LinearFit ex = fit_line(xs_exp, ys_exp);  // y = kappa + r t

    // Misfit is judged against the swing of log c over the window, so a
    // strong drift with small wiggles stays decidable while a bounded
    // oscillation with no trend does not.
    double y_lo = ys_exp.front(), y_hi = ys_exp.front();
    for (double y : ys_exp) {
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    const double threshold = std::max(0.1, (y_hi - y_lo) / 40.0);
    const bool power_wins = pw.residual <= ex.residual;
    const LinearFit& best = power_wins ? pw : ex;
    if (!(best.residual < threshold))
        throw InconclusiveFit("tail decay fit residual " + std::to_string(best.residual) +
                              " exceeds threshold; integrability undecidable at this horizon");

    res.fit.model = power_wins ? TailFit::Model::PowerLaw : TailFit::Model::Exponential;
    res.fit.kappa = best.intercept;
    res.fit.slope = power_wins ? -best.slope : best.slope;
    res.fit.residual = best.residual;

    // Borderline decay (m * beta == 1 or zero exponential rate) must resolve
    // to divergent; the margin sits far above quadrature noise.
    constexpr double kIntegrableMargin = 1e-6;
    if (power_wins) {
        const double m = res.fit.slope;
        const double u_cut = shift - T;  // absolute driver time at the truncation
        if (offset_rate == 0.0) {
            res.integrable = m * beta > 1.0 + kIntegrableMargin && u_cut < 0.0;
            res.tail_bound = res.integrable
                                 ? std::exp(beta * res.fit.kappa) *
                                       std::pow(-u_cut, 1.0 - m * beta) / (m * beta - 1.0)
                                 : kInf;
        } else if (offset_rate > 0.0) {
            res.integrable = true;
            const auto g = [&](double t) {
                return beta * (offset_rate * t + res.fit.kappa - m * std::log(std::abs(shift + t)));
            };
            res.tail_bound = model_tail_numeric(g, T);
        } else {
            res.integrable = false;
            res.tail_bound = kInf;
        }
    } else {
        const double rate = res.fit.slope;  // drift is part of the fitted rate
        res.integrable = rate > kIntegrableMargin;
        res.tail_bound = res.integrable
                             ? std::exp(beta * (res.fit.kappa - rate * T)) / (beta * rate)
                             : kInf;
    }
    res.converged = res.integrable && res.tail_bound < tol;
    return res;
}

bool is_asymptotic_at_minus_infinity(const HullPoint& hp, double beta, double T) {
    if (!(beta > 0.0) || !(T > 0.0))
        throw std::invalid_argument("is_asymptotic_at_minus_infinity needs beta > 0 and T > 0");
    const TailSweep sw = sweep_tail(hp, beta, T, 1e-2, 0.0, 1.0);
    constexpr double kSmall = 0.05;
    double worst = 0.0;
    for (std::size_t i = 0; i < sw.ts.size(); ++i)
        if (sw.ts[i] <= -T / 10.0) worst = std::max(worst, std::exp(sw.logc[i]));
    return worst < kSmall;
}

}  // namespace attractorlab
