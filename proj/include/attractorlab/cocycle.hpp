#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "attractorlab/hull.hpp"

namespace attractorlab {

struct QuadratureSpec {
    std::string rule = "simpson-composite";
    double step = 1e-2;
};

/// Samples of t -> log c(t, p) = integral of the coefficient along the
/// orbit from 0 to t. Negative times are allowed; the value at t = 0 is
/// exactly zero.
struct CocycleTrace {
    HullPoint hull_point;
    std::vector<double> times;       // strictly increasing
    std::vector<double> log_values;  // same length as times
    QuadratureSpec quadrature;
};

/// log c(t, hp) by breakpoint-aware composite quadrature.
double log_cocycle(const HullPoint& hp, double t, double step = 1e-3);

/// Cumulative trace over a strictly increasing time grid.
CocycleTrace cocycle_trace(const HullPoint& hp, std::vector<double> times,
                           double step = 1e-3);

/// Finite-horizon stand-ins for the limsup/liminf growth rates of
/// log c(t,p)/t in both time directions. Estimates are taken over a
/// geometric ladder of times inside the window [horizon/8, horizon].
struct LyapunovEstimate {
    double lambda_sup_plus = 0.0;
    double lambda_inf_plus = 0.0;
    double lambda_sup_minus = 0.0;
    double lambda_inf_minus = 0.0;
    double horizon = 0.0;
};

LyapunovEstimate lyapunov(const HullPoint& hp, double horizon, double step = 2e-2);

/// Estimated principal spectrum [alpha_lower, lambda_upper]: the min/max of
/// all finite-horizon exponent estimates over the sampled hull points.
struct SpectralInterval {
    double alpha_lower = 0.0;
    double lambda_upper = 0.0;
    std::vector<double> horizons;
    std::size_t samples = 0;
};

SpectralInterval spectrum_estimate(const DriverSpec& d,
                                   const std::vector<double>& horizons,
                                   const std::vector<double>& shifts,
                                   double step = 2e-2);

/// Decay model fitted to log c on the last decade of the truncated tail.
struct TailFit {
    enum class Model { PowerLaw, Exponential };
    Model model = Model::PowerLaw;
    double kappa = 0.0;     // intercept
    double slope = 0.0;     // m for power law (log c ~ kappa - m ln|t|), rate for exponential
    double residual = 0.0;  // rms misfit on the fitting window
};

/// Truncated integral of c(t, hp)^beta over [-T, 0] plus a model-based
/// estimate of the remaining tail. `converged` certifies that the fitted
/// decay implies integrability and the tail estimate is below tol;
/// `integrable` is the fit's verdict alone.
struct TailIntegralResult {
    double beta = 0.0;
    double truncation_T = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;
    bool converged = false;
    bool integrable = false;
    TailFit fit;
};

/// offset_rate and scale replace the integrand exponent by
/// beta * (offset_rate * t + scale * log c(t, hp)); the defaults give the
/// plain cocycle power. Throws InconclusiveFit when neither decay model
/// fits the sampled tail.
TailIntegralResult tail_integral(const HullPoint& hp, double beta, double T,
                                 double tol, double step = 1e-2,
                                 double offset_rate = 0.0, double scale = 1.0);

/// True when c(t, hp) is already uniformly small over the last decade
/// [-T, -T/10], i.e. the orbit looks asymptotic at -infinity.
bool is_asymptotic_at_minus_infinity(const HullPoint& hp, double beta, double T);

}  // namespace attractorlab
