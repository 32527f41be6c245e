#pragma once

#include <optional>
#include <string>
#include <vector>

#include "attractorlab/classification.hpp"
#include "attractorlab/cocycle.hpp"
#include "attractorlab/parabolic.hpp"

namespace attractorlab {

/// One experiment family: linear part, reaction term and discretization.
struct ProblemSetup {
    LinearCoefficientSpec coeff;
    NonlinearitySpec g;
    Grid grid;
};

struct PullbackOptions {
    double r = 0.0;  // starting height; 0 selects the absorbing radius
    std::vector<double> horizons = {25.0, 50.0, 100.0, 200.0, 400.0};
    double tol = 1e-5;
    double dt = 1e-2;
};

/// Upper-boundary section b(p) obtained as the decreasing pullback limit
/// from r * e0 over a horizon ladder.
struct AttractorSection {
    HullPoint hull_point;
    FieldState b_field;
    SectionClass classification = SectionClass::Indeterminate;  // value-band verdict
    double horizon = 0.0;
    double cauchy_gap = 0.0;
    bool converged = false;
    double sup_norm = 0.0;
    double min_interior = 0.0;
    std::vector<double> ladder_horizons;
    std::vector<double> ladder_sup_norms;
};

/// Pullback construction at hull point hp of the setup's family. Throws
/// NotConverged when the sup-norm Cauchy gap still exceeds tol at the last
/// horizon and MonotonicityViolation when a later horizon exceeds an
/// earlier one by more than 10 * tol.
AttractorSection pullback_boundary(const ProblemSetup& setup, const HullPoint& hp,
                                   const PullbackOptions& opts);

/// Same construction but returns the (possibly unconverged) record instead
/// of throwing; slow algebraic pullback decay is classified downstream.
AttractorSection pullback_section(const ProblemSetup& setup, const HullPoint& hp,
                                  const PullbackOptions& opts);

/// Finite-horizon classification that combines the pullback value with the
/// integrability criterion when the raw ladder has not settled.
struct CombinedClassification {
    SectionClass raw = SectionClass::Indeterminate;
    SectionClass final = SectionClass::Indeterminate;
    bool converged = false;
    bool criterion_available = false;
    bool criterion_positive = false;
    bool used_criterion = false;
    std::string trend;  // converged | decaying | stabilizing | unclear
};

CombinedClassification classify_section(const AttractorSection& section,
                                        std::optional<bool> criterion_positive);

/// Tail criterion for a nontrivial section: c(t, hp)^{theta-1} integrable
/// on (-inf, 0]. True predicts b(hp) strongly positive.
bool integrability_criterion(const HullPoint& hp, double theta, double T, double tol);

/// Same criterion for a setup whose effective coefficient carries a gamma
/// offset and a constant profile scale. Requires a homogeneous profile.
bool integrability_criterion(const ProblemSetup& setup, const HullPoint& hp,
                             double T, double tol);

/// Finite-horizon verdicts for the three equivalent statements in the
/// linear-dissipative case: nontrivial section, backward-bounded cocycle,
/// persistent pullback norms of the linear flow.
struct EquivalenceReport {
    HullPoint point;
    bool section_positive = false;
    bool cocycle_bounded = false;
    bool pullback_persistent = false;
    bool agree = false;
    bool conclusive = false;
    std::string section_trend;
    double log_cocycle_max_half = 0.0;
    double log_cocycle_max_full = 0.0;
    double linear_pullback_log_first = 0.0;
    double linear_pullback_log_last = 0.0;
};

EquivalenceReport equivalence_report(const ProblemSetup& setup, const HullPoint& hp,
                                     double horizon, const PullbackOptions& pb);

struct PointVerdict {
    HullPoint point;
    CombinedClassification cls;
    double sup_norm = 0.0;
    double min_interior = 0.0;
};

struct TrichotomyOptions {
    std::vector<double> lyapunov_horizons = {400.0};
    std::vector<double> lyapunov_shifts = {0.0, -10.0, 10.0, -100.0};
    double sign_tolerance = 0.05;
    PullbackOptions pullback;
    double criterion_horizon = 1000.0;
    double criterion_tol = 1e-6;
};

/// Sign pattern of the estimated principal spectrum mapped to the cases
/// s1..s5, with the sampled sections checked against the corresponding
/// predictions. Indeterminate sections yield an Inconclusive verdict.
struct TrichotomyReport {
    SpectralInterval spectrum;  // effective coefficient
    std::string case_tag;
    bool purely_dissipative = false;
    std::vector<PointVerdict> points;
    std::string verdict;  // Consistent | Inconsistent | Inconclusive
    std::vector<std::string> notes;
    std::optional<double> measured_decay_rate;   // s1
    std::optional<double> uniform_lower_bound;   // s5
};

TrichotomyReport trichotomy_report(const ProblemSetup& setup,
                                   const std::vector<HullPoint>& samples,
                                   const TrichotomyOptions& opts);

/// Forward trace of the boundary section along the orbit: b(hp . t) for
/// t in [t_min, t_max], built by pulling back once at hp . t_min and
/// evolving forward, with spot re-pullbacks at three interior times.
struct OrbitTrace {
    std::vector<double> times;
    std::vector<double> sup_norms;
    std::vector<double> check_times;
    std::vector<double> check_deltas;
};

OrbitTrace orbit_trace(const ProblemSetup& setup, const HullPoint& hp,
                       double t_min, double t_max, double dt_sample,
                       const PullbackOptions& pb);

/// Decay of the gaps between the boundary trajectory and trajectories
/// started below and above it. Requires a strongly positive section whose
/// forward sup-norms do not vanish.
struct ConvergenceCurves {
    std::vector<double> times;
    std::vector<double> gap_below;
    std::vector<double> gap_above;
    double final_gap_below = 0.0;
    double final_gap_above = 0.0;
};

ConvergenceCurves sublinear_convergence_check(const ProblemSetup& setup,
                                              const HullPoint& hp,
                                              const FieldState& z_below,
                                              const FieldState& z_above,
                                              double horizon,
                                              const PullbackOptions& pb);

}  // namespace attractorlab
