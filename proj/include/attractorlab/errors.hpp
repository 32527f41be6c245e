#pragma once

#include <stdexcept>
#include <string>

namespace attractorlab {

/// Requested hull enumeration is not available for this driver family.
struct UnsupportedDriver : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The backward tail of the cocycle integral diverges.
struct DivergentTail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Neither the power-law nor the exponential decay model fits the sampled
/// tail well enough to decide integrability at this horizon.
struct InconclusiveFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A pullback ladder did not reach the requested Cauchy tolerance.
struct NotConverged : std::runtime_error {
    NotConverged(const std::string& what, double last_value, double last_gap)
        : std::runtime_error(what), value(last_value), gap(last_gap) {}
    double value;
    double gap;
};

struct NegativeInitialCondition : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Time step violates the monotonicity bound of the IMEX scheme.
struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation requires a spatially constant coefficient profile.
struct HeterogeneousProfile : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A later pullback horizon exceeded an earlier one beyond tolerance,
/// which contradicts the super-equilibrium construction.
struct MonotonicityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace attractorlab
