#pragma once

#include <string>

namespace attractorlab {

/// Verdict on an attractor section. Either the section is the null map or
/// it is strongly positive; Indeterminate flags a value inside the gap
/// band, which signals insufficient horizon rather than a third state.
enum class SectionClass { Trivial, StronglyPositive, Indeterminate };

constexpr double kTrivialThreshold = 1e-6;         // sup-norm at or below => Trivial
constexpr double kStronglyPositiveThreshold = 1e-3;  // interior min at or above => StronglyPositive

inline std::string to_string(SectionClass c) {
    switch (c) {
        case SectionClass::Trivial: return "Trivial";
        case SectionClass::StronglyPositive: return "StronglyPositive";
        case SectionClass::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

}  // namespace attractorlab
