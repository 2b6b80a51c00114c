// Error types shared across the toolkit.

#pragma once

#include <stdexcept>
#include <string>

namespace qpath {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct NonFiniteValue : Error {
    explicit NonFiniteValue(const std::string& msg) : Error(msg) {}
};

struct UnknownStage : Error {
    explicit UnknownStage(const std::string& msg) : Error(msg) {}
};

struct StageOrderViolation : Error {
    explicit StageOrderViolation(const std::string& msg) : Error(msg) {}
};

struct NonOrthonormalBasis : Error {
    explicit NonOrthonormalBasis(const std::string& msg) : Error(msg) {}
};

// Post-selection overlap too small for a meaningful conditioned ensemble.
// Carries the offending |<f|psi>| so callers can report it.
struct AnomalousPostselection : Error {
    AnomalousPostselection(const std::string& msg, double overlap_magnitude)
        : Error(msg), overlap(overlap_magnitude) {}
    double overlap;
};

struct ScenarioError : Error {
    explicit ScenarioError(const std::string& msg) : Error(msg) {}
};

}  // namespace qpath
