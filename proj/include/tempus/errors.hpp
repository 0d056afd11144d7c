#pragma once

#include <stdexcept>
#include <string>

namespace tempus {

/// Classifies every failure the library can raise. The CLI maps these onto
/// exit codes: config problems exit 2, violated theorem hypotheses exit 3.
enum class ErrorKind {
    NonMonotonePoints,   // time-scale points not strictly increasing
    NonFiniteValue,      // NaN or infinity where a finite real is required
    TooFewPoints,        // n < 2 (first order) or n < 3 (second order)
    IndexOutOfRange,
    MisalignedGrids,     // grid functions living on different time scales
    NonRegressive,       // 1 + mu*p vanishes (within tolerance) somewhere
    ComplexRoots,        // characteristic discriminant negative
    NonDistinctRoots,    // double characteristic root
    RiccatiBreakdown,    // 1 - mu*z vanishes during the forward recursion
    RiccatiConditions,   // supplied Riccati solution violates its hypotheses
    ConfigError,         // malformed problem configuration
    InvalidArgument,     // bad parameter (h <= 0, q <= 1, ...)
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonMonotonePoints: return "non-monotone-points";
        case ErrorKind::NonFiniteValue:    return "non-finite-value";
        case ErrorKind::TooFewPoints:      return "too-few-points";
        case ErrorKind::IndexOutOfRange:   return "index-out-of-range";
        case ErrorKind::MisalignedGrids:   return "misaligned-grids";
        case ErrorKind::NonRegressive:     return "non-regressive";
        case ErrorKind::ComplexRoots:      return "complex-roots";
        case ErrorKind::NonDistinctRoots:  return "non-distinct-roots";
        case ErrorKind::RiccatiBreakdown:  return "riccati-breakdown";
        case ErrorKind::RiccatiConditions: return "riccati-conditions";
        case ErrorKind::ConfigError:       return "config-error";
        case ErrorKind::InvalidArgument:   return "invalid-argument";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// True for errors that correspond to a violated theorem hypothesis
    /// (as opposed to malformed input or plumbing failures).
    bool is_hypothesis_violation() const noexcept {
        switch (kind_) {
            case ErrorKind::NonRegressive:
            case ErrorKind::ComplexRoots:
            case ErrorKind::NonDistinctRoots:
            case ErrorKind::RiccatiBreakdown:
            case ErrorKind::RiccatiConditions:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorKind kind_;
};

} // namespace tempus
