#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssdt {

enum class ErrorCode {
    // model construction and parsing
    kEmptyMeasure,
    kLengthMismatch,
    kNonPositiveAtom,
    kNonPositiveWeight,
    kWeightSumError,
    kBadGamma,
    kSyntaxError,
    // kernel arithmetic
    kSingularPoint,
    // root finding
    kMaxIterationsExceeded,
    kNonFiniteValue,
    kGuardViolated,
    kInitializationFailed,
    // domain of the transforms
    kEdgeViolation,
    kUndetectableSignal,
    // simulation and statistics
    kDimensionTooSmall,
    kConvergenceFailure,
    kEmptyInput,
    kTooFewPoints,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message adds context (field, line, iterate) for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace ssdt
