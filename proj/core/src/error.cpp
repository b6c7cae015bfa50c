#include "ssdt/error.hpp"

namespace ssdt {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::kEmptyMeasure: return "EmptyMeasure";
        case ErrorCode::kLengthMismatch: return "LengthMismatch";
        case ErrorCode::kNonPositiveAtom: return "NonPositiveAtom";
        case ErrorCode::kNonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::kWeightSumError: return "WeightSumError";
        case ErrorCode::kBadGamma: return "BadGamma";
        case ErrorCode::kSyntaxError: return "SyntaxError";
        case ErrorCode::kSingularPoint: return "SingularPoint";
        case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
        case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
        case ErrorCode::kGuardViolated: return "GuardViolated";
        case ErrorCode::kInitializationFailed: return "InitializationFailed";
        case ErrorCode::kEdgeViolation: return "EdgeViolation";
        case ErrorCode::kUndetectableSignal: return "UndetectableSignal";
        case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
        case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::kEmptyInput: return "EmptyInput";
        case ErrorCode::kTooFewPoints: return "TooFewPoints";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ssdt
