#include "mixbnd/error.hpp"

namespace mixbnd {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadVertexIndex: return "BadVertexIndex";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::BadFormat: return "BadFormat";
        case ErrorCode::PartialAssignment: return "PartialAssignment";
        case ErrorCode::ZeroConditioningProbability: return "ZeroConditioningProbability";
        case ErrorCode::TooManyFreeVertices: return "TooManyFreeVertices";
        case ErrorCode::GenerationTimeout: return "GenerationTimeout";
        case ErrorCode::NotEnoughCenters: return "NotEnoughCenters";
        case ErrorCode::IllFormedRun: return "IllFormedRun";
        case ErrorCode::NotAlignable: return "NotAlignable";
        case ErrorCode::NotAPath: return "NotAPath";
        case ErrorCode::PathTooShort: return "PathTooShort";
        case ErrorCode::OracleFailure: return "OracleFailure";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::EmDidNotConverge: return "EmDidNotConverge";
        case ErrorCode::NotSeparated: return "NotSeparated";
        case ErrorCode::AmbiguousPermutation: return "AmbiguousPermutation";
        case ErrorCode::MissingCoverage: return "MissingCoverage";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::NonOneHotSupport: return "NonOneHotSupport";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadVertexIndex:
        case ErrorCode::CycleDetected:
        case ErrorCode::BadFormat:
        case ErrorCode::ShapeMismatch:
            return true;
        default:
            return false;
    }
}

}  // namespace mixbnd
