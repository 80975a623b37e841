#ifndef MIXBND_ERROR_HPP
#define MIXBND_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mixbnd {

enum class ErrorCode {
    BadVertexIndex,
    CycleDetected,
    BadFormat,
    PartialAssignment,
    ZeroConditioningProbability,
    TooManyFreeVertices,
    GenerationTimeout,
    NotEnoughCenters,
    IllFormedRun,
    NotAlignable,
    NotAPath,
    PathTooShort,
    OracleFailure,
    InsufficientSamples,
    EmDidNotConverge,
    NotSeparated,
    AmbiguousPermutation,
    MissingCoverage,
    ZeroDenominator,
    NonOneHotSupport,
    ShapeMismatch,
};

const char* error_name(ErrorCode code);

// Input errors come from malformed files or arguments; everything else is a
// pipeline failure.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mixbnd

#endif
