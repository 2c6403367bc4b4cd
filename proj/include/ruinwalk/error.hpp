#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ruin {

enum class ErrorCode {
    NegativeProbability,
    SumNotOne,
    ZeroStepProbability,
    InvalidEvaluationPoint,
    NegativeDiscriminant,
    DegenerateRoot,
    InvalidInterval,
    StartOutsideInterval,
    StartBelowBarrier,
    StartAboveBarrier,
    InvalidDomain,
    InfiniteVisits,
    InfiniteMoment,
    NonconvergentTail,
    StencilUnstable,
    InvalidArgument,
    ExcessiveCensoring,
    MissingQuantity,
    InternalInvariant,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Everything except
/// InternalInvariant is a caller-side error.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    bool is_internal() const noexcept { return code_ == ErrorCode::InternalInvariant; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace ruin
