#include "ruinwalk/error.hpp"

namespace ruin {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NegativeProbability: return "NegativeProbability";
        case ErrorCode::SumNotOne: return "SumNotOne";
        case ErrorCode::ZeroStepProbability: return "ZeroStepProbability";
        case ErrorCode::InvalidEvaluationPoint: return "InvalidEvaluationPoint";
        case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
        case ErrorCode::DegenerateRoot: return "DegenerateRoot";
        case ErrorCode::InvalidInterval: return "InvalidInterval";
        case ErrorCode::StartOutsideInterval: return "StartOutsideInterval";
        case ErrorCode::StartBelowBarrier: return "StartBelowBarrier";
        case ErrorCode::StartAboveBarrier: return "StartAboveBarrier";
        case ErrorCode::InvalidDomain: return "InvalidDomain";
        case ErrorCode::InfiniteVisits: return "InfiniteVisits";
        case ErrorCode::InfiniteMoment: return "InfiniteMoment";
        case ErrorCode::NonconvergentTail: return "NonconvergentTail";
        case ErrorCode::StencilUnstable: return "StencilUnstable";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ExcessiveCensoring: return "ExcessiveCensoring";
        case ErrorCode::MissingQuantity: return "MissingQuantity";
        case ErrorCode::InternalInvariant: return "InternalInvariant";
    }
    return "Unknown";
}

}  // namespace ruin
