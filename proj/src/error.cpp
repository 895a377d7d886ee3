#include "levystop/error.hpp"

namespace levystop {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveVolatility: return "NonPositiveVolatility";
        case ErrorCode::BadJumpParameters: return "BadJumpParameters";
        case ErrorCode::BadJumpSupport: return "BadJumpSupport";
        case ErrorCode::BadPayoff: return "BadPayoff";
        case ErrorCode::NegativeParameter: return "NegativeParameter";
        case ErrorCode::ZeroDiscountForThreshold: return "ZeroDiscountForThreshold";
        case ErrorCode::UnsupportedModel: return "UnsupportedModel";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::NoBreakEven: return "NoBreakEven";
        case ErrorCode::DivergentTransform: return "DivergentTransform";
        case ErrorCode::BadSupport: return "BadSupport";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NoFiniteThreshold: return "NoFiniteThreshold";
        case ErrorCode::KinkPoint: return "KinkPoint";
        case ErrorCode::SandwichViolation: return "SandwichViolation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveVolatility:
        case ErrorCode::BadJumpParameters:
        case ErrorCode::BadJumpSupport:
        case ErrorCode::BadPayoff:
        case ErrorCode::NegativeParameter:
        case ErrorCode::ZeroDiscountForThreshold:
        case ErrorCode::UnsupportedModel:
        case ErrorCode::ConfigError:
            return true;
        default:
            return false;
    }
}

}  // namespace levystop
