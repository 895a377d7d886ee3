#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levystop {

/// Every failure the library reports; the name of the enumerator is the
/// violated invariant and is what the CLI prints.
enum class ErrorCode {
    // model / config validation
    NonPositiveVolatility,
    BadJumpParameters,
    BadJumpSupport,
    BadPayoff,
    NegativeParameter,
    ZeroDiscountForThreshold,
    UnsupportedModel,
    ConfigError,
    // numerical
    NoBreakEven,
    DivergentTransform,
    BadSupport,
    BracketFailure,
    NoPositiveRoot,
    DomainError,
    NoFiniteThreshold,
    KinkPoint,
    SandwichViolation,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes caused by a bad model or config (as opposed to a
/// numerical failure on a valid one).
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace levystop
