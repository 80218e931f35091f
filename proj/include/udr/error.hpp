#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace udr {

/// Failure categories surfaced by the library. Names mirror the report
/// strings emitted by the CLI.
enum class ErrorCode {
    InvalidArgument,
    ParseError,
    StraddlesInteger,
    DigitFileExhausted,
    AmbiguousDigit,
    ZeroDigitsExhausted,
    NoTailBound,
    PrecisionUnreachable,
    BoundViolated,
    PreconditionMeasure,
    UnsupportedFamily,
    RationalRotation,
    GridTooLarge,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::StraddlesInteger: return "STRADDLES_INTEGER";
    case ErrorCode::DigitFileExhausted: return "DIGIT_FILE_EXHAUSTED";
    case ErrorCode::AmbiguousDigit: return "AMBIGUOUS_DIGIT";
    case ErrorCode::ZeroDigitsExhausted: return "ZERO_DIGITS_EXHAUSTED";
    case ErrorCode::NoTailBound: return "NO_TAIL_BOUND";
    case ErrorCode::PrecisionUnreachable: return "PRECISION_UNREACHABLE";
    case ErrorCode::BoundViolated: return "BOUND_VIOLATED";
    case ErrorCode::PreconditionMeasure: return "PRECONDITION_MEASURE";
    case ErrorCode::UnsupportedFamily: return "UNSUPPORTED_FAMILY";
    case ErrorCode::RationalRotation: return "RATIONAL_ROTATION";
    case ErrorCode::GridTooLarge: return "GRID_TOO_LARGE";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

inline void require(bool cond, const std::string& what)
{
    if (!cond)
        throw Error(ErrorCode::InvalidArgument, what);
}

} // namespace udr
