#pragma once

#include <stdexcept>
#include <string>

namespace resym {

enum class ErrorCode {
    ContextMismatch,
    LengthMismatch,
    NotZeroDimensional,
    NotCertifiedFree,
    DegreeMismatch,
    BlockViolation,
    NoCommonRefinement,
    NotDominating,
    MixedDegree,
    UnknownVariable,
    SyntaxError,
    LevelOverflow,
    WrongTwist,
    BadArgument,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ContextMismatch: return "CONTEXT_MISMATCH";
        case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
        case ErrorCode::NotZeroDimensional: return "NOT_ZERO_DIMENSIONAL";
        case ErrorCode::NotCertifiedFree: return "NOT_CERTIFIED_FREE";
        case ErrorCode::DegreeMismatch: return "DEGREE_MISMATCH";
        case ErrorCode::BlockViolation: return "BLOCK_VIOLATION";
        case ErrorCode::NoCommonRefinement: return "NO_COMMON_REFINEMENT";
        case ErrorCode::NotDominating: return "NOT_DOMINATING";
        case ErrorCode::MixedDegree: return "MIXED_DEGREE";
        case ErrorCode::UnknownVariable: return "UNKNOWN_VARIABLE";
        case ErrorCode::SyntaxError: return "SYNTAX_ERROR";
        case ErrorCode::LevelOverflow: return "LEVEL_OVERFLOW";
        case ErrorCode::WrongTwist: return "WRONG_TWIST";
        case ErrorCode::BadArgument: return "BAD_ARGUMENT";
        case ErrorCode::Internal: return "INTERNAL";
    }
    return "INTERNAL";
}

/// Library-wide exception; `code()` carries a stable machine-readable name.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace resym
