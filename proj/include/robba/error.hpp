#pragma once

#include <stdexcept>
#include <string>

namespace robba {

enum class ErrorCode {
    ZeroInput,
    ZeroDivisor,
    PrecisionExhausted,
    CapExceeded,
    NotAUnit,
    BadInterval,
    LengthMismatch,
    NotPrimitive,
    NotMonicShape,
    SlopeMismatch,
    DivergentEvaluation,
    NeedsFieldExtension,
    NotPolynomial,
    FieldMismatch,
    SyntaxError,
    Cancelled,
    InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::ZeroInput: return "ZeroInput";
        case ErrorCode::ZeroDivisor: return "ZeroDivisor";
        case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::NotAUnit: return "NotAUnit";
        case ErrorCode::BadInterval: return "BadInterval";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NotPrimitive: return "NotPrimitive";
        case ErrorCode::NotMonicShape: return "NotMonicShape";
        case ErrorCode::SlopeMismatch: return "SlopeMismatch";
        case ErrorCode::DivergentEvaluation: return "DivergentEvaluation";
        case ErrorCode::NeedsFieldExtension: return "NeedsFieldExtension";
        case ErrorCode::NotPolynomial: return "NotPolynomial";
        case ErrorCode::FieldMismatch: return "FieldMismatch";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::Cancelled: return "Cancelled";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Kernel error. Every domain failure surfaces as one of the codes above;
/// the CLI maps codes one-to-one onto its error strings.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

} // namespace robba
