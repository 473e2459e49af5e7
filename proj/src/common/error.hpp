#pragma once

#include <stdexcept>
#include <string>

namespace resonet {

// Error taxonomy shared by the whole library. Each value maps 1:1 onto an
// rn_status code in the public C header, so exceptions thrown anywhere in the
// core can be translated at the ABI boundary without losing information.
enum class ErrorCode {
    InvalidArgument,
    Parse,
    Dimension,
    NonUniqueSteadyState,
    UnphysicalState,
    NoConvergence,
    DegenerateDenominator,
    ValidationThreshold,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

// Stable snake_case label, used in report status columns and error messages.
inline const char* error_code_label(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::Parse: return "parse_error";
        case ErrorCode::Dimension: return "dimension_error";
        case ErrorCode::NonUniqueSteadyState: return "non_unique_steady_state";
        case ErrorCode::UnphysicalState: return "unphysical_state";
        case ErrorCode::NoConvergence: return "no_convergence";
        case ErrorCode::DegenerateDenominator: return "degenerate_denominator";
        case ErrorCode::ValidationThreshold: return "validation_threshold";
        case ErrorCode::Internal: return "internal_error";
    }
    return "internal_error";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool ok, ErrorCode code, const std::string& message) {
    if (!ok) fail(code, message);
}

}  // namespace resonet
