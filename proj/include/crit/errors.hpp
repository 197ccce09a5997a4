#pragma once

#include <stdexcept>
#include <string>

namespace crit {

enum class ErrorCode {
    NegativeMass,
    MassNotOne,
    SupportTooLarge,
    EvaluationError,
    NegativeRate,
    SyntaxError,
    UnknownIdentifier,
    HorizonMismatch,
    DegenerateMean,
    Overflow,
    QuadratureFailure,
    StepUnderflow,
    DomainEscape,
    CapExceeded,
    EnvelopeViolation,
    NoSurvivors,
    TooFewSamples,
    TooFewPoints,
    ConfigInvalid,
    EngineError,
};

const char* to_string(ErrorCode code);

/// Single exception type for the whole library; `code()` identifies the failure class.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

} // namespace crit
