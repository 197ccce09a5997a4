#include "crit/errors.hpp"

namespace crit {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NegativeMass: return "NegativeMass";
        case ErrorCode::MassNotOne: return "MassNotOne";
        case ErrorCode::SupportTooLarge: return "SupportTooLarge";
        case ErrorCode::EvaluationError: return "EvaluationError";
        case ErrorCode::NegativeRate: return "NegativeRate";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorCode::HorizonMismatch: return "HorizonMismatch";
        case ErrorCode::DegenerateMean: return "DegenerateMean";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::DomainEscape: return "DomainEscape";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::EnvelopeViolation: return "EnvelopeViolation";
        case ErrorCode::NoSurvivors: return "NoSurvivors";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::EngineError: return "EngineError";
    }
    return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

} // namespace crit
