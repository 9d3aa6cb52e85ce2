#include "vpg/error.hpp"

namespace vpg {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownComponent: return "UnknownComponent";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownPort: return "UnknownPort";
    case Errc::SliderMisuse: return "SliderMisuse";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::CycleCreated: return "CycleCreated";
    case Errc::InputOccupied: return "InputOccupied";
    case Errc::MissingRequiredInput: return "MissingRequiredInput";
    case Errc::DuplicateNodeId: return "DuplicateNodeId";
    case Errc::BadLiteral: return "BadLiteral";
    case Errc::PortNameMismatch: return "PortNameMismatch";
    case Errc::NotStateful: return "NotStateful";
    case Errc::UnknownField: return "UnknownField";
    case Errc::NotEvaluated: return "NotEvaluated";
    case Errc::EvaluationError: return "EvaluationError";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::EmptyQuery: return "EmptyQuery";
    case Errc::EmptyResponse: return "EmptyResponse";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ProviderError: return "ProviderError";
    case Errc::TranscriptMismatch: return "TranscriptMismatch";
    case Errc::TranscriptExhausted: return "TranscriptExhausted";
    case Errc::OracleMismatch: return "OracleMismatch";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::MalformedDocument: return "MalformedDocument";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace vpg
