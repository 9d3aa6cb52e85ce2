#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vpg {

// Stable error and diagnostic codes. The names returned by to_string() are
// part of the wire format (retry feedback, HTTP bodies, transcripts).
enum class Errc {
    // script / graph structure
    ParseError,
    UnknownComponent,
    UnknownNode,
    UnknownPort,
    SliderMisuse,
    KindMismatch,
    CycleCreated,
    InputOccupied,
    MissingRequiredInput,
    DuplicateNodeId,
    BadLiteral,
    PortNameMismatch,
    // parameters
    NotStateful,
    UnknownField,
    // evaluation
    NotEvaluated,
    EvaluationError,
    UnboundVariable,
    // orchestration
    EmptyQuery,
    EmptyResponse,
    BudgetExceeded,
    ProviderError,
    TranscriptMismatch,
    TranscriptExhausted,
    OracleMismatch,
    // persistence
    UnsupportedVersion,
    MalformedDocument,
    InvalidArgument,
};

std::string_view to_string(Errc code);

// Single exception type for the non-geometry modules. `subject` names the
// offending identifier (node id, type id, field) when there is one.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::string subject = {})
        : std::runtime_error(std::move(message)), code_(code), subject_(std::move(subject)) {}

    Errc code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    Errc code_;
    std::string subject_;
};

} // namespace vpg
