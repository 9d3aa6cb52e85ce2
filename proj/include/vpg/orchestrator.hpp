#pragma once

// Request -> script pipeline: retrieve component docs, assemble the prompt,
// ask a provider, extract and validate the script, retry with feedback.

#include "vpg/registry.hpp"
#include "vpg/script.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vpg {

struct Message {
    std::string role;  // system | user | assistant
    std::string content;
    friend bool operator==(const Message&, const Message&) = default;
};

struct FewShotPair {
    std::string request;
    std::string script;
};

// The four examples shipped in data/fewshot, compiled in.
const std::vector<FewShotPair>& builtin_examples();

// Fixed Markdown instructions (identity, output rules, reference-file use,
// scripting standards, layout/display, forbidden actions, examples note).
const std::string& system_instructions();

struct PromptConfig {
    std::size_t budget_tokens = 16000;
    int k = 8;  // retrieved chunks
};

struct PromptBundle {
    std::string system;
    std::vector<FewShotPair> examples;
    std::vector<DocChunk> context;  // rank order
    std::string request;

    // system, example pairs (user/assistant), retrieved context, request
    std::vector<Message> messages() const;
    std::size_t token_estimate() const;
};

std::vector<DocChunk> retrieve_context(std::string_view request, const SearchIndex& index, int k);

// Drops retrieved chunks from the lowest rank up until the bundle fits.
// BudgetExceeded if system text, examples and request alone do not fit.
PromptBundle assemble_prompt(std::string_view request, std::vector<DocChunk> context,
                             const std::vector<FewShotPair>& examples, const PromptConfig& config);

// Body of the first fenced code block, else the trimmed response.
// EmptyResponse when nothing but whitespace is left.
std::string extract_script(std::string_view response);

// Lowercase hex SHA-256 of the serialized message list.
std::string prompt_hash(const std::vector<Message>& messages);

// Parse, validate, execute and (optionally) evaluate a script. `graph` is
// set only when there are no error diagnostics; execute and evaluation
// failures are reported as diagnostics on the offending line.
struct BuildResult {
    std::vector<script::Diagnostic> diagnostics;
    std::shared_ptr<WorkflowGraph> graph;
};
BuildResult build_workflow(std::string_view text, std::shared_ptr<const Registry> registry = builtin_registry(),
                           bool evaluate = true);

// ---------------------------------------------------------------- providers

class Provider {
public:
    virtual ~Provider() = default;
    // Throws Error(ProviderError) on transport failures.
    virtual std::string complete(const std::vector<Message>& messages) = 0;
};

struct ProviderConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4.1";
    std::string api_key_env = "OPENAI_API_KEY";
    double temperature = 0.2;
    double timeout_s = 120;
    int max_attempts = 3;
};

// Unknown keys are rejected; missing keys keep their defaults.
ProviderConfig provider_config_from_json(std::string_view text);
std::string provider_config_to_json(const ProviderConfig& config);

// Chat-completions style POST: {model, temperature, messages:[{role,content}]}
// with a bearer token read from the configured environment variable; the
// reply text is choices[0].message.content.
class HttpProvider final : public Provider {
public:
    explicit HttpProvider(ProviderConfig config);
    std::string complete(const std::vector<Message>& messages) override;

private:
    ProviderConfig config_;
};

struct TranscriptEntry {
    std::string prompt_hash;
    std::string response;
    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// JSON array of {prompt_hash, response}. Extra keys on entries are ignored
// by the replay provider; the first entry may carry "request" and "case"
// so a fixture is self-describing.
struct Transcript {
    std::vector<TranscriptEntry> entries;
    std::optional<std::string> request;
    std::optional<std::string> case_name;
};
Transcript parse_transcript(std::string_view json_text);
std::string transcript_to_json(const Transcript& transcript);
Transcript load_transcript(const std::filesystem::path& path);

// Serves responses in order. TranscriptMismatch if the prompt hash differs
// from the recorded one, TranscriptExhausted when responses run out.
class ReplayProvider final : public Provider {
public:
    explicit ReplayProvider(Transcript transcript);
    std::string complete(const std::vector<Message>& messages) override;
    std::size_t consumed() const { return next_; }

private:
    Transcript transcript_;
    std::size_t next_ = 0;
};

// Wraps another provider and keeps (hash, response) pairs.
class RecordingProvider final : public Provider {
public:
    explicit RecordingProvider(Provider& inner) : inner_(inner) {}
    std::string complete(const std::vector<Message>& messages) override;
    const Transcript& transcript() const { return transcript_; }
    Transcript& transcript() { return transcript_; }

private:
    Provider& inner_;
    Transcript transcript_;
};

// Fixed list of responses, no hash checks; used to author fixtures.
class ScriptedProvider final : public Provider {
public:
    explicit ScriptedProvider(std::vector<std::string> responses) : responses_(std::move(responses)) {}
    std::string complete(const std::vector<Message>& messages) override;

private:
    std::vector<std::string> responses_;
    std::size_t next_ = 0;
};

// ---------------------------------------------------------------- generation

enum class FeedbackMode { Diagnostics, None };
enum class RetryContext { Conversation, Fresh };

// Extra check on an evaluated graph (e.g. a geometric oracle). Returned
// diagnostics reject the attempt and are fed back like validation errors.
using AcceptanceCheck = std::function<std::vector<script::Diagnostic>(const WorkflowGraph&)>;

struct GenerationConfig {
    int max_attempts = 3;
    FeedbackMode feedback = FeedbackMode::Diagnostics;
    RetryContext retry_context = RetryContext::Conversation;
    PromptConfig prompt;
    std::optional<std::vector<FewShotPair>> examples;  // default: builtin_examples()
    AcceptanceCheck acceptance;
};

struct Attempt {
    int index = 0;  // 1-based
    std::string prompt_hash;
    std::string response;
    std::string script;
    std::vector<script::Diagnostic> diagnostics;
    std::shared_ptr<const WorkflowGraph> graph;  // set when the attempt built and evaluated
    bool accepted = false;
    std::chrono::duration<double> wall_time{0};
};

enum class GenerationStatus { Success, Exhausted };

struct GenerationOutcome {
    GenerationStatus status = GenerationStatus::Exhausted;
    std::vector<Attempt> attempts;
    std::shared_ptr<const WorkflowGraph> graph;  // last attempt's graph on success
    PromptBundle prompt;
};

std::string_view to_string(GenerationStatus s);

// The user message sent after a rejected attempt.
std::string feedback_message(const Attempt& attempt, FeedbackMode mode);

// Provider errors propagate as Error(ProviderError) with "attempt N: " in
// the message; an exhausted budget is a status, not an exception.
GenerationOutcome generate_workflow(std::string_view request, Provider& provider,
                                    std::shared_ptr<const Registry> registry, const GenerationConfig& config = {});

// Deterministic JSON form (no timings unless asked).
std::string outcome_to_json(const GenerationOutcome& outcome, bool with_timing = false);

} // namespace vpg
