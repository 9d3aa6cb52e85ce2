#include "vpg/orchestrator.hpp"

#include <json.hpp>

#include <map>

namespace vpg {

using script::Diagnostic;
using script::Severity;

namespace {

Diagnostic diagnostic_from(const Error& e, int line) {
    return {Severity::Error, e.code(), e.what(), {line, 1}, e.subject()};
}

// "line N: ..." prefix written by script::execute
int line_of(const std::string& message) {
    if (message.rfind("line ", 0) == 0) {
        return std::atoi(message.c_str() + 5);
    }
    return 1;
}

void check_attempt(Attempt& a, const std::shared_ptr<const Registry>& registry, const AcceptanceCheck& acceptance) {
    try {
        a.script = extract_script(a.response);
    } catch (const Error& e) {
        a.diagnostics.push_back(diagnostic_from(e, 1));
        return;
    }
    auto built = build_workflow(a.script, registry);
    a.diagnostics = std::move(built.diagnostics);
    if (!built.graph || !built.graph->evaluated()) {
        return;
    }
    a.graph = built.graph;
    if (acceptance) {
        auto extra = acceptance(*a.graph);
        if (!extra.empty()) {
            a.diagnostics.insert(a.diagnostics.end(), extra.begin(), extra.end());
            return;
        }
    }
    a.accepted = true;
}

} // namespace

BuildResult build_workflow(std::string_view text, std::shared_ptr<const Registry> registry, bool evaluate) {
    BuildResult out;
    auto parsed = script::parse_script(text);
    if (!parsed.ok()) {
        out.diagnostics = std::move(parsed.diagnostics);
        return out;
    }
    out.diagnostics = script::validate(parsed.ast, *registry);
    if (script::has_errors(out.diagnostics)) {
        return out;
    }

    std::map<std::string, int, std::less<>> declared;
    for (const auto& s : parsed.ast.statements) {
        if (const auto* add = std::get_if<script::AddStmt>(&s)) {
            declared.emplace(add->node_id, add->loc.line);
        }
    }
    auto graph = std::make_shared<WorkflowGraph>(registry);
    try {
        *graph = script::execute(parsed.ast, registry);
    } catch (const Error& e) {
        out.diagnostics.push_back(diagnostic_from(e, line_of(e.what())));
        return out;
    }
    if (evaluate) {
        try {
            graph->evaluate();
        } catch (const Error& e) {
            const auto it = declared.find(e.subject());
            out.diagnostics.push_back(diagnostic_from(e, it == declared.end() ? 1 : it->second));
            return out;
        }
    }
    out.graph = std::move(graph);
    return out;
}

std::string_view to_string(GenerationStatus s) { return s == GenerationStatus::Success ? "success" : "exhausted"; }

std::string feedback_message(const Attempt& attempt, FeedbackMode mode) {
    if (mode == FeedbackMode::None) {
        return "Attempt " + std::to_string(attempt.index) +
               " did not produce a working workflow. Answer again with the complete script in one fenced block.";
    }
    std::string out = "Attempt " + std::to_string(attempt.index) + " was rejected.\n\nDiagnostics:\n";
    for (const auto& d : attempt.diagnostics) {
        out += "- " + script::format_diagnostic(d) + "\n";
    }
    out += "\nPrevious script:\n```gfs\n" + attempt.script;
    if (!attempt.script.empty() && attempt.script.back() != '\n') {
        out += "\n";
    }
    out += "```\n\nFix every diagnostic and answer with the complete corrected script in one fenced block.";
    return out;
}

GenerationOutcome generate_workflow(std::string_view request, Provider& provider,
                                    std::shared_ptr<const Registry> registry, const GenerationConfig& config) {
    if (config.max_attempts < 1) {
        throw Error(Errc::InvalidArgument, "max_attempts must be at least 1");
    }
    GenerationOutcome outcome;
    const SearchIndex index(*registry);
    outcome.prompt = assemble_prompt(request, retrieve_context(request, index, config.prompt.k),
                                     config.examples.value_or(builtin_examples()), config.prompt);
    const std::vector<Message> base = outcome.prompt.messages();
    std::vector<Message> conversation = base;

    for (int n = 1; n <= config.max_attempts; ++n) {
        std::vector<Message> messages = conversation;
        if (n > 1 && config.retry_context == RetryContext::Fresh) {
            messages = base;
            messages.push_back({"user", feedback_message(outcome.attempts.back(), config.feedback)});
        }

        Attempt a;
        a.index = n;
        a.prompt_hash = prompt_hash(messages);
        const auto start = std::chrono::steady_clock::now();
        try {
            a.response = provider.complete(messages);
        } catch (const Error& e) {
            throw Error(e.code(), "attempt " + std::to_string(n) + ": " + e.what(), e.subject());
        }
        check_attempt(a, registry, config.acceptance);
        a.wall_time = std::chrono::steady_clock::now() - start;
        outcome.attempts.push_back(a);

        if (a.accepted) {
            outcome.status = GenerationStatus::Success;
            outcome.graph = a.graph;
            return outcome;
        }
        conversation = messages;
        conversation.push_back({"assistant", a.response});
        conversation.push_back({"user", feedback_message(a, config.feedback)});
    }
    outcome.status = GenerationStatus::Exhausted;
    return outcome;
}

std::string outcome_to_json(const GenerationOutcome& outcome, bool with_timing) {
    using nlohmann::json;
    json j{{"status", to_string(outcome.status)}, {"attempts", json::array()}};
    for (const auto& a : outcome.attempts) {
        json ja{{"index", a.index},       {"prompt_hash", a.prompt_hash}, {"response", a.response},
                {"script", a.script},     {"accepted", a.accepted},       {"evaluated", a.graph != nullptr},
                {"diagnostics", json::array()}};
        for (const auto& d : a.diagnostics) {
            ja["diagnostics"].push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                                         {"code", to_string(d.code)},
                                         {"line", d.loc.line},
                                         {"column", d.loc.column},
                                         {"message", d.message},
                                         {"subject", d.subject}});
        }
        if (with_timing) {
            ja["wall_time_s"] = a.wall_time.count();
        }
        j["attempts"].push_back(std::move(ja));
    }
    return j.dump(2) + "\n";
}

} // namespace vpg
