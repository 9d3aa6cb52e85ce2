#include "vpg/orchestrator.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>

namespace vpg {

namespace {

const char* const kInstructions = R"(# Identity

You are a workflow author for a node-based parametric modeling engine. A user
describes a model in plain language; you answer with a script that builds the
visual program (components, wires, slider parameters) which produces it. Your
knowledge of components comes from the component reference attached to this
conversation.

# Workflow and output requirements

- Answer with exactly one fenced code block (```gfs ... ```) holding the complete
  script. Text outside the block is ignored.
- The script must run as is: every component it uses is declared with `add`
  before it is wired, set or shown.
- Every quantity the user wants to control becomes a slider with the requested
  min, max, default and number of decimals. Whole-number counts use
  params.integer_slider.

# Reference file usage

- Take component type ids, port indices, port kinds and defaults only from the
  component reference. Do not invent ids from memory.
- Type ids are written exactly as listed, namespace included
  (`surface.extrude`, never `extrude` or `surface.Component_Extrude`). A wrong
  or shortened id is the most common reason a script is rejected.
- Inputs marked optional, or with a default value, may be left unconnected.
  Every other input must be wired or set.

# Component creation and scripting standards

    add <type_id> <node_id> [at (x, y)] [{ key: value, ... }]
    connect <node>.<output index>[:name] -> <node>.<input index>[:name]
    set <node>.<input index> = <literal>
    show <node> | hide <node>
    layout auto

- In an `add` block, digit keys give input literals (`{ 1: 20 }`) and
  identifiers give slider state (`{ min: 2, max: 20, value: 20, decimals: 0 }`).
- Literals: numbers, true/false, "text", (x, y, z), plane.xy | plane.yz | plane.xz.
- Sliders have no inputs. They are only ever a source: `connect s.0 -> c.1`.
  Never connect into a slider and never `set` one; change its block instead.
- Port indices start at 0. The optional `:name` after an index is checked
  against the port name.
- Lists: a Series output feeding an item input makes the component run once
  per item; shorter lists repeat their last item.
- maths.expression evaluates its text input in x, y and z
  (+ - * / ^, sin cos tan sqrt abs floor, pi).
- Use `#` comments to explain each step.

# Canvas layout and display rules

- Either give every component an `at (x, y)` with x growing along the data
  flow (about 240 per step) and y separating parallel branches (about 120),
  or end the script with `layout auto`.
- `hide` intermediate geometry; `show` only the final result the user asked for.

# Forbidden actions

- No statements outside the five forms above: no loops, functions, imports,
  variables or host-application calls.
- No component that is not in the component reference.
- No wires into sliders, no cycles, no second wire into the same input.

# Examples

The example requests and scripts that follow show the expected pattern:
sliders first, then geometry, then transforms and analysis, with comments.
Reuse their structure and syntax for new requests; do not copy their
parameters.
)";

} // namespace

const std::string& system_instructions() {
    static const std::string text = kInstructions;
    return text;
}

std::vector<Message> PromptBundle::messages() const {
    std::vector<Message> out;
    out.push_back({"system", system});
    for (const auto& ex : examples) {
        out.push_back({"user", ex.request});
        out.push_back({"assistant", "```gfs\n" + ex.script + "```"});
    }
    if (!context.empty()) {
        std::string ref = "# Component reference\n";
        for (const auto& c : context) {
            ref += "\n" + c.text;
        }
        out.push_back({"system", std::move(ref)});
    }
    out.push_back({"user", request});
    return out;
}

std::size_t PromptBundle::token_estimate() const {
    std::size_t n = 0;
    for (const auto& m : messages()) {
        n += estimate_tokens(m.content);
    }
    return n;
}

std::vector<DocChunk> retrieve_context(std::string_view request, const SearchIndex& index, int k) {
    std::vector<DocChunk> out;
    for (auto& hit : index.search(request, k)) {
        out.push_back(std::move(hit.chunk));
    }
    return out;
}

PromptBundle assemble_prompt(std::string_view request, std::vector<DocChunk> context,
                             const std::vector<FewShotPair>& examples, const PromptConfig& config) {
    PromptBundle b;
    b.system = system_instructions();
    b.examples = examples;
    b.request = std::string(request);
    const std::size_t fixed = b.token_estimate();
    if (fixed > config.budget_tokens) {
        throw Error(Errc::BudgetExceeded,
                    "instructions, examples and request need about " + std::to_string(fixed) +
                        " tokens; the budget is " + std::to_string(config.budget_tokens));
    }
    b.context = std::move(context);
    while (!b.context.empty() && b.token_estimate() > config.budget_tokens) {
        b.context.pop_back();
    }
    return b;
}

std::string extract_script(std::string_view response) {
    const auto trim = [](std::string_view s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string_view::npos) {
            return std::string{};
        }
        const auto z = s.find_last_not_of(" \t\r\n");
        return std::string(s.substr(a, z - a + 1));
    };

    std::size_t open = response.find("```");
    if (open != std::string_view::npos) {
        const std::size_t body = response.find('\n', open);
        if (body != std::string_view::npos) {
            const std::size_t close = response.find("```", body + 1);
            std::string_view inner = response.substr(body + 1, close == std::string_view::npos
                                                                    ? std::string_view::npos
                                                                    : close - body - 1);
            if (!trim(inner).empty()) {
                std::string s(inner);
                if (!s.empty() && s.back() != '\n') {
                    s += '\n';
                }
                return s;
            }
        }
    }
    std::string whole = trim(response);
    if (whole.empty()) {
        throw Error(Errc::EmptyResponse, "model response is empty");
    }
    return whole;
}

std::string prompt_hash(const std::vector<Message>& messages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : messages) {
        arr.push_back({{"role", m.role}, {"content", m.content}});
    }
    const std::string bytes = arr.dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

} // namespace vpg
