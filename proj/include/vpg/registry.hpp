#pragma once

// Component catalog: descriptors for every component the engine can run,
// the unified documentation format, and the retrieval index over it.

#include "vpg/value.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vpg {

// How many items one evaluation of the component consumes from a port.
// `Tree` ports receive the whole data tree at once (Flatten Tree).
enum class Access { Item, List, Tree };

std::string_view to_string(Access a);
std::optional<Access> access_from_string(std::string_view s);

struct PortDescriptor {
    int index = 0;
    std::string name;
    std::string description;
    ValueKind kind = ValueKind::Any;
    Access access = Access::Item;
    // inputs only
    bool optional = false;
    std::optional<Literal> default_value;
    // outputs only
    std::string data_structure_note;

    // Must be wired or literal-assigned before evaluation.
    bool required() const { return !optional && !default_value; }

    friend bool operator==(const PortDescriptor&, const PortDescriptor&) = default;
};

struct StateField {
    std::string name;
    double default_value = 0;
    friend bool operator==(const StateField&, const StateField&) = default;
};

struct ComponentDescriptor {
    std::string type_id;  // namespaced, e.g. "curve.circle"
    std::string name;
    std::string nickname;
    std::string category;
    std::string description;
    bool default_preview = false;
    std::vector<PortDescriptor> inputs;
    std::vector<PortDescriptor> outputs;
    std::vector<StateField> state_schema;

    bool stateful() const { return !state_schema.empty(); }
    // 0-input stateful source (number / integer slider).
    bool is_slider() const { return stateful() && inputs.empty(); }
    const StateField* state_field(std::string_view field) const;

    friend bool operator==(const ComponentDescriptor&, const ComponentDescriptor&) = default;
};

// Immutable after construction; ordered by type_id.
class Registry {
public:
    Registry() = default;
    // Throws Error(InvalidArgument) on a descriptor that violates the
    // catalog invariants (duplicate id, non-contiguous port indices, ...).
    explicit Registry(std::vector<ComponentDescriptor> descriptors);

    const ComponentDescriptor* find(std::string_view type_id) const;
    const std::vector<ComponentDescriptor>& all() const { return descriptors_; }
    std::size_t size() const { return descriptors_.size(); }

private:
    std::vector<ComponentDescriptor> descriptors_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

// The stock catalog, covering params, curve, transform, sets, vector,
// maths, surface and analysis components.
std::shared_ptr<const Registry> builtin_registry();

// ---------------------------------------------------------------- docs

// One Markdown record for a component: metadata, then indexed inputs, then
// indexed outputs.
std::string render_record(const ComponentDescriptor& d);
std::string export_docs(const Registry& registry);
// Inverse of export_docs. Throws Error(MalformedDocument) with a line number.
std::vector<ComponentDescriptor> parse_docs(std::string_view markdown);

// Machine-readable catalog: a JSON array, one object per component.
std::string export_catalog_json(const Registry& registry);

// ---------------------------------------------------------------- retrieval

struct DocChunk {
    std::string type_id;
    std::string text;
    std::size_t token_estimate = 0;
};

std::size_t estimate_tokens(std::string_view text);

// Lowercased alphanumeric tokens with stopwords removed.
std::vector<std::string> tokenize(std::string_view text);

struct IndexedDoc {
    DocChunk chunk;
    // term -> weighted frequency
    std::map<std::string, double, std::less<>> terms;
};

class Scorer {
public:
    virtual ~Scorer() = default;
    virtual double score(const IndexedDoc& doc, const std::vector<std::string>& query_terms) const = 0;
};

// Weighted term frequency: name and nickname tokens count 3, category,
// description and port-name tokens count 1.
class LexicalScorer final : public Scorer {
public:
    double score(const IndexedDoc& doc, const std::vector<std::string>& query_terms) const override;
};

struct SearchHit {
    DocChunk chunk;
    double score = 0;
};

class SearchIndex {
public:
    explicit SearchIndex(const Registry& registry, std::shared_ptr<const Scorer> scorer = nullptr);

    // Top-k by score, ties by type_id. Throws Error(EmptyQuery) for a query
    // with no characters and Error(InvalidArgument) for k < 1.
    std::vector<SearchHit> search(std::string_view query, int k) const;
    std::size_t size() const { return docs_.size(); }

private:
    std::vector<IndexedDoc> docs_;
    std::shared_ptr<const Scorer> scorer_;
};

} // namespace vpg
