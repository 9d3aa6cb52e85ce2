#pragma once

// Workflow-construction language (.gfs):
//
//   add curve.circle c at (240, 0) { 1: 20 }
//   add params.number_slider r { min: 2, max: 20, value: 20, decimals: 0 }
//   connect r.0:value -> c.1:radius
//   set c.0 = plane.xy
//   show c
//   layout auto
//
// One statement per line (an `add` block may span lines); `#` starts a
// comment. Ports are addressed by index; the `:name` suffix is checked
// against the port name and only warns on mismatch.

#include "vpg/error.hpp"
#include "vpg/graph.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace vpg::script {

struct Location {
    int line = 0;
    int column = 0;
};

struct PortAddr {
    std::string node;
    int port = 0;
    std::optional<std::string> name;
    Location loc;
};

struct BlockEntry {
    std::string key;  // state field name, or input index digits
    Literal value;
    Location loc;

    bool is_input() const;
    int input_index() const;  // valid only if is_input()
};

struct AddStmt {
    std::string type_id;
    std::string node_id;
    std::optional<Position> at;
    std::vector<BlockEntry> block;
    Location loc;
    Location type_loc;
    Location id_loc;
};

struct ConnectStmt {
    PortAddr from;
    PortAddr to;
    Location loc;
};

struct AssignStmt {
    PortAddr target;
    Literal value;
    Location loc;
};

struct PreviewStmt {
    std::string node;
    bool show = true;
    Location loc;
};

struct LayoutStmt {
    Location loc;
};

using Statement = std::variant<AddStmt, ConnectStmt, AssignStmt, PreviewStmt, LayoutStmt>;

struct Ast {
    std::vector<Statement> statements;
};

Location location_of(const Statement& s);

// Equality of everything except source locations.
bool same_structure(const Ast& a, const Ast& b);

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    Errc code = Errc::ParseError;
    std::string message;
    Location loc;
    std::string subject;  // offending identifier
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);
// "line 3, column 5: error UnknownComponent: ..."
std::string format_diagnostic(const Diagnostic& d);

struct ParseResult {
    Ast ast;
    std::vector<Diagnostic> diagnostics;  // ParseError only
    bool ok() const { return diagnostics.empty(); }
};

// Collects every parse error (recovering at the next line). The AST is only
// meaningful when ok().
ParseResult parse_script(std::string_view text);

// Canonical source text; parse_script(print_script(a)) is structurally a.
std::string print_script(const Ast& ast);

// Static checks without building a graph. MissingRequiredInput is reported
// only when nothing else is wrong, since an earlier error usually leaves
// inputs unbound. No errors means execute() cannot fail structurally.
std::vector<Diagnostic> validate(const Ast& ast, const Registry& registry);

// Replays the statements through the graph API. Auto-layout runs when no
// `add` has an `at` clause or a `layout auto` statement is present; nodes
// without `at` otherwise get their auto-layout position. Throws vpg::Error
// with the message prefixed by "line N: ".
WorkflowGraph execute(const Ast& ast, std::shared_ptr<const Registry> registry = builtin_registry());

} // namespace vpg::script
