#include "vpg/script.hpp"

#include <algorithm>

namespace vpg::script {

namespace {

bool same(const PortAddr& a, const PortAddr& b) { return a.node == b.node && a.port == b.port && a.name == b.name; }

bool same(const Statement& a, const Statement& b) {
    if (a.index() != b.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b);
            if constexpr (std::is_same_v<T, AddStmt>) {
                return x.type_id == y.type_id && x.node_id == y.node_id && x.at == y.at &&
                       std::equal(x.block.begin(), x.block.end(), y.block.begin(), y.block.end(),
                                  [](const BlockEntry& p, const BlockEntry& q) { return p.key == q.key && p.value == q.value; });
            } else if constexpr (std::is_same_v<T, ConnectStmt>) {
                return same(x.from, y.from) && same(x.to, y.to);
            } else if constexpr (std::is_same_v<T, AssignStmt>) {
                return same(x.target, y.target) && x.value == y.value;
            } else if constexpr (std::is_same_v<T, PreviewStmt>) {
                return x.node == y.node && x.show == y.show;
            } else {
                return true;
            }
        },
        a);
}

std::string port_text(const PortAddr& p) {
    std::string s = p.node + "." + std::to_string(p.port);
    if (p.name) {
        s += ":" + *p.name;
    }
    return s;
}

} // namespace

Location location_of(const Statement& s) {
    return std::visit([](const auto& x) { return x.loc; }, s);
}

bool same_structure(const Ast& a, const Ast& b) {
    return std::equal(a.statements.begin(), a.statements.end(), b.statements.begin(), b.statements.end(),
                      [](const Statement& x, const Statement& y) { return same(x, y); });
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_diagnostic(const Diagnostic& d) {
    return "line " + std::to_string(d.loc.line) + ", column " + std::to_string(d.loc.column) + ": " +
           (d.severity == Severity::Error ? "error " : "warning ") + std::string(to_string(d.code)) + ": " + d.message;
}

std::string print_script(const Ast& ast) {
    std::string out;
    for (const Statement& s : ast.statements) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, AddStmt>) {
                    out += "add " + x.type_id + " " + x.node_id;
                    if (x.at) {
                        out += " at (" + format_number(x.at->x) + ", " + format_number(x.at->y) + ")";
                    }
                    if (!x.block.empty()) {
                        out += " {";
                        for (std::size_t i = 0; i < x.block.size(); ++i) {
                            out += (i ? ", " : " ") + x.block[i].key + ": " + format_literal(x.block[i].value);
                        }
                        out += " }";
                    }
                } else if constexpr (std::is_same_v<T, ConnectStmt>) {
                    out += "connect " + port_text(x.from) + " -> " + port_text(x.to);
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    out += "set " + port_text(x.target) + " = " + format_literal(x.value);
                } else if constexpr (std::is_same_v<T, PreviewStmt>) {
                    out += (x.show ? "show " : "hide ") + x.node;
                } else {
                    out += "layout auto";
                }
            },
            s);
        out += "\n";
    }
    return out;
}

} // namespace vpg::script
