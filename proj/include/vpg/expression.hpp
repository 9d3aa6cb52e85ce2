#pragma once

// Arithmetic expressions for the maths.expression component.
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary [ "^" unary ]        (right-associative)
//   primary := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
//
// Functions: sin cos tan sqrt abs floor. `pi` is a constant.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vpg::expr {

enum class Op { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Call };

struct Node {
    Op op = Op::Number;
    double number = 0;      // Number
    std::string name;       // Variable, Call
    std::vector<std::shared_ptr<const Node>> args;
};

using Bindings = std::map<std::string, double, std::less<>>;

class Expression {
public:
    // Throws Error(ParseError) with the column of the offending character.
    static Expression parse(std::string_view text);

    // Throws Error(UnboundVariable) for a free variable missing from
    // `bindings`, Error(EvaluationError) on division by zero, a domain error
    // or a non-finite result.
    double evaluate(const Bindings& bindings) const;

    std::set<std::string> variables() const;
    const Node& root() const { return *root_; }
    // Fully parenthesized form; parses back to the same tree.
    std::string to_string() const;

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

bool is_function(std::string_view name);

} // namespace vpg::expr
