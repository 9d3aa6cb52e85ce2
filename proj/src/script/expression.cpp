#include "vpg/expression.hpp"

#include "vpg/error.hpp"
#include "vpg/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace vpg::expr {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, std::vector<NodePtr> args = {}) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = std::move(args);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_space();
        if (pos_ < text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (accept('+')) {
                lhs = make(Op::Add, {lhs, term()});
            } else if (accept('-')) {
                lhs = make(Op::Subtract, {lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (accept('*')) {
                lhs = make(Op::Multiply, {lhs, unary()});
            } else if (accept('/')) {
                lhs = make(Op::Divide, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            return make(Op::Negate, {unary()});
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) {
            return make(Op::Power, {base, unary()});
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (accept('(')) {
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            std::string name(text_.substr(start, pos_ - start));
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                if (!is_function(name)) {
                    pos_ = start;
                    fail("unknown function '" + name + "'");
                }
                ++pos_;
                auto call = std::make_shared<Node>();
                call->op = Op::Call;
                call->name = std::move(name);
                call->args.push_back(expr());
                expect(')');
                return call;
            }
            if (name == "pi") {
                auto n = std::make_shared<Node>();
                n->number = std::numbers::pi;
                n->name = "pi";
                return n;
            }
            auto var = std::make_shared<Node>();
            var->op = Op::Variable;
            var->name = std::move(name);
            return var;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            const std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = mark;  // `2e` is 2 followed by identifier e
            } else {
                digits();
            }
        }
        double v = 0;
        const auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc{} || end != text_.data() + pos_ || !std::isfinite(v)) {
            pos_ = start;
            fail("malformed number");
        }
        auto n = std::make_shared<Node>();
        n->number = v;
        return n;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::ParseError, "column " + std::to_string(pos_ + 1) + ": " + what, std::string(text_));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw Error(Errc::EvaluationError, std::string(what) + " is not finite");
    }
    return v;
}

double eval(const Node& n, const Bindings& b) {
    switch (n.op) {
    case Op::Number:
        return n.number;
    case Op::Variable: {
        const auto it = b.find(n.name);
        if (it == b.end()) {
            throw Error(Errc::UnboundVariable, "unbound variable '" + n.name + "'", n.name);
        }
        return it->second;
    }
    case Op::Negate:
        return -eval(*n.args[0], b);
    case Op::Add:
        return checked(eval(*n.args[0], b) + eval(*n.args[1], b), "sum");
    case Op::Subtract:
        return checked(eval(*n.args[0], b) - eval(*n.args[1], b), "difference");
    case Op::Multiply:
        return checked(eval(*n.args[0], b) * eval(*n.args[1], b), "product");
    case Op::Divide: {
        const double num = eval(*n.args[0], b);
        const double den = eval(*n.args[1], b);
        if (den == 0) {
            throw Error(Errc::EvaluationError, "division by zero");
        }
        return checked(num / den, "quotient");
    }
    case Op::Power: {
        const double base = eval(*n.args[0], b);
        const double exp = eval(*n.args[1], b);
        if (base == 0 && exp < 0) {
            throw Error(Errc::EvaluationError, "zero raised to a negative power");
        }
        if (base < 0 && exp != std::floor(exp)) {
            throw Error(Errc::EvaluationError, "negative base with a fractional exponent");
        }
        return checked(std::pow(base, exp), "power");
    }
    case Op::Call: {
        const double a = eval(*n.args[0], b);
        if (n.name == "sin") {
            return std::sin(a);
        }
        if (n.name == "cos") {
            return std::cos(a);
        }
        if (n.name == "tan") {
            return checked(std::tan(a), "tan");
        }
        if (n.name == "sqrt") {
            if (a < 0) {
                throw Error(Errc::EvaluationError, "sqrt of a negative number");
            }
            return std::sqrt(a);
        }
        if (n.name == "abs") {
            return std::abs(a);
        }
        return std::floor(a);
    }
    }
    throw Error(Errc::EvaluationError, "corrupt expression tree");
}

void collect(const Node& n, std::set<std::string>& out) {
    if (n.op == Op::Variable) {
        out.insert(n.name);
    }
    for (const auto& a : n.args) {
        collect(*a, out);
    }
}

std::string print(const Node& n) {
    switch (n.op) {
    case Op::Number:
        return n.name == "pi" ? "pi" : format_number(n.number);
    case Op::Variable:
        return n.name;
    case Op::Negate:
        return "(-" + print(*n.args[0]) + ")";
    case Op::Call:
        return n.name + "(" + print(*n.args[0]) + ")";
    default:
        break;
    }
    static constexpr const char* symbols[] = {"", "", "", "+", "-", "*", "/", "^"};
    return "(" + print(*n.args[0]) + " " + symbols[static_cast<int>(n.op)] + " " + print(*n.args[1]) + ")";
}

} // namespace

bool is_function(std::string_view name) {
    return name == "sin" || name == "cos" || name == "tan" || name == "sqrt" || name == "abs" || name == "floor";
}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

double Expression::evaluate(const Bindings& bindings) const { return checked(eval(*root_, bindings), "result"); }

std::set<std::string> Expression::variables() const {
    std::set<std::string> out;
    collect(*root_, out);
    return out;
}

std::string Expression::to_string() const { return print(*root_); }

} // namespace vpg::expr
