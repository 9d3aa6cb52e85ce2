#include "vpg/script.hpp"

#include <cctype>
#include <charconv>

namespace vpg::script {

namespace {

enum class Tok { Ident, Number, String, Punct, Arrow, Minus, Newline, End, Invalid };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier, number text, decoded string, punctuation char
    Location loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::End) {
                return out;
            }
        }
    }

private:
    Token next() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else {
                break;
            }
        }
        Token t;
        t.loc = {line_, col_};
        if (pos_ >= src_.size()) {
            t.kind = Tok::End;
            return t;
        }
        const char c = src_[pos_];
        const auto uc = static_cast<unsigned char>(c);
        if (c == '\n') {
            advance();
            t.kind = Tok::Newline;
            return t;
        }
        if (std::isalpha(uc) || c == '_') {
            t.kind = Tok::Ident;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                t.text += src_[pos_];
                advance();
            }
            return t;
        }
        if (std::isdigit(uc)) {
            t.kind = Tok::Number;
            digits(t.text);
            if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                t.text += '.';
                advance();
                digits(t.text);
            }
            if ((peek(0) == 'e' || peek(0) == 'E') &&
                (std::isdigit(static_cast<unsigned char>(peek(1))) ||
                 ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
                t.text += src_[pos_];
                advance();
                if (!std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    t.text += src_[pos_];
                    advance();
                }
                digits(t.text);
            }
            return t;
        }
        if (c == '"') {
            advance();
            t.kind = Tok::String;
            while (true) {
                if (pos_ >= src_.size() || src_[pos_] == '\n') {
                    t.kind = Tok::Invalid;
                    t.text = "unterminated string";
                    return t;
                }
                const char s = src_[pos_];
                advance();
                if (s == '"') {
                    return t;
                }
                if (s == '\\') {
                    const char e = pos_ < src_.size() ? src_[pos_] : '\0';
                    advance();
                    switch (e) {
                    case 'n': t.text += '\n'; break;
                    case 't': t.text += '\t'; break;
                    case '"': t.text += '"'; break;
                    case '\\': t.text += '\\'; break;
                    default:
                        t.kind = Tok::Invalid;
                        t.text = std::string("unknown escape '\\") + e + "'";
                        return t;
                    }
                } else {
                    t.text += s;
                }
            }
        }
        if (c == '-') {
            advance();
            if (peek(0) == '>') {
                advance();
                t.kind = Tok::Arrow;
                t.text = "->";
            } else {
                t.kind = Tok::Minus;
                t.text = "-";
            }
            return t;
        }
        static constexpr std::string_view punct = "(){},:.=";
        advance();
        t.text = std::string(1, c);
        t.kind = punct.find(c) != std::string_view::npos ? Tok::Punct : Tok::Invalid;
        return t;
    }

    void digits(std::string& out) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            out += src_[pos_];
            advance();
        }
    }
    char peek(std::size_t ahead) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            ++col_;  // count UTF-8 lead bytes only
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct Fail {
    Location loc;
    std::string message;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    case Tok::Invalid: return t.text == "unterminated string" || t.text.rfind("unknown escape", 0) == 0
                                  ? t.text
                                  : "'" + t.text + "'";
    default: return "'" + t.text + "'";
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    ParseResult run() {
        ParseResult result;
        while (true) {
            skip_newlines();
            if (peek().kind == Tok::End) {
                return result;
            }
            depth_ = 0;
            try {
                result.ast.statements.push_back(statement());
            } catch (const Fail& f) {
                result.diagnostics.push_back({Severity::Error, Errc::ParseError, f.message, f.loc, {}});
                recover();
            }
        }
    }

private:
    Statement statement() {
        const Token head = peek();
        if (head.kind != Tok::Ident) {
            fail(head, "expected a statement (add, connect, set, show, hide, layout), found " + describe(head));
        }
        ++i_;
        Statement s;
        if (head.text == "add") {
            s = add(head.loc);
        } else if (head.text == "connect") {
            ConnectStmt c;
            c.loc = head.loc;
            c.from = port();
            if (peek().kind != Tok::Arrow) {
                fail(peek(), "expected '->' between output and input port, found " + describe(peek()));
            }
            ++i_;
            c.to = port();
            s = c;
        } else if (head.text == "set") {
            AssignStmt a;
            a.loc = head.loc;
            a.target = port();
            expect_punct('=');
            a.value = literal();
            s = a;
        } else if (head.text == "show" || head.text == "hide") {
            PreviewStmt p;
            p.loc = head.loc;
            p.show = head.text == "show";
            p.node = ident("node id");
            s = p;
        } else if (head.text == "layout") {
            const Token mode = peek();
            if (mode.kind != Tok::Ident || mode.text != "auto") {
                fail(mode, "expected 'auto' after 'layout'");
            }
            ++i_;
            s = LayoutStmt{head.loc};
        } else {
            fail(head, "unknown statement '" + head.text + "'");
        }
        end_of_statement();
        return s;
    }

    AddStmt add(Location loc) {
        AddStmt a;
        a.loc = loc;
        a.type_loc = peek().loc;
        a.type_id = ident("component type id");
        while (peek().kind == Tok::Punct && peek().text == ".") {
            ++i_;
            a.type_id += "." + ident("component type id segment");
        }
        a.id_loc = peek().loc;
        a.node_id = ident("node id");
        if (peek().kind == Tok::Ident && peek().text == "at") {
            ++i_;
            expect_punct('(');
            const double x = number();
            expect_punct(',');
            const double y = number();
            expect_punct(')');
            a.at = Position{x, y};
        }
        if (peek().kind == Tok::Punct && peek().text == "{") {
            ++i_;
            ++depth_;
            skip_newlines();
            while (!(peek().kind == Tok::Punct && peek().text == "}")) {
                BlockEntry e;
                const Token key = peek();
                e.loc = key.loc;
                if (key.kind == Tok::Ident || (key.kind == Tok::Number && is_digits(key.text))) {
                    e.key = key.text;
                    ++i_;
                } else {
                    fail(key, "expected a state field or input index, found " + describe(key));
                }
                expect_punct(':');
                e.value = literal();
                a.block.push_back(std::move(e));
                skip_newlines();
                if (peek().kind == Tok::Punct && peek().text == ",") {
                    ++i_;
                    skip_newlines();
                } else if (!(peek().kind == Tok::Punct && peek().text == "}")) {
                    fail(peek(), "expected ',' or '}' in block, found " + describe(peek()));
                }
            }
            ++i_;
            --depth_;
        }
        return a;
    }

    PortAddr port() {
        PortAddr p;
        p.loc = peek().loc;
        p.node = ident("node id");
        const Token dot = peek();
        if (!(dot.kind == Tok::Punct && dot.text == ".")) {
            fail(dot, "expected '.' and a port index after '" + p.node + "' (ports are addressed as node.index)");
        }
        ++i_;
        const Token idx = peek();
        if (idx.kind != Tok::Number || !is_digits(idx.text) || idx.text.size() > 6) {
            fail(idx, "expected a port index, found " + describe(idx));
        }
        ++i_;
        p.port = std::stoi(idx.text);
        if (peek().kind == Tok::Punct && peek().text == ":") {
            ++i_;
            p.name = ident("port name");
        }
        return p;
    }

    Literal literal() {
        const Token t = peek();
        if (t.kind == Tok::Number || t.kind == Tok::Minus) {
            return numeric_literal();
        }
        if (t.kind == Tok::String) {
            ++i_;
            return Literal{t.text};
        }
        if (t.kind == Tok::Ident) {
            ++i_;
            if (t.text == "true" || t.text == "false") {
                return Literal{t.text == "true"};
            }
            if (t.text == "plane" && peek().kind == Tok::Punct && peek().text == ".") {
                ++i_;
                const Token which = peek();
                if (which.kind == Tok::Ident) {
                    ++i_;
                    if (auto lit = parse_literal("plane." + which.text)) {
                        return *lit;
                    }
                }
                fail(which, "expected plane.xy, plane.yz or plane.xz");
            }
            fail(t, "expected a literal, found '" + t.text + "'");
        }
        if (t.kind == Tok::Punct && t.text == "(") {
            ++i_;
            Triple v;
            v.x = number();
            expect_punct(',');
            v.y = number();
            expect_punct(',');
            v.z = number();
            expect_punct(')');
            return Literal{v};
        }
        fail(t, "expected a literal, found " + describe(t));
    }

    Literal numeric_literal() {
        std::string text;
        const Token first = peek();
        if (first.kind == Tok::Minus) {
            text = "-";
            ++i_;
        }
        const Token n = peek();
        if (n.kind != Tok::Number) {
            fail(n, "expected a number, found " + describe(n));
        }
        ++i_;
        text += n.text;
        auto lit = parse_literal(text);
        if (!lit) {
            fail(first, "malformed number '" + text + "'");
        }
        return *lit;
    }

    double number() {
        const Token at = peek();
        const Literal lit = numeric_literal();
        if (auto v = literal_as_number(lit)) {
            return *v;
        }
        fail(at, "expected a number");
    }

    std::string ident(const char* what) {
        const Token t = peek();
        if (t.kind != Tok::Ident) {
            fail(t, std::string("expected ") + what + ", found " + describe(t));
        }
        ++i_;
        return t.text;
    }

    void expect_punct(char c) {
        const Token t = peek();
        if (!(t.kind == Tok::Punct && t.text[0] == c)) {
            fail(t, std::string("expected '") + c + "', found " + describe(t));
        }
        ++i_;
    }

    void end_of_statement() {
        const Token t = peek();
        if (t.kind != Tok::Newline && t.kind != Tok::End) {
            fail(t, "unexpected " + describe(t) + " after statement");
        }
    }

    void recover() {
        // Skip to the end of the line, or past the block the error was in.
        while (true) {
            const Token& t = peek();
            if (t.kind == Tok::End) {
                return;
            }
            if (t.kind == Tok::Punct && t.text == "{") {
                ++depth_;
            } else if (t.kind == Tok::Punct && t.text == "}") {
                --depth_;
            } else if (t.kind == Tok::Newline && depth_ <= 0) {
                return;
            }
            ++i_;
        }
    }

    void skip_newlines() {
        while (peek().kind == Tok::Newline) {
            ++i_;
        }
    }

    static bool is_digits(const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    }

    [[noreturn]] static void fail(const Token& at, std::string message) { throw Fail{at.loc, std::move(message)}; }

    const Token& peek() const { return toks_[std::min(i_, toks_.size() - 1)]; }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    int depth_ = 0;
};

} // namespace

bool BlockEntry::is_input() const {
    return !key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int BlockEntry::input_index() const {
    int v = -1;
    std::from_chars(key.data(), key.data() + key.size(), v);
    return v;
}

ParseResult parse_script(std::string_view text) { return Parser(Lexer(text).run()).run(); }

} // namespace vpg::script
