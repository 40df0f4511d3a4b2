#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "forms.hpp"
#include "ring.hpp"

namespace resym {

/// Parse result: a polynomial or a homogeneous-degree differential form.
using ParsedValue = std::variant<Poly, DiffForm>;

namespace parse_detail {

struct Token {
    enum class Kind { number, ident, plus, minus, star, caret, wedge, lparen, rparen, diff, end };
    Kind kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= src_.size()) return {Token::Kind::end, "", line, col};
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) num += advance();
            // rational literal p/q, but '/\' is the wedge
            if (pos_ + 1 < src_.size() && src_[pos_] == '/' &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                num += advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) num += advance();
            }
            return {Token::Kind::number, num, line, col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                id += advance();
            if (id == "d" && pos_ < src_.size() && src_[pos_] == '(') return {Token::Kind::diff, id, line, col};
            return {Token::Kind::ident, id, line, col};
        }
        switch (c) {
            case '+': advance(); return {Token::Kind::plus, "+", line, col};
            case '-': advance(); return {Token::Kind::minus, "-", line, col};
            case '*': advance(); return {Token::Kind::star, "*", line, col};
            case '^': advance(); return {Token::Kind::caret, "^", line, col};
            case '(': advance(); return {Token::Kind::lparen, "(", line, col};
            case ')': advance(); return {Token::Kind::rparen, ")", line, col};
            case '/':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\\') {
                    advance();
                    advance();
                    return {Token::Kind::wedge, "/\\", line, col};
                }
                fail_at(line, col, "unexpected '/'");
            default:
                fail_at(line, col, std::string("unexpected character '") + c + "'");
        }
    }

    [[noreturn]] static void fail_at(int line, int col, const std::string& msg) {
        fail(ErrorCode::SyntaxError,
             "syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }

private:
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

/// Recursive-descent parser over the grammar
///   expr    := term (('+' | '-') term)*
///   term    := factor (('*' | '/\') factor)*
///   factor  := '-' factor | atom ('^' nat)?
///   atom    := number | ident | 'd(' ident ')' | '(' expr ')'
/// Values are polynomials or forms; + and - require equal form degree.
class Parser {
public:
    Parser(const std::string& src, ContextPtr ctx) : lexer_(src), ctx_(std::move(ctx)) { shift(); }

    ParsedValue parse() {
        ParsedValue v = expr();
        expect(Token::Kind::end, "end of input");
        return v;
    }

private:
    void shift() { tok_ = lexer_.next(); }

    void expect(Token::Kind k, const std::string& what) {
        if (tok_.kind != k) Lexer::fail_at(tok_.line, tok_.col, "expected " + what);
    }

    static int degree_of(const ParsedValue& v) {
        return std::holds_alternative<Poly>(v) ? 0 : std::get<DiffForm>(v).degree();
    }

    DiffForm as_form(const ParsedValue& v) {
        if (std::holds_alternative<DiffForm>(v)) return std::get<DiffForm>(v);
        return DiffForm::from_poly(std::get<Poly>(v));
    }

    ParsedValue expr() {
        ParsedValue acc = term();
        while (tok_.kind == Token::Kind::plus || tok_.kind == Token::Kind::minus) {
            bool minus = tok_.kind == Token::Kind::minus;
            int line = tok_.line, col = tok_.col;
            shift();
            ParsedValue rhs = term();
            if (degree_of(acc) != degree_of(rhs))
                fail(ErrorCode::MixedDegree, "mixed form degrees in a sum at " + std::to_string(line) + ":" +
                                                 std::to_string(col));
            if (std::holds_alternative<Poly>(acc) && std::holds_alternative<Poly>(rhs)) {
                acc = minus ? std::get<Poly>(acc) - std::get<Poly>(rhs) : std::get<Poly>(acc) + std::get<Poly>(rhs);
            } else {
                DiffForm a = as_form(acc), b = as_form(rhs);
                acc = minus ? a - b : a + b;
            }
        }
        return acc;
    }

    ParsedValue term() {
        ParsedValue acc = factor();
        while (tok_.kind == Token::Kind::star || tok_.kind == Token::Kind::wedge) {
            bool wedge_op = tok_.kind == Token::Kind::wedge;
            int line = tok_.line, col = tok_.col;
            shift();
            ParsedValue rhs = factor();
            if (wedge_op) {
                acc = wedge(as_form(acc), as_form(rhs));
            } else if (std::holds_alternative<Poly>(acc) && std::holds_alternative<Poly>(rhs)) {
                acc = std::get<Poly>(acc) * std::get<Poly>(rhs);
            } else if (std::holds_alternative<Poly>(acc)) {
                acc = std::get<DiffForm>(rhs).scaled_by(std::get<Poly>(acc));
            } else if (std::holds_alternative<Poly>(rhs)) {
                acc = std::get<DiffForm>(acc).scaled_by(std::get<Poly>(rhs));
            } else {
                Lexer::fail_at(line, col, "'*' between two forms; use /\\ for wedge products");
            }
        }
        return acc;
    }

    ParsedValue factor() {
        if (tok_.kind == Token::Kind::minus) {
            shift();
            ParsedValue v = factor();
            if (std::holds_alternative<Poly>(v)) return -std::get<Poly>(v);
            return std::get<DiffForm>(v).scaled(Coeff(-1));
        }
        ParsedValue v = atom();
        if (tok_.kind == Token::Kind::caret) {
            int line = tok_.line, col = tok_.col;
            shift();
            if (tok_.kind != Token::Kind::number || tok_.text.find('/') != std::string::npos)
                Lexer::fail_at(tok_.line, tok_.col, "expected a non-negative integer exponent");
            if (!std::holds_alternative<Poly>(v)) Lexer::fail_at(line, col, "forms cannot be raised to powers");
            int e = 0;
            try {
                e = std::stoi(tok_.text);
            } catch (...) {
                Lexer::fail_at(tok_.line, tok_.col, "exponent out of range");
            }
            shift();
            return std::get<Poly>(v).pow(e);
        }
        return v;
    }

    ParsedValue atom() {
        switch (tok_.kind) {
            case Token::Kind::number: {
                std::string text = tok_.text;
                shift();
                auto slash = text.find('/');
                Coeff c = slash == std::string::npos
                              ? Coeff(Integer(text))
                              : Coeff(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
                return Poly::constant(ctx_, c);
            }
            case Token::Kind::ident: {
                int i = ctx_->var_index(tok_.text);
                if (i < 0)
                    fail(ErrorCode::UnknownVariable, "unknown variable '" + tok_.text + "' at " +
                                                         std::to_string(tok_.line) + ":" + std::to_string(tok_.col));
                shift();
                return Poly::variable(ctx_, static_cast<std::size_t>(i));
            }
            case Token::Kind::diff: {
                shift();
                expect(Token::Kind::lparen, "'('");
                shift();
                expect(Token::Kind::ident, "variable name");
                int i = ctx_->var_index(tok_.text);
                if (i < 0)
                    fail(ErrorCode::UnknownVariable, "unknown variable '" + tok_.text + "' at " +
                                                         std::to_string(tok_.line) + ":" + std::to_string(tok_.col));
                shift();
                expect(Token::Kind::rparen, "')'");
                shift();
                return DiffForm::d_var(ctx_, static_cast<std::size_t>(i));
            }
            case Token::Kind::lparen: {
                shift();
                ParsedValue v = expr();
                expect(Token::Kind::rparen, "')'");
                shift();
                return v;
            }
            default:
                Lexer::fail_at(tok_.line, tok_.col, "expected a value");
        }
    }

    Lexer lexer_;
    ContextPtr ctx_;
    Token tok_;
};

} // namespace parse_detail

inline ParsedValue parse_expression(const std::string& text, const ContextPtr& ctx) {
    return parse_detail::Parser(text, ctx).parse();
}

inline Poly parse_poly(const std::string& text, const ContextPtr& ctx) {
    ParsedValue v = parse_expression(text, ctx);
    require(std::holds_alternative<Poly>(v), ErrorCode::MixedDegree, "expected a polynomial, found a form");
    return std::get<Poly>(v);
}

inline DiffForm parse_form(const std::string& text, const ContextPtr& ctx) {
    ParsedValue v = parse_expression(text, ctx);
    if (std::holds_alternative<Poly>(v)) return DiffForm::from_poly(std::get<Poly>(v));
    return std::get<DiffForm>(v);
}

} // namespace resym
