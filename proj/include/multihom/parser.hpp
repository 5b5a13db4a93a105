#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "multihom/polynomial.hpp"

namespace multihom {

// Input grammar (shared between the library and the CLI):
//   variables x,y,z or x1..xN; integer and rational coefficients p/q;
//   operators + - * ^ and parentheses; whitespace insignificant.
// Division is constant folding only: the divisor must be a nonzero
// constant. Variables are inferred from the text and reported in
// canonical order (x < y < z, or ascending index).

struct ParsedPolynomial {
    Polynomial poly;
    std::vector<std::string> variables;
};

namespace detail {

struct Token {
    enum Kind { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::string text;
    int pos;  // 1-based column
};

inline std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        int pos = static_cast<int>(i) + 1;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Number, s.substr(i, j - i), pos});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Token::Name, s.substr(i, j - i), pos});
            i = j;
            continue;
        }
        Token::Kind k;
        switch (c) {
            case '+': k = Token::Plus; break;
            case '-': k = Token::Minus; break;
            case '*': k = Token::Star; break;
            case '/': k = Token::Slash; break;
            case '^': k = Token::Caret; break;
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", pos);
        }
        out.push_back({k, std::string(1, c), pos});
        ++i;
    }
    out.push_back({Token::End, "", static_cast<int>(s.size()) + 1});
    return out;
}

// Collect variable names and fix the canonical coordinate order.
inline std::vector<std::string> infer_variables(const std::vector<Token>& toks) {
    bool letters = false, indexed = false;
    std::vector<std::string> names;
    for (const auto& t : toks) {
        if (t.kind != Token::Name) continue;
        const std::string& v = t.text;
        bool is_letter = (v == "x" || v == "y" || v == "z");
        bool is_indexed = v.size() >= 2 && v[0] == 'x' &&
                          std::all_of(v.begin() + 1, v.end(),
                                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (!is_letter && !is_indexed)
            throw ParseError("unknown symbol '" + v + "' (variables are x,y,z or x1..xN)", t.pos);
        if (is_letter) letters = true;
        if (is_indexed) {
            indexed = true;
            long idx = std::stol(v.substr(1));
            if (idx < 1 || idx > kMaxVars)
                throw ParseError("variable index out of range (x1..x6)", t.pos);
        }
        if (letters && indexed)
            throw ParseError("cannot mix x,y,z names with indexed variables", t.pos);
        if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
    }
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
        if (a.size() >= 2 && b.size() >= 2) return std::stol(a.substr(1)) < std::stol(b.substr(1));
        return a < b;  // x < y < z
    });
    if (static_cast<int>(names.size()) > kMaxVars)
        throw ParseError("more than 6 variables", 1);
    return names;
}

class Parser {
  public:
    Parser(const std::vector<Token>& toks, const std::vector<std::string>& names)
        : toks_(toks), names_(names), nvars_(static_cast<int>(names.size())) {}

    Polynomial parse() {
        Polynomial p = expr();
        expect(Token::End, "end of input");
        return p;
    }

  private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_++]; }

    void expect(detail::Token::Kind k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError("expected " + what + ", found '" + peek().text + "'", peek().pos);
        ++i_;
    }

    Polynomial expr() {
        Polynomial acc = term();
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            bool minus = next().kind == Token::Minus;
            Polynomial t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = unary();
        while (peek().kind == Token::Star || peek().kind == Token::Slash) {
            const Token& op = next();
            Polynomial rhs = unary();
            if (op.kind == Token::Star) {
                acc = acc * rhs;
            } else {
                if (rhs.degree() > 0)
                    throw ParseError("division by a non-constant", op.pos);
                Rational d = rhs.constant_term();
                if (d == 0) throw ParseError("zero denominator", op.pos);
                acc = acc * (1 / d);
            }
        }
        return acc;
    }

    Polynomial unary() {
        int sign = 1;
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            if (next().kind == Token::Minus) sign = -sign;
        }
        Polynomial p = power();
        return sign < 0 ? -p : p;
    }

    Polynomial power() {
        Polynomial base = atom();
        if (peek().kind == Token::Caret) {
            const Token& op = next();
            if (peek().kind != Token::Number)
                throw ParseError("exponent must be a non-negative integer", op.pos);
            long e = std::stol(next().text);
            if (e > 200) throw ParseError("exponent too large", op.pos);
            Polynomial acc = Polynomial::constant(nvars_, 1);
            for (long k = 0; k < e; ++k) acc = acc * base;
            return acc;
        }
        return base;
    }

    Polynomial atom() {
        const Token& t = peek();
        if (t.kind == Token::Number) {
            next();
            return Polynomial::constant(nvars_, Rational(Integer(t.text)));
        }
        if (t.kind == Token::Name) {
            next();
            auto it = std::find(names_.begin(), names_.end(), t.text);
            return Polynomial::variable(nvars_, static_cast<int>(it - names_.begin()));
        }
        if (t.kind == Token::LParen) {
            next();
            Polynomial p = expr();
            expect(Token::RParen, "')'");
            return p;
        }
        throw ParseError("expected a number, variable or '('", t.pos);
    }

    const std::vector<Token>& toks_;
    const std::vector<std::string>& names_;
    int nvars_;
    size_t i_ = 0;
};

}  // namespace detail

inline ParsedPolynomial parse_polynomial(const std::string& text) {
    auto toks = detail::tokenize(text);
    auto names = detail::infer_variables(toks);
    detail::Parser parser(toks, names);
    ParsedPolynomial out{parser.parse(), names};
    return out;
}

}  // namespace multihom
