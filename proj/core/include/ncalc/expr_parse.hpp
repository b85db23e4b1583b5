#pragma once

#include "ncalc/expr.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace ncalc {

/// Recursive-descent parser for the expression syntax used on the command
/// line: `x` is the variable, constants are basis labels, numbers
/// ("3", "3/2", "1.5") or coordinate tuples "(1,0,0,0)"; operators are
/// `+`, `-`, `*`, `^` and `inv(...)`. Example: "i*x*j*x + inv(x)".
template <class S>
class ExprParser {
public:
    ExprParser(AlgebraPtr<S> alg, std::string_view text) : alg_(std::move(alg)), text_(text) {}

    ExprPtr<S> parse() {
        ExprPtr<S> e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("expression parse error at position " + std::to_string(pos_) + ": " + why);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr<S> parse_sum() {
        ExprPtr<S> first = parse_term();
        std::vector<ExprPtr<S>> terms{first};
        for (;;) {
            if (eat('+')) {
                terms.push_back(parse_term());
            } else if (eat('-')) {
                terms.push_back(expr_prod(expr_scalar(alg_, scalar_traits<S>::from_int(-1)),
                                          parse_term()));
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms[0] : expr_sum(std::move(terms));
    }

    ExprPtr<S> parse_term() {
        std::vector<ExprPtr<S>> factors{parse_factor()};
        while (eat('*')) factors.push_back(parse_factor());
        return factors.size() == 1 ? factors[0] : expr_prod(std::move(factors));
    }

    ExprPtr<S> parse_factor() {
        ExprPtr<S> base = parse_atom();
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == start) fail("expected integer exponent after '^'");
            unsigned n = static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start))));
            return expr_pow(base, n, alg_);
        }
        return base;
    }

    ExprPtr<S> parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '-') {
            ++pos_;
            return expr_prod(expr_scalar(alg_, scalar_traits<S>::from_int(-1)), parse_factor());
        }
        if (c == '(') return parse_paren_or_tuple();
        if (std::isdigit(static_cast<unsigned char>(c))) return expr_const(parse_scalar() * Element<S>::unit(alg_));
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string ident = parse_ident();
            if (ident == "x") return expr_var<S>();
            if (ident == "inv") {
                if (!eat('(')) fail("expected '(' after inv");
                ExprPtr<S> inner = parse_sum();
                if (!eat(')')) fail("expected ')' closing inv");
                return expr_inv(inner);
            }
            int k = alg_->basis_index(ident);
            if (k < 0) fail("unknown identifier '" + ident + "' (not a basis label of " +
                            alg_->name() + ")");
            return expr_const(Element<S>::basis(alg_, k));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')
                ++pos_;
            else
                break;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    S parse_scalar() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        bool digits = false;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            digits = true;
        }
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                digits = true;
            }
        } else if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (!digits) fail("expected number");
        return scalar_traits<S>::parse(std::string(text_.substr(start, pos_ - start)));
    }

    /// '(' starts either a grouped subexpression or a coordinate tuple;
    /// a tuple is recognized by a comma before the matching ')'.
    ExprPtr<S> parse_paren_or_tuple() {
        eat('(');
        // Look ahead for a top-level comma.
        int depth = 0;
        bool tuple = false;
        for (std::size_t i = pos_; i < text_.size(); ++i) {
            char c = text_[i];
            if (c == '(') ++depth;
            else if (c == ')') {
                if (depth == 0) break;
                --depth;
            } else if (c == ',' && depth == 0) {
                tuple = true;
                break;
            }
        }
        if (!tuple) {
            ExprPtr<S> inner = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        std::vector<S> coords;
        coords.push_back(parse_scalar());
        while (eat(',')) coords.push_back(parse_scalar());
        if (!eat(')')) fail("expected ')' closing tuple");
        if (static_cast<int>(coords.size()) != alg_->dim())
            fail("tuple has " + std::to_string(coords.size()) + " coordinates, algebra dimension is " +
                 std::to_string(alg_->dim()));
        return expr_const(Element<S>(alg_, std::move(coords)));
    }

    AlgebraPtr<S> alg_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

template <class S>
ExprPtr<S> parse_expr(const AlgebraPtr<S>& alg, std::string_view text) {
    return ExprParser<S>(alg, text).parse();
}

/// Parse "a0,a1,..." into an element (rational or decimal entries).
template <class S>
Element<S> parse_coords(const AlgebraPtr<S>& alg, std::string_view text) {
    std::vector<S> coords;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view item = text.substr(start, comma == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : comma - start);
        coords.push_back(scalar_traits<S>::parse(std::string(item)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (static_cast<int>(coords.size()) != alg->dim())
        throw ParseError("coordinate vector has " + std::to_string(coords.size()) +
                         " entries, algebra dimension is " + std::to_string(alg->dim()));
    return Element<S>(alg, std::move(coords));
}

} // namespace ncalc
