#include "ncalc/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace ncalc {

namespace {

Rational::Int pow10(std::size_t k) {
    Rational::Int p = 1;
    for (std::size_t i = 0; i < k; ++i) p *= 10;
    return p;
}

} // namespace

Rational::Rational(long long num, long long den) : Rational(Int(num), Int(den)) {}

Rational::Rational(const Int& num, const Int& den) {
    if (den.is_zero()) throw std::invalid_argument("rational: zero denominator");
    if (den < 0)
        value_ = Rep(Int(-num), Int(-den));
    else
        value_ = Rep(num, den);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.value_.is_zero()) throw std::invalid_argument("rational: division by zero");
    value_ /= o.value_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'"); };

    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i; };
    skip_ws();
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }

    auto read_digits = [&](Int& out) -> std::size_t {
        std::size_t start = i;
        out = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            out = out * 10 + (text[i] - '0');
            ++i;
        }
        return i - start;
    };

    Int ipart;
    std::size_t ndig = read_digits(ipart);

    Int num = ipart, den = 1;
    if (i < text.size() && text[i] == '.') {
        ++i;
        Int fpart;
        std::size_t fdig = read_digits(fpart);
        if (ndig == 0 && fdig == 0) fail();
        den = pow10(fdig);
        num = ipart * den + fpart;
    } else {
        if (ndig == 0) fail();
        skip_ws();
        if (i < text.size() && text[i] == '/') {
            ++i;
            skip_ws();
            bool dneg = false;
            if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
                dneg = text[i] == '-';
                ++i;
            }
            Int d;
            if (read_digits(d) == 0 || d.is_zero()) fail();
            den = dneg ? Int(-d) : d;
        }
    }
    skip_ws();
    if (i != text.size()) fail();
    if (neg) num = -num;
    return Rational(num, den);
}

std::string Rational::to_string() const {
    std::string s = numerator().str();
    Int den = denominator();
    if (den != 1) {
        s += '/';
        s += den.str();
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational factorial(unsigned n) {
    Rational::Int f = 1;
    for (unsigned k = 2; k <= n; ++k) f *= k;
    return Rational(f);
}

} // namespace ncalc
