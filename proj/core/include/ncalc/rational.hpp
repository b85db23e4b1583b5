#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace ncalc {

/// Exact rational number. Arithmetic never rounds; values are kept
/// normalized (reduced, positive denominator) by the backing integer type.
class Rational {
public:
    using Int = boost::multiprecision::cpp_int;

    Rational() = default;
    Rational(long long n) : value_(n) {}
    Rational(const Int& n) : value_(n) {}
    Rational(long long num, long long den);
    Rational(const Int& num, const Int& den);

    /// Parse "num", "num/den" or a plain decimal like "-1.25" (read exactly
    /// as a fraction over a power of ten). Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    Rational operator-() const { return Rational(Rep(-value_)); }
    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    bool is_zero() const { return value_.is_zero(); }
    bool is_one() const { return value_ == 1; }
    int sign() const { return value_ < 0 ? -1 : value_.is_zero() ? 0 : 1; }

    Int numerator() const { return boost::multiprecision::numerator(value_); }
    Int denominator() const { return boost::multiprecision::denominator(value_); }

    double to_double() const { return value_.template convert_to<double>(); }

    /// "num/den", or just "num" when the denominator is 1.
    std::string to_string() const;

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    using Rep = boost::multiprecision::cpp_rational;
    explicit Rational(Rep v) : value_(std::move(v)) {}
    Rep value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// (-1)^k as a rational, handy for skew-symmetry bookkeeping.
inline Rational sign_pow(int k) { return (k % 2 == 0) ? Rational(1) : Rational(-1); }

Rational factorial(unsigned n);

} // namespace ncalc
