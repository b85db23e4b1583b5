#pragma once

#include "ncalc/rational.hpp"

#include <cmath>
#include <string>

namespace ncalc {

/// Scalar field abstraction. Everything in the library is generic over the
/// scalar: Rational for the exact path, double for the numeric path.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_int(long long n) { return Rational(n); }
    static Rational from_ratio(long long n, long long d) { return Rational(n, d); }
    static bool is_zero(const Rational& v) { return v.is_zero(); }
    static double to_double(const Rational& v) { return v.to_double(); }
    static Rational parse(const std::string& s) { return Rational::parse(s); }
    static std::string to_string(const Rational& v) { return v.to_string(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_int(long long n) { return static_cast<double>(n); }
    static double from_ratio(long long n, long long d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    static bool is_zero(double v) { return v == 0.0; }
    static double to_double(double v) { return v; }
    static double parse(const std::string& s) { return Rational::parse(s).to_double(); }
    static std::string to_string(double v) {
        std::string s = std::to_string(v);
        return s;
    }
};

} // namespace ncalc
