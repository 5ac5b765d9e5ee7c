#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace semiosa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical text form used everywhere rationals leave the engine: "n/d",
// always normalized, denominator included even for integers.
inline std::string to_fraction(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// Accepts "7", "0.25" and "3/4". Returns nothing for malformed text,
// a zero denominator, or a sign (all quantities in the DSL are nonnegative).
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto digits = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string n = text.substr(0, slash), d = text.substr(slash + 1);
        if (!digits(n) || !digits(d)) return std::nullopt;
        BigInt den(d);
        if (den == 0) return std::nullopt;
        return Rational(BigInt(n), den);
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string i = text.substr(0, dot), f = text.substr(dot + 1);
        if (!digits(i) || !digits(f)) return std::nullopt;
        BigInt scale = 1;
        for (size_t k = 0; k < f.size(); ++k) scale *= 10;
        return Rational(BigInt(i) * scale + BigInt(f), scale);
    }
    if (!digits(text)) return std::nullopt;
    return Rational(BigInt(text));
}

// Exact rational value of a nonnegative finite double.
inline Rational rational_from_double(double v) {
    if (v == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(v, &exp);
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    Rational r(mant);
    if (exp >= 0)
        r *= Rational(BigInt(1) << exp);
    else
        r /= Rational(BigInt(1) << -exp);
    return r;
}

} // namespace semiosa
