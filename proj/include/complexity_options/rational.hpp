#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "complexity_options/errors.hpp"

namespace complexity_options {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow_int(BigInt base, std::size_t exponent) {
    BigInt result = 1;
    while (exponent > 0) {
        if (exponent & 1u) result *= base;
        base *= base;
        exponent >>= 1u;
    }
    return result;
}

inline Rational pow_rational(const Rational& base, std::size_t exponent) {
    return Rational(pow_int(boost::multiprecision::numerator(base), exponent),
                    pow_int(boost::multiprecision::denominator(base), exponent));
}

/// Parses "3", "-0.25", "1/4" or "2.5e-1" exactly. Throws PreconditionError otherwise.
inline Rational parse_rational(std::string_view text) {
    const std::string s(text);
    auto fail = [&]() -> Rational { throw PreconditionError("not a number: '" + s + "'"); };
    if (s.empty()) return fail();
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) return fail();
        return num / den;
    }
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
    BigInt digits = 0;
    std::size_t fraction_digits = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c >= '0' && c <= '9') {
            digits = digits * 10 + (c - '0');
            seen_digit = true;
            if (seen_point) ++fraction_digits;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) return fail();
    long exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') return fail();
        const std::string tail = s.substr(i + 1);
        if (tail.empty() || tail.find_first_not_of("+-0123456789") != std::string::npos) return fail();
        try {
            exponent = std::stol(tail);
        } catch (const std::exception&) {
            return fail();
        }
        if (exponent > 4000 || exponent < -4000) return fail();
    }
    exponent -= static_cast<long>(fraction_digits);
    Rational value(digits);
    if (exponent >= 0) {
        value *= pow_int(10, static_cast<std::size_t>(exponent));
    } else {
        value /= pow_int(10, static_cast<std::size_t>(-exponent));
    }
    return negative ? Rational(-value) : value;
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

namespace detail {

inline std::string render_scaled(const BigInt& scaled_abs, bool negative, std::size_t digits) {
    std::string body = scaled_abs.str();
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    std::string out = negative && scaled_abs != 0 ? "-" : "";
    out += body.substr(0, body.size() - digits);
    if (digits > 0) out += "." + body.substr(body.size() - digits);
    return out;
}

}  // namespace detail

/// Decimal rendering with `digits` fractional digits, rounding half to even.
inline std::string format_decimal(const Rational& value, std::size_t digits) {
    const bool negative = value < 0;
    const Rational magnitude = negative ? Rational(-value) : value;
    const BigInt scale = pow_int(10, digits);
    const BigInt num = boost::multiprecision::numerator(magnitude) * scale;
    const BigInt den = boost::multiprecision::denominator(magnitude);
    BigInt quotient = num / den;
    const BigInt twice_remainder = (num % den) * 2;
    if (twice_remainder > den || (twice_remainder == den && (quotient & 1) != 0)) ++quotient;
    return detail::render_scaled(quotient, negative, digits);
}

/// Decimal rendering with `digits` fractional digits, truncating toward zero.
inline std::string truncate_decimal(const Rational& value, std::size_t digits) {
    const bool negative = value < 0;
    const Rational magnitude = negative ? Rational(-value) : value;
    const BigInt scaled = boost::multiprecision::numerator(magnitude) * pow_int(10, digits) /
                          boost::multiprecision::denominator(magnitude);
    return detail::render_scaled(scaled, negative, digits);
}

/// format_decimal with trailing fractional zeros (and a bare point) removed.
inline std::string format_decimal_trimmed(const Rational& value, std::size_t digits) {
    std::string s = format_decimal(value, digits);
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

/// Shortest exact decimal when the denominator is of the form 2^a 5^b, else
/// the rounded form with `fallback_digits` digits.
inline std::string exact_or_rounded(const Rational& value, std::size_t fallback_digits) {
    BigInt den = boost::multiprecision::denominator(value);
    std::size_t twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return format_decimal(value, fallback_digits);
    return format_decimal(value, std::max(twos, fives));
}

}  // namespace complexity_options
