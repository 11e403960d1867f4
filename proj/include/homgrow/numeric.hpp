// Exact scalar types and small arithmetic helpers shared by every module.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace homgrow {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const Integer& z) { return z.str(); }

/// Formats as `p/q`, or `p` when the denominator is one.
inline std::string to_string(const Rational& q)
{
    if (boost::multiprecision::denominator(q) == 1)
        return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Integer parse_integer(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("empty integer literal");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size())
        throw std::invalid_argument("malformed integer literal '" + std::string(text) + "'");
    for (std::size_t i = start; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("malformed integer literal '" + std::string(text) + "'");
    return Integer(std::string(text[0] == '+' ? text.substr(1) : text));
}

/// Accepts `p`, `p/q` and plain decimals such as `0.25`.
inline Rational parse_rational(std::string_view text)
{
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash));
        Integer den = parse_integer(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
        Integer num = parse_integer(digits.empty() || digits == "-" ? std::string("0") : digits);
        Integer den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i)
            den *= 10;
        return Rational(num, den);
    }
    return Rational(parse_integer(text));
}

inline Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }

inline int sign(const Integer& z) { return z > 0 ? 1 : (z < 0 ? -1 : 0); }
inline int sign(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

inline Integer pow(const Integer& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

/// 64-bit arithmetic that reports overflow instead of wrapping.
struct Overflow : std::overflow_error {
    Overflow() : std::overflow_error("int64 overflow") { }
};

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Overflow();
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Overflow();
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw Overflow();
    return r;
}

// Modular arithmetic for primes below 2^62.
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p)
{
    std::uint64_t result = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1)
            result = mul_mod(result, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return result;
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

inline std::uint64_t to_mod(std::int64_t v, std::uint64_t p)
{
    auto r = v % static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

inline std::uint64_t to_mod(const Integer& v, std::uint64_t p)
{
    Integer r = v % Integer(p);
    if (r < 0)
        r += p;
    return r.convert_to<std::uint64_t>();
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0)
            return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

} // namespace homgrow
