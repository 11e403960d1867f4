// Integer polynomials: characteristic polynomials by modular Hessenberg
// reduction and CRT, square-free decomposition, and exact real-root counting
// with Sturm sequences.
#pragma once

#include "linalg.hpp"
#include "numeric.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace homgrow {

/// Dense polynomial, coefficients from degree 0 upwards, no trailing zeros.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(const Integer& a, std::size_t degree)
    {
        std::vector<Integer> c(degree + 1, Integer(0));
        c[degree] = a;
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Integer>& coefficients() const { return c_; }
    Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
    const Integer& leading() const { return c_.back(); }

    Integer content() const
    {
        Integer g = 0;
        for (const auto& a : c_)
            g = gcd(g, a);
        return g;
    }

    /// Divides by the content, making the leading coefficient positive.
    Polynomial primitive() const
    {
        if (is_zero())
            return *this;
        Integer g = content();
        if (leading() < 0)
            g = -g;
        std::vector<Integer> c;
        for (const auto& a : c_)
            c.push_back(a / g);
        return Polynomial(std::move(c));
    }

    Polynomial derivative() const
    {
        std::vector<Integer> c;
        for (std::size_t i = 1; i < c_.size(); ++i)
            c.push_back(c_[i] * static_cast<long>(i));
        return Polynomial(std::move(c));
    }

    /// Sign of the value at p/q (q > 0), computed as the sign of
    /// q^deg * f(p/q).
    int sign_at(const Integer& p, const Integer& q) const
    {
        Integer acc = 0;
        Integer qpow = 1;
        // Horner in homogenized form: sum c_k p^k q^{deg-k}.
        for (std::size_t i = c_.size(); i-- > 0;) {
            acc = acc * p + c_[i] * qpow;
            qpow *= q;
        }
        return sign(acc);
    }

    int sign_at(const Rational& x) const
    {
        return sign_at(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
    }

    Rational evaluate(const Rational& x) const
    {
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * x + Rational(c_[i]);
        return acc;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Integer> c(a.c_.size() + b.c_.size() - 1, Integer(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a)
    {
        std::vector<Integer> c;
        for (const auto& x : a.c_)
            c.push_back(-x);
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    /// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
    friend Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b)
    {
        if (b.is_zero())
            throw std::domain_error("pseudo-remainder by zero polynomial");
        std::vector<Integer> r = a.c_;
        const int db = b.degree();
        int dr = a.degree();
        int steps = dr - db + 1;
        if (steps <= 0)
            return a;
        const Integer& lb = b.leading();
        while (dr >= db) {
            const Integer lr = r[static_cast<std::size_t>(dr)];
            for (auto& x : r)
                x *= lb;
            for (int i = 0; i <= db; ++i)
                r[static_cast<std::size_t>(dr - db + i)] -= lr * b.c_[static_cast<std::size_t>(i)];
            --steps;
            --dr;
            while (dr >= 0 && r[static_cast<std::size_t>(dr)] == 0)
                --dr;
        }
        for (; steps > 0; --steps)
            for (auto& x : r)
                x *= lb;
        return Polynomial(std::move(r));
    }

    /// Exact division; throws if b does not divide a over Q with integral
    /// quotient.
    friend Polynomial exact_divide(const Polynomial& a, const Polynomial& b)
    {
        if (b.is_zero())
            throw std::domain_error("division by zero polynomial");
        if (a.degree() < b.degree()) {
            if (a.is_zero())
                return {};
            throw std::domain_error("inexact polynomial division");
        }
        std::vector<Integer> r = a.c_;
        std::vector<Integer> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Integer(0));
        const int db = b.degree();
        for (int d = a.degree(); d >= db; --d) {
            const Integer& top = r[static_cast<std::size_t>(d)];
            if (top == 0)
                continue;
            if (top % b.leading() != 0)
                throw std::domain_error("inexact polynomial division");
            Integer f = top / b.leading();
            q[static_cast<std::size_t>(d - db)] = f;
            for (int i = 0; i <= db; ++i)
                r[static_cast<std::size_t>(d - db + i)] -= f * b.c_[static_cast<std::size_t>(i)];
        }
        for (const auto& x : r)
            if (x != 0)
                throw std::domain_error("inexact polynomial division");
        return Polynomial(std::move(q));
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<Integer> c_;
};

/// Primitive gcd over Z[x] (content ignored), positive leading coefficient.
inline Polynomial primitive_gcd(Polynomial a, Polynomial b)
{
    a = a.primitive();
    b = b.primitive();
    while (!b.is_zero()) {
        Polynomial r = pseudo_remainder(a, b).primitive();
        a = std::move(b);
        b = std::move(r);
    }
    return a.primitive();
}

/// Square-free decomposition (Musser): returns primitive square-free
/// g_1, g_2, ... with f = c * prod g_i^i.
inline std::vector<Polynomial> square_free_decomposition(const Polynomial& f)
{
    if (f.degree() <= 0)
        return {};
    std::vector<Polynomial> factors;
    const Polynomial a = f.primitive();
    // w collects every distinct root once.
    Polynomial rest = a;
    Polynomial w = exact_divide(a, primitive_gcd(a, a.derivative())).primitive();
    int mult = 1;
    while (rest.degree() > 0) {
        Polynomial next_rest = exact_divide(rest, w).primitive();
        Polynomial next_w = primitive_gcd(next_rest, w);
        // Roots of w that are not roots of next_w have multiplicity `mult`.
        Polynomial factor = exact_divide(w, next_w).primitive();
        if (static_cast<int>(factors.size()) < mult)
            factors.resize(static_cast<std::size_t>(mult), Polynomial({Integer(1)}));
        factors[static_cast<std::size_t>(mult - 1)] = factor;
        rest = std::move(next_rest);
        w = std::move(next_w);
        ++mult;
    }
    return factors;
}

/// Sturm sequence of a square-free polynomial with positively rescaled
/// negated pseudo-remainders.
inline std::vector<Polynomial> sturm_sequence(const Polynomial& f)
{
    std::vector<Polynomial> seq{f, f.derivative()};
    while (!seq.back().is_zero() && seq.back().degree() > 0) {
        const auto& a = seq[seq.size() - 2];
        const auto& b = seq.back();
        Polynomial r = pseudo_remainder(a, b);
        // prem = lc(b)^k a mod b; with a negative lc and odd k the sign flips.
        const int k = a.degree() - b.degree() + 1;
        const bool flip = b.leading() < 0 && (k % 2 == 1);
        Integer g = r.content();
        if (g == 0)
            break;
        if (!flip)
            g = -g;
        std::vector<Integer> c;
        for (const auto& x : r.coefficients())
            c.push_back(x / g);
        seq.emplace_back(std::move(c));
    }
    if (seq.back().is_zero())
        seq.pop_back();
    return seq;
}

inline int sign_changes(const std::vector<Polynomial>& seq, const Rational& x)
{
    int changes = 0;
    int last = 0;
    for (const auto& p : seq) {
        int s = p.sign_at(x);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

/// Number of real roots of f in the open interval (a, b), counted with
/// multiplicity. Requires f(a) != 0 and f(b) != 0.
inline std::size_t count_roots_open(const Polynomial& f, const Rational& a, const Rational& b)
{
    if (f.is_zero())
        throw std::domain_error("root count of the zero polynomial");
    if (f.sign_at(a) == 0 || f.sign_at(b) == 0)
        throw std::domain_error("root count endpoint is a root");
    if (!(a < b))
        return 0;
    std::size_t total = 0;
    const auto factors = square_free_decomposition(f);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].degree() <= 0)
            continue;
        const auto seq = sturm_sequence(factors[i]);
        const int n = sign_changes(seq, a) - sign_changes(seq, b);
        total += static_cast<std::size_t>(n) * (i + 1);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Characteristic polynomials

namespace detail {

/// det(tI - A) mod p via reduction to upper Hessenberg form and the
/// standard recurrence on leading principal minors.
inline std::vector<std::uint64_t> charpoly_mod_p(std::vector<std::vector<std::uint64_t>> H, std::uint64_t p)
{
    const std::size_t n = H.size();
    auto sub = [p](std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + p - b; };
    for (std::size_t k = 0; k + 2 <= n; ++k) {
        std::size_t pivot = k + 1;
        while (pivot < n && H[pivot][k] == 0)
            ++pivot;
        if (pivot == n)
            continue;
        if (pivot != k + 1) {
            std::swap(H[pivot], H[k + 1]);
            for (auto& row : H)
                std::swap(row[pivot], row[k + 1]);
        }
        const auto inv = inv_mod(H[k + 1][k], p);
        for (std::size_t i = k + 2; i < n; ++i) {
            if (H[i][k] == 0)
                continue;
            const auto f = mul_mod(H[i][k], inv, p);
            // row_i -= f * row_{k+1}; col_{k+1} += f * col_i (similarity).
            for (std::size_t j = 0; j < n; ++j)
                H[i][j] = sub(H[i][j], mul_mod(f, H[k + 1][j], p));
            for (std::size_t j = 0; j < n; ++j)
                H[j][k + 1] = (H[j][k + 1] + mul_mod(f, H[j][i], p)) % p;
        }
    }
    // P_0 = 1; P_m(t) = (t - h_mm) P_{m-1} - sum_{i<m} h_im * prod_{j=i+1}^{m} h_{j,j-1} * P_{i-1}.
    std::vector<std::vector<std::uint64_t>> P(n + 1);
    P[0] = {1};
    for (std::size_t m = 1; m <= n; ++m) {
        const std::size_t mm = m - 1;
        std::vector<std::uint64_t> next(m + 1, 0);
        for (std::size_t d = 0; d < P[m - 1].size(); ++d) {
            next[d + 1] = (next[d + 1] + P[m - 1][d]) % p;
            next[d] = sub(next[d], mul_mod(H[mm][mm], P[m - 1][d], p));
        }
        std::uint64_t prod = 1;
        for (std::size_t i = mm; i-- > 0;) {
            prod = mul_mod(prod, H[i + 1][i], p);
            if (prod == 0)
                break;
            const auto f = mul_mod(prod, H[i][mm], p);
            for (std::size_t d = 0; d < P[i].size(); ++d)
                next[d] = sub(next[d], mul_mod(f, P[i][d], p));
        }
        P[m] = std::move(next);
    }
    return P[n];
}

} // namespace detail

/// det(tI - A) for a square integer matrix. Coefficients are recovered by
/// CRT over 61-bit primes until the product exceeds twice the Hadamard-type
/// bound (1 + D)^N, D the maximal row absolute sum.
inline Polynomial characteristic_polynomial(const std::vector<std::vector<std::int64_t>>& A)
{
    const std::size_t n = A.size();
    for (const auto& row : A)
        if (row.size() != n)
            throw std::invalid_argument("characteristic polynomial of a non-square matrix");
    if (n == 0)
        return Polynomial({Integer(1)});
    Integer D = 0;
    for (const auto& row : A) {
        Integer s = 0;
        for (auto v : row)
            s += v < 0 ? Integer(-Integer(v)) : Integer(v);
        D = std::max(D, s);
    }
    const Integer bound = 2 * pow(D + 1, static_cast<unsigned>(n)) + 1;
    std::vector<Integer> residues(n + 1, Integer(0));
    Integer modulus = 1;
    std::uint64_t candidate = (1ull << 61) - 1;
    while (modulus <= bound) {
        while (!is_prime(candidate))
            candidate -= 2;
        const std::uint64_t p = candidate;
        candidate -= 2;
        std::vector<std::vector<std::uint64_t>> M(n, std::vector<std::uint64_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                M[i][j] = to_mod(A[i][j], p);
        const auto cp = detail::charpoly_mod_p(std::move(M), p);
        // Combine x ≡ residues (mod modulus) with x ≡ cp (mod p).
        const std::uint64_t inv = inv_mod(to_mod(modulus, p), p);
        for (std::size_t k = 0; k <= n; ++k) {
            const std::uint64_t r = to_mod(residues[k], p);
            const std::uint64_t diff = cp[k] >= r ? cp[k] - r : cp[k] + p - r;
            residues[k] += modulus * Integer(mul_mod(diff, inv, p));
        }
        modulus *= p;
    }
    const Integer half = modulus / 2;
    for (auto& r : residues)
        if (r > half)
            r -= modulus;
    return Polynomial(std::move(residues));
}

} // namespace homgrow
