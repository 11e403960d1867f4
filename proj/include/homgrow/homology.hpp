// Chain complexes, Betti numbers over Q and F_p, integral homology,
// combinatorial Laplacians and the spectral primitives used for growth
// estimates.
#pragma once

#include "cell_complex.hpp"
#include "complexes.hpp"
#include "linalg.hpp"
#include "numeric.hpp"
#include "polynomial.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <type_traits>
#include <stdexcept>
#include <string>
#include <vector>

namespace homgrow {

/// Coefficient field: characteristic 0 means Q.
struct Field {
    std::uint64_t p = 0;

    static Field rationals() { return {0}; }
    static Field prime(std::uint64_t p)
    {
        if (!is_prime(p))
            throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
        return {p};
    }

    /// Accepts `q`, `Q`, `f<p>`, `F<p>` or a bare prime.
    static Field parse(std::string text)
    {
        if (text == "q" || text == "Q" || text == "0")
            return rationals();
        if (!text.empty() && (text[0] == 'f' || text[0] == 'F'))
            text = text.substr(1);
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("unknown field '" + text + "'");
        return prime(std::stoull(text));
    }

    bool is_rational() const { return p == 0; }
    std::string tag() const { return p == 0 ? "Q" : "F" + std::to_string(p); }
    friend bool operator==(const Field&, const Field&) = default;
};

inline std::size_t rank(const SparseMatrix& A, Field F) { return F.is_rational() ? rank_rational(A) : rank_mod_p(A, F.p); }

/// Boundary maps ∂_k : C_k → C_{k-1} for k ≥ 1.
class ChainComplex {
public:
    ChainComplex() = default;

    explicit ChainComplex(const CellComplex& X)
    {
        for (int k = 0; k <= X.dimension(); ++k)
            counts_.push_back(X.count(k));
        boundaries_.emplace_back(0, counts_.empty() ? 0 : counts_[0]);
        for (int k = 1; k <= X.dimension(); ++k)
            boundaries_.push_back(X.boundary_matrix(k));
    }

    explicit ChainComplex(const SimplicialComplex& K) : ChainComplex(simplicial_chains(K)) { }

    /// From explicit matrices; boundaries[k-1] = ∂_k.
    ChainComplex(std::vector<std::size_t> counts, std::vector<SparseMatrix> boundaries) : counts_(std::move(counts))
    {
        boundaries_.emplace_back(0, counts_.empty() ? 0 : counts_[0]);
        for (auto& b : boundaries)
            boundaries_.push_back(std::move(b));
        if (boundaries_.size() != std::max<std::size_t>(counts_.size(), 1))
            throw std::invalid_argument("chain complex: one boundary per positive degree");
        for (std::size_t k = 1; k < boundaries_.size(); ++k)
            if (boundaries_[k].rows() != counts_[k - 1] || boundaries_[k].cols() != counts_[k])
                throw std::invalid_argument("chain complex: boundary shape mismatch");
        for (std::size_t k = 2; k < boundaries_.size(); ++k)
            if (!(boundaries_[k - 1] * boundaries_[k]).is_zero())
                throw std::logic_error("chain complex: boundary of boundary is nonzero");
    }

    int top_degree() const { return static_cast<int>(counts_.size()) - 1; }

    std::size_t count(int k) const
    {
        return (k < 0 || k >= static_cast<int>(counts_.size())) ? 0 : counts_[static_cast<std::size_t>(k)];
    }

    /// ∂_k as a count(k-1) x count(k) matrix; zero outside the range.
    SparseMatrix boundary(int k) const
    {
        if (k >= 1 && k < static_cast<int>(boundaries_.size()))
            return boundaries_[static_cast<std::size_t>(k)];
        return SparseMatrix(count(k - 1), count(k));
    }

    /// Quotient complex C(X)/C(A) for a subcomplex given by masks.
    ChainComplex relative(const std::vector<std::vector<bool>>& in_subcomplex) const
    {
        std::vector<std::vector<std::size_t>> keep(counts_.size());
        std::vector<std::vector<std::size_t>> pos(counts_.size());
        for (std::size_t k = 0; k < counts_.size(); ++k) {
            pos[k].assign(counts_[k], static_cast<std::size_t>(-1));
            for (std::size_t i = 0; i < counts_[k]; ++i) {
                const bool sub = k < in_subcomplex.size() && in_subcomplex[k][i];
                if (!sub) {
                    pos[k][i] = keep[k].size();
                    keep[k].push_back(i);
                }
            }
        }
        std::vector<std::size_t> counts;
        for (const auto& level : keep)
            counts.push_back(level.size());
        std::vector<SparseMatrix> bs;
        for (std::size_t k = 1; k < counts_.size(); ++k) {
            SparseMatrix m(counts[k - 1], counts[k]);
            for (std::size_t j = 0; j < keep[k].size(); ++j)
                for (const auto& e : boundaries_[k].column(keep[k][j]))
                    if (pos[k - 1][e.row] != static_cast<std::size_t>(-1))
                        m.add(pos[k - 1][e.row], j, e.value);
            bs.push_back(std::move(m.freeze()));
        }
        return ChainComplex(std::move(counts), std::move(bs));
    }

private:
    static CellComplex simplicial_chains(const SimplicialComplex& K) { return to_cell_complex(K); }

    std::vector<std::size_t> counts_;
    std::vector<SparseMatrix> boundaries_;
};

/// dim H_k(C; F) by exact rank computation.
inline std::size_t betti(const ChainComplex& C, int k, Field F = Field::rationals())
{
    if (k < 0)
        return 0;
    const std::size_t n = C.count(k);
    const std::size_t r_in = C.count(k - 1) ? rank(C.boundary(k), F) : 0;
    const std::size_t r_out = C.count(k + 1) ? rank(C.boundary(k + 1), F) : 0;
    return n - r_in - r_out;
}

inline std::vector<std::size_t> betti_numbers(const ChainComplex& C, Field F = Field::rationals())
{
    std::vector<std::size_t> b;
    for (int k = 0; k <= C.top_degree(); ++k)
        b.push_back(betti(C, k, F));
    return b;
}

/// Reduced Betti number with the augmentation convention b̃_{-1}(∅) = 1.
inline std::size_t reduced_betti(const SimplicialComplex& L, int k, Field F = Field::rationals())
{
    if (k < -1)
        return 0;
    if (k == -1)
        return L.num_vertices() == 0 ? 1 : 0;
    if (L.num_vertices() == 0)
        return 0;
    const auto b = betti(ChainComplex(L), k, F);
    return k == 0 ? b - 1 : b;
}

struct HomologyResult {
    int degree = 0;
    std::string ring; // "Z", "Q" or "F<p>"
    std::size_t betti = 0;
    /// Elementary divisors greater than one (Z only).
    std::vector<Integer> torsion;

    double logtor() const
    {
        double s = 0;
        for (const auto& d : torsion)
            s += std::log(d.convert_to<double>());
        return s;
    }
};

/// H_k(C; Z) from Smith normal forms of ∂_k and ∂_{k+1}.
inline HomologyResult integral_homology(const ChainComplex& C, int k)
{
    HomologyResult h;
    h.degree = k;
    h.ring = "Z";
    if (k < 0)
        return h;
    const auto in = C.count(k - 1) ? elementary_divisors(C.boundary(k)) : std::vector<Integer>{};
    const auto out = C.count(k + 1) ? elementary_divisors(C.boundary(k + 1)) : std::vector<Integer>{};
    h.betti = C.count(k) - in.size() - out.size();
    for (const auto& d : out)
        if (d > 1)
            h.torsion.push_back(d);
    return h;
}

inline HomologyResult field_homology(const ChainComplex& C, int k, Field F)
{
    HomologyResult h;
    h.degree = k;
    h.ring = F.tag();
    h.betti = betti(C, k, F);
    return h;
}

struct UctReport {
    int degree = 0;
    std::uint64_t p = 0;
    std::size_t betti_fp = 0;
    std::size_t betti_q = 0;
    /// Torsion divisors of H_k and H_{k-1} divisible by p.
    std::size_t torsion_count_k = 0;
    std::size_t torsion_count_k1 = 0;
    /// p^(b_p - b_Q) compared with the product of all torsion divisors of
    /// H_k and H_{k-1} (the exponentiated log inequality).
    bool log_form_holds = false;
    bool count_form_holds = false;
    bool pass = false;
};

/// 0 ≤ (b_k(F_p) − b_k(Q)) log p ≤ logtor H_k + logtor H_{k−1}, checked
/// exactly in both its p-adic counting form and its exponentiated form.
inline UctReport uct_inequality_check(const ChainComplex& C, int k, std::uint64_t p)
{
    const Field F = Field::prime(p);
    UctReport r;
    r.degree = k;
    r.p = p;
    r.betti_fp = betti(C, k, F);
    r.betti_q = betti(C, k, Field::rationals());
    const auto hk = integral_homology(C, k);
    const auto hk1 = integral_homology(C, k - 1);
    Integer product = 1;
    for (const auto& d : hk.torsion) {
        r.torsion_count_k += (d % p == 0) ? 1 : 0;
        product *= d;
    }
    for (const auto& d : hk1.torsion) {
        r.torsion_count_k1 += (d % p == 0) ? 1 : 0;
        product *= d;
    }
    const bool nonnegative = r.betti_fp >= r.betti_q;
    const std::size_t diff = nonnegative ? r.betti_fp - r.betti_q : 0;
    r.count_form_holds = nonnegative && diff <= r.torsion_count_k + r.torsion_count_k1;
    r.log_form_holds = nonnegative && pow(Integer(p), static_cast<unsigned>(diff)) <= product;
    r.pass = r.count_form_holds && r.log_form_holds;
    return r;
}

// ---------------------------------------------------------------------------
// Laplacians and spectral bounds

/// Δ_k = ∂_kᵀ ∂_k + ∂_{k+1} ∂_{k+1}ᵀ on C_k.
inline SparseMatrix laplacian(const ChainComplex& C, int k)
{
    const auto dk = C.boundary(k);
    const auto dk1 = C.boundary(k + 1);
    return (dk.transpose() * dk) + (dk1 * dk1.transpose());
}

/// Maximal absolute row sum of Δ_k of the base complex. Every cover has the
/// same local structure, so this bounds the Laplacian norm of all covers.
inline Rational operator_norm_bound(const ChainComplex& C, int k) { return Rational(laplacian(C, k).max_row_abs_sum()); }

namespace detail {

template <typename T>
T pinch_power_trace(const SparseMatrix& M, unsigned r)
{
    const std::size_t n = M.rows();
    T trace = 0;
    std::vector<T> v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(v.begin(), v.end(), T(0));
        v[i] = 1;
        for (unsigned step = 0; step < r; ++step) {
            std::fill(w.begin(), w.end(), T(0));
            for (std::size_t c = 0; c < n; ++c) {
                if (v[c] == 0)
                    continue;
                for (const auto& e : M.column(c)) {
                    if constexpr (std::is_same_v<T, std::int64_t>)
                        w[e.row] = checked_add(w[e.row], checked_mul(e.value, v[c]));
                    else
                        w[e.row] += T(e.value) * v[c];
                }
            }
            std::swap(v, w);
        }
        if constexpr (std::is_same_v<T, std::int64_t>)
            trace = checked_add(trace, v[i]);
        else
            trace += v[i];
    }
    return trace;
}

} // namespace detail

/// tr (1 − Δ/D)^r, exactly. Requires D at least the row-sum norm of Δ.
inline Rational pinch_trace(const SparseMatrix& Delta, const Rational& D, unsigned r)
{
    if (r < 1)
        throw std::invalid_argument("pinch_trace: r must be at least 1");
    if (!Delta.is_symmetric())
        throw std::invalid_argument("pinch_trace: matrix is not symmetric");
    if (D < Rational(Delta.max_row_abs_sum()) || D <= 0)
        throw std::invalid_argument("pinch_trace: D is below the norm bound of the matrix");
    // D = a/b, (1 − Δ/D) = (aI − bΔ)/a.
    const Integer a = boost::multiprecision::numerator(D);
    const Integer b = boost::multiprecision::denominator(D);
    if (a > Integer(std::numeric_limits<std::int64_t>::max() / 4) || b > Integer(std::numeric_limits<std::int64_t>::max() / 4))
        throw std::invalid_argument("pinch_trace: D too large");
    const auto ai = a.convert_to<std::int64_t>();
    const auto bi = b.convert_to<std::int64_t>();
    SparseMatrix M(Delta.rows(), Delta.cols());
    for (std::size_t c = 0; c < Delta.cols(); ++c)
        for (const auto& e : Delta.column(c))
            M.add(e.row, c, checked_mul(-bi, e.value));
    for (std::size_t i = 0; i < Delta.rows(); ++i)
        M.add(i, i, ai);
    M.freeze();
    Integer trace;
    try {
        trace = detail::pinch_power_trace<std::int64_t>(M, r);
    } catch (const Overflow&) {
        trace = detail::pinch_power_trace<Integer>(M, r);
    }
    return Rational(trace) / Rational(pow(a, r));
}

struct SmallEigenvalueReport {
    std::size_t size = 0;
    std::size_t zero_multiplicity = 0;
    std::size_t small_count = 0; // N_ε
    Rational epsilon;
    Rational norm; // row-sum bound used in the exact test
    /// N log‖Δ‖ / log(1/ε) with the row-sum bound (display).
    double bound = 0;
    /// Same expression with the spectral norm (display).
    double bound_spectral = 0;
    bool pass = false;
};

/// Counts eigenvalues with |λ| ∈ (0, ε] exactly and checks
/// N_ε ≤ N log‖Δ‖ / log(1/ε) as (1/ε)^{N_ε} ≤ ‖Δ‖^N.
inline SmallEigenvalueReport small_eigenvalue_check(const std::vector<std::vector<std::int64_t>>& Delta, const Rational& epsilon)
{
    const std::size_t n = Delta.size();
    if (n > 200)
        throw std::invalid_argument("small_eigenvalue_check: matrix larger than 200");
    for (std::size_t i = 0; i < n; ++i) {
        if (Delta[i].size() != n)
            throw std::invalid_argument("small_eigenvalue_check: matrix is not square");
        for (std::size_t j = 0; j < i; ++j)
            if (Delta[i][j] != Delta[j][i])
                throw std::invalid_argument("small_eigenvalue_check: matrix is not symmetric");
    }
    if (!(epsilon > 0 && epsilon < 1))
        throw std::invalid_argument("small_eigenvalue_check: epsilon must lie in (0,1)");

    SmallEigenvalueReport r;
    r.size = n;
    r.epsilon = epsilon;
    const auto S = SparseMatrix::from_dense(Delta);
    r.norm = Rational(S.max_row_abs_sum());

    const auto f = characteristic_polynomial(Delta);
    std::size_t z = 0;
    while (z < n && f.coeff(z) == 0)
        ++z;
    if (z != n - rank_rational(S))
        throw std::logic_error("zero eigenvalue multiplicity disagrees with the rank");
    r.zero_multiplicity = z;
    Polynomial h(std::vector<Integer>(f.coefficients().begin() + static_cast<long>(z), f.coefficients().end()));
    // ε is rational and not an integer, so it is never a root of the monic h.
    r.small_count = h.degree() > 0 ? count_roots_open(h, -epsilon, epsilon) : 0;

    const Integer p = boost::multiprecision::numerator(epsilon);
    const Integer q = boost::multiprecision::denominator(epsilon);
    const Integer D = boost::multiprecision::numerator(r.norm);
    const auto Ne = static_cast<unsigned>(r.small_count);
    r.pass = r.small_count == 0 || pow(q, Ne) <= pow(D, static_cast<unsigned>(n)) * pow(p, Ne);

    const double log_inv_eps = std::log(q.convert_to<double>()) - std::log(p.convert_to<double>());
    const double dn = static_cast<double>(n);
    r.bound = D > 0 ? dn * std::log(D.convert_to<double>()) / log_inv_eps : 0.0;
    if (n > 0) {
        Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(Delta[i][j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
        const double rho = solver.eigenvalues().cwiseAbs().maxCoeff();
        r.bound_spectral = rho > 0 ? dn * std::log(rho) / log_inv_eps : 0.0;
    }
    return r;
}

inline SmallEigenvalueReport small_eigenvalue_check(const SparseMatrix& Delta, const Rational& epsilon)
{
    return small_eigenvalue_check(Delta.to_dense(), epsilon);
}

} // namespace homgrow
