// Van Kampen obstruction theory at the level of intersection vectors:
// generic linear immersions into R^{2d}, signed intersection counts of
// disjoint top simplices, finger moves, and the octahedral reduction.
#pragma once

#include "complexes.hpp"
#include "linalg.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace homgrow {

struct EmbeddingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using Point = std::vector<Rational>;

/// Linear map of a d-dimensional complex into R^{2d}, given on vertices.
struct Immersion {
    int d = 1;
    SimplicialComplex source;
    std::vector<Point> coords;

    std::size_t target_dimension() const { return static_cast<std::size_t>(2 * d); }
};

/// Vertex i (1-based, in the complex's order) goes to (i, i², ..., i^{2d}).
inline Immersion moment_immersion(const SimplicialComplex& L, int d)
{
    if (d < 1)
        throw EmbeddingError("moment immersion needs d >= 1");
    if (L.dimension() > d)
        throw EmbeddingError("complex of dimension " + std::to_string(L.dimension()) + " does not immerse generically in R^" +
                             std::to_string(2 * d));
    Immersion f{d, L, {}};
    for (std::size_t i = 0; i < L.num_vertices(); ++i) {
        Point p;
        Integer x = static_cast<long>(i + 1), power = 1;
        for (int k = 0; k < 2 * d; ++k) {
            power *= x;
            p.push_back(Rational(power));
        }
        f.coords.push_back(std::move(p));
    }
    return f;
}

inline void validate_immersion(const Immersion& f)
{
    if (f.coords.size() != f.source.num_vertices())
        throw EmbeddingError("immersion needs coordinates for every vertex");
    for (const auto& p : f.coords)
        if (p.size() != f.target_dimension())
            throw EmbeddingError("coordinate vector has the wrong length");
    if (f.source.dimension() > f.d)
        throw EmbeddingError("source dimension exceeds d");
}

namespace detail {

/// Rank of a rational matrix given by rows.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> m)
{
    std::size_t rank = 0;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && m[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c] == 0)
                continue;
            const Rational t = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j)
                m[r][j] -= t * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline Point sub(const Point& a, const Point& b)
{
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

struct PairIntersection {
    enum class Kind { miss, cross, degenerate } kind = Kind::miss;
    int sign = 0;
    std::string reason;
};

/**
 * Intersection of two affine d-simplices P, Q in R^{2d} (vertex lists in
 * orientation order). Solves p0 + Σ a_i (p_i − p0) = q0 + Σ b_j (q_j − q0);
 * a crossing is transverse with all barycentric coordinates positive, and
 * its sign is that of det[p1−p0, ..., q1−q0, ...].
 */
inline PairIntersection intersect(const std::vector<Point>& P, const std::vector<Point>& Q)
{
    const std::size_t n = P[0].size();
    const std::size_t dp = P.size() - 1, dq = Q.size() - 1;
    // Augmented system with columns a_1..a_dp, b_1..b_dq | rhs.
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(dp + dq + 1));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < dp; ++i)
            m[r][i] = P[i + 1][r] - P[0][r];
        for (std::size_t j = 0; j < dq; ++j)
            m[r][dp + j] = Q[0][r] - Q[j + 1][r];
        m[r][dp + dq] = Q[0][r] - P[0][r];
    }
    const std::size_t cols = dp + dq;
    // Gaussian elimination with determinant tracking for the square case.
    std::size_t rank = 0;
    Rational det = 1;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && rank < n; ++c) {
        std::size_t p = rank;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n) {
            det = 0;
            continue;
        }
        if (p != rank) {
            std::swap(m[p], m[rank]);
            det = -det;
        }
        det *= m[rank][c];
        for (std::size_t r = 0; r < n; ++r) {
            if (r == rank || m[r][c] == 0)
                continue;
            const Rational t = m[r][c] / m[rank][c];
            for (std::size_t j = c; j <= cols; ++j)
                m[r][j] -= t * m[rank][j];
        }
        pivots.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < n; ++r)
        if (m[r][cols] != 0)
            return {}; // inconsistent: the affine spans miss
    if (rank < cols)
        return {PairIntersection::Kind::degenerate, 0, "affine spans meet in more than a point"};
    std::vector<Rational> x(cols);
    for (std::size_t i = 0; i < rank; ++i)
        x[pivots[i]] = m[i][cols] / m[i][pivots[i]];
    Rational a0 = 1, b0 = 1;
    for (std::size_t i = 0; i < dp; ++i)
        a0 -= x[i];
    for (std::size_t j = 0; j < dq; ++j)
        b0 -= x[dp + j];
    bool inside = a0 > 0 && b0 > 0, boundary = a0 == 0 || b0 == 0;
    for (const auto& v : x) {
        inside = inside && v > 0;
        boundary = boundary || v == 0;
    }
    if (inside) {
        // det[P-diffs, −Q-diffs] = (−1)^{dq} det[P-diffs, Q-diffs]
        int s = det > 0 ? 1 : -1;
        if (dq % 2)
            s = -s;
        return {PairIntersection::Kind::cross, s, {}};
    }
    // The crossing point of the spans lies outside one simplex; a boundary
    // incidence only matters when the point is in both closed simplices.
    bool closed = a0 >= 0 && b0 >= 0;
    for (const auto& v : x)
        closed = closed && v >= 0;
    if (closed && boundary)
        return {PairIntersection::Kind::degenerate, 0, "simplices meet on a boundary"};
    return {};
}

inline std::vector<Point> vertices_of(const Immersion& f, const Simplex& s)
{
    std::vector<Point> out;
    for (auto v : s)
        out.push_back(f.coords[v]);
    return out;
}

} // namespace detail

/// Signed intersection counts V_{σ,τ} for ordered pairs of disjoint top
/// simplices (indices into `tops`, the d-simplices in complex order).
struct IntersectionVector {
    int d = 1;
    std::vector<Simplex> tops;
    std::map<std::pair<std::size_t, std::size_t>, Integer> entries;
    /// 0 for integer entries, 2 for a vector reduced mod 2.
    std::uint64_t modulus = 0;

    Integer at(std::size_t s, std::size_t t) const
    {
        auto it = entries.find({s, t});
        if (it == entries.end())
            throw EmbeddingError("intersection vector: pair is not disjoint");
        return it->second;
    }

    bool is_zero() const
    {
        for (const auto& [k, v] : entries)
            if (v != 0)
                return false;
        return true;
    }

    friend bool operator==(const IntersectionVector& a, const IntersectionVector& b)
    {
        return a.d == b.d && a.tops == b.tops && a.entries == b.entries && a.modulus == b.modulus;
    }
};

/// Ordered pairs of disjoint top simplices, all entries zero.
inline IntersectionVector empty_vector(const SimplicialComplex& L, int d)
{
    IntersectionVector V;
    V.d = d;
    V.tops = L.simplices(d);
    for (std::size_t s = 0; s < V.tops.size(); ++s)
        for (std::size_t t = 0; t < V.tops.size(); ++t)
            if (s != t && disjoint(V.tops[s], V.tops[t]))
                V.entries[{s, t}] = 0;
    return V;
}

inline bool symmetric(const IntersectionVector& V)
{
    for (const auto& [k, v] : V.entries) {
        const Integer w = V.at(k.second, k.first);
        const Integer want = V.d % 2 ? -v : v;
        if (V.modulus ? (w - want) % V.modulus != 0 : w != want)
            return false;
    }
    return true;
}

struct GenericReport {
    bool generic = true;
    std::optional<std::pair<Simplex, Simplex>> witness;
    std::string reason;
};

/// Disjoint top simplices must miss or cross transversally at one interior
/// point; adjacent top simplices must span an affinely independent set.
/// Throws on a degenerate top simplex.
inline GenericReport generic_check(const Immersion& f)
{
    validate_immersion(f);
    const auto& tops = f.source.simplices(f.d);
    for (const auto& s : tops) {
        auto P = detail::vertices_of(f, s);
        std::vector<std::vector<Rational>> rows;
        for (std::size_t i = 1; i < P.size(); ++i)
            rows.push_back(detail::sub(P[i], P[0]));
        if (detail::rational_rank(rows) != rows.size())
            throw EmbeddingError("degenerate simplex {" + f.source.simplex_name(s) + "}");
    }
    for (std::size_t i = 0; i < tops.size(); ++i)
        for (std::size_t j = i + 1; j < tops.size(); ++j) {
            const auto& s = tops[i];
            const auto& t = tops[j];
            if (disjoint(s, t)) {
                auto r = detail::intersect(detail::vertices_of(f, s), detail::vertices_of(f, t));
                if (r.kind == detail::PairIntersection::Kind::degenerate)
                    return {false, std::make_pair(s, t), r.reason};
            } else {
                const auto u = set_union(s, t);
                std::vector<std::vector<Rational>> rows;
                for (std::size_t k = 1; k < u.size(); ++k)
                    rows.push_back(detail::sub(f.coords[u[k]], f.coords[u[0]]));
                if (detail::rational_rank(rows) != rows.size())
                    return {false, std::make_pair(s, t), "adjacent simplices span an affinely dependent set"};
            }
        }
    return {};
}

inline IntersectionVector intersection_vector(const Immersion& f)
{
    validate_immersion(f);
    IntersectionVector V = empty_vector(f.source, f.d);
    const auto& tops = V.tops;
    auto rows = parallel_map(tops.size(), [&](std::size_t i) {
        std::vector<std::pair<std::size_t, int>> row;
        for (std::size_t j = i + 1; j < tops.size(); ++j) {
            if (!disjoint(tops[i], tops[j]))
                continue;
            auto r = detail::intersect(detail::vertices_of(f, tops[i]), detail::vertices_of(f, tops[j]));
            if (r.kind == detail::PairIntersection::Kind::degenerate)
                throw EmbeddingError("genericity violation between {" + f.source.simplex_name(tops[i]) + "} and {" +
                                     f.source.simplex_name(tops[j]) + "}: " + r.reason);
            row.emplace_back(j, r.sign);
        }
        return row;
    });
    for (std::size_t i = 0; i < tops.size(); ++i)
        for (const auto& [j, s] : rows[i]) {
            V.entries[{i, j}] = s;
            V.entries[{j, i}] = f.d % 2 ? -s : s;
        }
    return V;
}

/// (d−1)-cochain on the source complex, indexed like simplices(d−1).
using Cochain = std::vector<Integer>;

/// ρ(∂τ) for a d-simplex τ.
inline Integer evaluate_boundary(const SimplicialComplex& L, const Cochain& rho, const Simplex& tau)
{
    Integer s = 0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        auto face = tau;
        face.erase(face.begin() + static_cast<long>(i));
        const auto idx = L.index_of(face);
        if (!idx)
            throw EmbeddingError("face missing from complex");
        s += (i % 2 ? -1 : 1) * rho.at(*idx);
    }
    return s;
}

/// Pushes top simplex `sigma` (index) around the cochain ρ.
inline IntersectionVector finger_move(const SimplicialComplex& L, IntersectionVector V, std::size_t sigma, const Cochain& rho)
{
    if (sigma >= V.tops.size())
        throw EmbeddingError("finger move on an unknown simplex");
    if (rho.size() != L.count(V.d - 1))
        throw EmbeddingError("finger move cochain has the wrong length");
    for (std::size_t t = 0; t < V.tops.size(); ++t) {
        auto it = V.entries.find({sigma, t});
        if (it == V.entries.end())
            continue;
        const Integer delta = evaluate_boundary(L, rho, V.tops[t]);
        it->second += delta;
        V.entries[{t, sigma}] += V.d % 2 ? -delta : delta;
        if (V.modulus) {
            it->second = ((it->second % V.modulus) + V.modulus) % V.modulus;
            auto& back = V.entries[{t, sigma}];
            back = ((back % V.modulus) + V.modulus) % V.modulus;
        }
    }
    return V;
}

inline IntersectionVector odd_scale(IntersectionVector V, std::uint64_t k)
{
    for (auto& [key, v] : V.entries) {
        v *= 2 * k + 1;
        if (V.modulus)
            v %= V.modulus;
    }
    return V;
}

inline IntersectionVector reduce_mod2(IntersectionVector V)
{
    V.modulus = 2;
    for (auto& [key, v] : V.entries)
        v = ((v % 2) + 2) % 2;
    return V;
}

/// Σ over unordered disjoint pairs of V mod 2.
inline int mod2_obstruction(const IntersectionVector& V)
{
    Integer s = 0;
    for (const auto& [k, v] : V.entries)
        if (k.first < k.second)
            s += v;
    return static_cast<int>(((s % 2) + 2) % 2);
}

inline int mod2_graph_obstruction(const Immersion& f)
{
    if (f.d != 1)
        throw EmbeddingError("graph obstruction needs d = 1");
    if (!generic_check(f).generic)
        throw EmbeddingError("graph obstruction needs a generic immersion");
    return mod2_obstruction(intersection_vector(f));
}

enum class Ring { integers, f2 };

struct FingerSolution {
    bool solved = false;
    /// ρ_σ per top simplex, indexed by simplices(d−1); zero off the
    /// simplices disjoint from σ.
    std::vector<Cochain> rho;
    /// On failure: weights y on the pair equations with y·A = 0 and
    /// y·V ≠ 0 (mod `modulus`, 0 meaning over Z).
    std::vector<Integer> certificate;
    Integer modulus = 0;
    std::vector<std::pair<std::size_t, std::size_t>> equations;
    /// d = 2: solvability does not decide embeddability.
    bool completeness_caveat = false;
};

/**
 * Solves V_{σ,τ} + ρ_σ(∂τ) + (−1)^d ρ_τ(∂σ) = 0 over all unordered
 * disjoint pairs σ < τ. Unknowns ρ_σ(η) range over (d−1)-simplices η
 * disjoint from σ.
 */
inline FingerSolution vankampen_solve(const SimplicialComplex& L, const IntersectionVector& V, Ring ring)
{
    if (ring == Ring::integers && V.modulus != 0)
        throw EmbeddingError("ring mismatch: vector is reduced mod " + std::to_string(V.modulus));
    if (V.tops != L.simplices(V.d))
        throw EmbeddingError("intersection vector does not belong to this complex");
    const int d = V.d;
    const auto& faces = L.simplices(d - 1);
    // Unknown index per (σ, η).
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> unknown;
    std::vector<std::pair<std::size_t, std::size_t>> unknowns;
    for (std::size_t s = 0; s < V.tops.size(); ++s)
        for (std::size_t e = 0; e < faces.size(); ++e)
            if (disjoint(V.tops[s], faces[e])) {
                unknown[{s, e}] = unknowns.size();
                unknowns.emplace_back(s, e);
            }
    FingerSolution out;
    out.completeness_caveat = d == 2;
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<Integer> rhs;
    auto add_boundary = [&](std::vector<std::int64_t>& row, std::size_t s, const Simplex& tau, std::int64_t scale) {
        for (std::size_t i = 0; i < tau.size(); ++i) {
            auto face = tau;
            face.erase(face.begin() + static_cast<long>(i));
            const auto e = *L.index_of(face);
            row[unknown.at({s, e})] += (i % 2 ? -1 : 1) * scale;
        }
    };
    for (const auto& [k, v] : V.entries) {
        if (k.first >= k.second)
            continue;
        std::vector<std::int64_t> row(unknowns.size(), 0);
        add_boundary(row, k.first, V.tops[k.second], 1);
        add_boundary(row, k.second, V.tops[k.first], d % 2 ? -1 : 1);
        rows.push_back(std::move(row));
        rhs.push_back(-v);
        out.equations.push_back(k);
    }
    out.rho.assign(V.tops.size(), Cochain(faces.size(), Integer(0)));
    auto assign = [&](const auto& x) {
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            out.rho[unknowns[u].first][unknowns[u].second] = Integer(x[u]);
    };
    if (ring == Ring::f2) {
        std::vector<std::vector<std::uint64_t>> A(rows.size(), std::vector<std::uint64_t>(unknowns.size()));
        std::vector<std::uint64_t> b(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < unknowns.size(); ++c)
                A[r][c] = to_mod(rows[r][c], 2);
            b[r] = rhs[r] % 2 != 0;
        }
        auto res = solve_mod_p(A, b, 2);
        if (res.solution) {
            out.solved = true;
            assign(*res.solution);
        } else {
            for (auto y : res.certificate)
                out.certificate.push_back(Integer(y));
            out.modulus = 2;
        }
        return out;
    }
    IntMatrix A(rows.size(), unknowns.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < unknowns.size(); ++c)
            A(r, c) = rows[r][c];
    auto res = solve_integer(A, rhs);
    if (res.solution) {
        out.solved = true;
        assign(*res.solution);
    } else {
        out.certificate = res.certificate;
        out.modulus = res.modulus;
    }
    return out;
}

/// Applies every ρ_σ of a solution as finger moves.
inline IntersectionVector apply_solution(const SimplicialComplex& L, IntersectionVector V, const FingerSolution& sol)
{
    for (std::size_t s = 0; s < sol.rho.size(); ++s)
        V = finger_move(L, std::move(V), s, sol.rho[s]);
    return V;
}

// ---------------------------------------------------------------------------
// Geometric finger moves in the plane

/// A top edge drawn as a polyline from its first to its second vertex.
using Polyline = std::vector<Point>;

/// Intersection row of a polyline σ against the straight edges τ disjoint
/// from σ, or nullopt when some crossing is not transverse and interior.
inline std::optional<std::map<std::size_t, Integer>> polyline_row(const Immersion& f, std::size_t sigma, const Polyline& path)
{
    const auto& tops = f.source.simplices(1);
    std::map<std::size_t, Integer> row;
    for (std::size_t t = 0; t < tops.size(); ++t) {
        if (!disjoint(tops[sigma], tops[t]))
            continue;
        const auto Q = detail::vertices_of(f, tops[t]);
        Integer count = 0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            auto r = detail::intersect({path[k], path[k + 1]}, Q);
            if (r.kind == detail::PairIntersection::Kind::degenerate)
                return std::nullopt;
            count += r.sign;
        }
        row[t] = count;
    }
    return row;
}

struct DetourCase {
    std::size_t sigma = 0;
    std::size_t vertex = 0;
    bool counterclockwise = true;
    Polyline path;
    std::map<std::size_t, Integer> geometric;
    std::map<std::size_t, Integer> algebraic;
    bool agree = false;
};

/**
 * Realizes a finger move for d = 1: edge σ leaves its straight path at
 * P = a + t(b − a), runs to the square of L∞-radius r around vertex v,
 * circles v once and returns along the same finger. The geometric row
 * V(σ, ·) is compared with finger_move by ±δ_v (counterclockwise = +δ_v).
 */
template <typename Rng>
DetourCase finger_detour(const Immersion& f, std::size_t sigma, std::size_t v, bool counterclockwise, Rng& rng)
{
    if (f.d != 1)
        throw EmbeddingError("finger detour needs d = 1");
    const auto& tops = f.source.simplices(1);
    const auto& e = tops.at(sigma);
    if (std::find(e.begin(), e.end(), v) != e.end())
        throw EmbeddingError("finger detour vertex lies on the edge");
    const auto base = intersection_vector(f);
    Cochain rho(f.source.num_vertices(), Integer(0));
    rho[v] = counterclockwise ? 1 : -1;
    const auto moved = finger_move(f.source, base, sigma, rho);
    const Point& a = f.coords[e[0]];
    const Point& b = f.coords[e[1]];
    const Point& c = f.coords[v];
    std::uniform_int_distribution<int> pick(1, 63);
    auto build = [&](const Point& P, const Point& u, const Rational& norm, const Rational& r) {
        const Point E{c[0] + r * u[0] / norm, c[1] + r * u[1] / norm};
        // Corners counterclockwise; side k runs from corner k to corner k+1.
        const std::vector<Point> corners{{c[0] + r, c[1] + r}, {c[0] - r, c[1] + r}, {c[0] - r, c[1] - r}, {c[0] + r, c[1] - r}};
        const Rational x = E[0] - c[0], y = E[1] - c[1];
        std::size_t side = 3;
        if (y == r && x < r)
            side = 0;
        else if (x == -r && y < r)
            side = 1;
        else if (y == -r && x > -r)
            side = 2;
        Polyline path{a, P, E};
        for (std::size_t k = 1; k <= 4; ++k)
            path.push_back(corners[(side + k) % 4]);
        if (!counterclockwise)
            std::reverse(path.begin() + 3, path.end());
        path.push_back(E);
        path.push_back(P);
        path.push_back(b);
        return path;
    };
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Rational t(pick(rng), 64);
        const Point P{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
        const Point u = detail::sub(P, c);
        const Rational ax = u[0] < 0 ? Rational(-u[0]) : u[0], ay = u[1] < 0 ? Rational(-u[1]) : u[1];
        const Rational norm = ax < ay ? ay : ax;
        if (norm == 0)
            continue;
        std::optional<std::map<std::size_t, Integer>> previous;
        for (Rational r = norm / (1 << 12); r > norm / (1 << 30); r /= 2) {
            auto path = build(P, u, norm, r);
            auto row = polyline_row(f, sigma, path);
            if (!row) {
                previous.reset();
                continue;
            }
            // Accept once two successive radii give the same row.
            if (previous && *previous == *row) {
                DetourCase out{sigma, v, counterclockwise, std::move(path), *row, {}, false};
                for (const auto& [tt, val] : *row)
                    out.algebraic[tt] = moved.at(sigma, tt);
                out.agree = out.algebraic == out.geometric;
                return out;
            }
            previous = std::move(row);
        }
    }
    throw EmbeddingError("could not place a generic finger detour");
}

// ---------------------------------------------------------------------------
// Octahedralizations

struct OctahedralImmersion {
    Immersion immersion;
    std::vector<std::size_t> projection;
    Rational epsilon;
    std::size_t halvings = 0;
};

inline bool invariance_check(const Immersion& f_ol, const std::vector<std::size_t>& projection,
                             std::optional<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>>* witness = nullptr);

namespace detail {

inline Immersion octahedral_at(const Octahedralization& O, const Immersion& f, const std::vector<Point>& X, const Rational& eps)
{
    Immersion g{f.d, O.complex, {}};
    for (std::size_t v = 0; v < f.coords.size(); ++v) {
        g.coords.push_back(f.coords[v]);
        Point q = f.coords[v];
        for (std::size_t i = 0; i < q.size(); ++i)
            q[i] += eps * X[v][i];
        g.coords.push_back(std::move(q));
    }
    return g;
}

inline Simplex project(const Simplex& s, const std::vector<std::size_t>& projection)
{
    Simplex out;
    for (auto v : s)
        out.push_back(projection[v]);
    return out;
}

} // namespace detail

/// v+ ↦ f(v), v− ↦ f(v) + εX_v, with ε halved until the immersion is
/// generic, invariant, and its intersection vector agrees at ε, ε/2, ε/4.
inline OctahedralImmersion perturbed_octahedral_immersion(const Immersion& f, const std::vector<Point>& X, Rational epsilon,
                                                          std::size_t max_halvings = 40)
{
    validate_immersion(f);
    if (X.size() != f.coords.size())
        throw EmbeddingError("perturbation needs a vector per vertex");
    for (const auto& x : X) {
        if (x.size() != f.target_dimension())
            throw EmbeddingError("perturbation vector has the wrong length");
        if (std::all_of(x.begin(), x.end(), [](const Rational& q) { return q == 0; }))
            throw EmbeddingError("perturbation vector is zero: v+ and v- would coincide");
    }
    if (epsilon <= 0)
        throw EmbeddingError("epsilon must be positive");
    if (!generic_check(f).generic)
        throw EmbeddingError("base immersion is not generic");
    const auto O = octahedralize(f.source);
    auto attempt = [&](const Rational& e) -> std::optional<IntersectionVector> {
        auto g = detail::octahedral_at(O, f, X, e);
        try {
            if (!generic_check(g).generic)
                return std::nullopt;
        } catch (const EmbeddingError&) {
            return std::nullopt;
        }
        return intersection_vector(g);
    };
    for (std::size_t h = 0; h <= max_halvings; ++h) {
        const auto v0 = attempt(epsilon);
        if (v0) {
            const auto v1 = attempt(epsilon / 2);
            const auto v2 = v1 ? attempt(epsilon / 4) : std::nullopt;
            if (v1 && v2 && *v0 == *v1 && *v1 == *v2) {
                auto g = detail::octahedral_at(O, f, X, epsilon);
                if (invariance_check(g, O.projection))
                    return {std::move(g), O.projection, epsilon, h};
            }
        }
        epsilon /= 2;
    }
    throw EmbeddingError("perturbation degenerate after " + std::to_string(max_halvings) + " halvings; try another X");
}

/// V_{σ,τ} = V_{σ,τ'} whenever σ is disjoint from τ, τ' and π(τ) = π(τ').
inline bool invariance_check(const Immersion& f_ol, const std::vector<std::size_t>& projection,
                             std::optional<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>>* witness)
{
    const auto V = intersection_vector(f_ol);
    std::map<std::pair<std::size_t, Simplex>, std::pair<std::size_t, Integer>> seen;
    for (const auto& [k, v] : V.entries) {
        const auto key = std::make_pair(k.first, detail::project(V.tops[k.second], projection));
        auto [it, fresh] = seen.emplace(key, std::make_pair(k.second, v));
        if (!fresh && it->second.second != v) {
            if (witness)
                *witness = std::make_pair(k.first, std::make_pair(it->second.first, k.second));
            return false;
        }
    }
    return true;
}

inline bool invariant(const IntersectionVector& V, const std::vector<std::size_t>& projection)
{
    std::map<std::pair<std::size_t, Simplex>, Integer> seen;
    for (const auto& [k, v] : V.entries) {
        auto [it, fresh] = seen.emplace(std::make_pair(k.first, detail::project(V.tops[k.second], projection)), v);
        if (!fresh && it->second != v)
            return false;
    }
    return true;
}

struct CohomologyTop {
    std::size_t free_rank = 0;
    std::vector<Integer> torsion;
    bool finite_odd() const
    {
        if (free_rank)
            return false;
        for (const auto& t : torsion)
            if (t % 2 == 0)
                return false;
        return true;
    }
    Integer order() const
    {
        Integer h = 1;
        for (const auto& t : torsion)
            h *= t;
        return h;
    }
};

/// H^d(L; Z) = coker(δ: C^{d−1} → C^d), δ = ∂_dᵀ.
inline CohomologyTop top_cohomology(const SimplicialComplex& L, int d)
{
    const auto& tops = L.simplices(d);
    const auto& faces = L.simplices(d - 1);
    IntMatrix delta(tops.size(), faces.size());
    for (std::size_t t = 0; t < tops.size(); ++t)
        for (std::size_t i = 0; i < tops[t].size(); ++i) {
            auto face = tops[t];
            face.erase(face.begin() + static_cast<long>(i));
            delta(t, *L.index_of(face)) = i % 2 ? -1 : 1;
        }
    CohomologyTop h;
    const auto snf = smith_normal_form(delta, false);
    h.free_rank = tops.size() - snf.divisors.size();
    for (const auto& q : snf.divisors)
        if (q > 1)
            h.torsion.push_back(q);
    return h;
}

struct OctaReduceResult {
    bool success = false;
    CohomologyTop cohomology;
    /// Odd factor applied to V (|H^d(L)| when finite and odd, else 1).
    Integer scale = 1;
    /// Finger moves in order: OL top simplex and its cochain on OL.
    std::vector<std::pair<std::size_t, Cochain>> moves;
    /// Failure: the simplex whose intersection function is no coboundary,
    /// with y·δ ≡ 0 and y·φ ≢ 0 (mod `modulus`; 0 means over Z).
    std::optional<std::size_t> failed_simplex;
    std::vector<Integer> certificate;
    Integer modulus = 0;
    std::vector<Integer> phi;
};

/**
 * For each top simplex σ₁ of OL, fiber by fiber over L, the function
 * τ ↦ V(σ₁, τ) factors as φ∘π; solving φ = δρ on L and moving σ₁ by −π*ρ
 * clears every pair involving σ₁.
 */
inline OctaReduceResult octahedral_obstruction_reduce(const SimplicialComplex& L, int d, const Octahedralization& O,
                                                      IntersectionVector V)
{
    if (V.modulus != 0)
        throw EmbeddingError("octahedral reduction works over Z");
    if (V.d != d || V.tops != O.complex.simplices(d))
        throw EmbeddingError("intersection vector does not belong to the octahedralization");
    if (!invariant(V, O.projection))
        throw EmbeddingError("invariance violated: intersection vector is not special");
    OctaReduceResult out;
    out.cohomology = top_cohomology(L, d);
    if (out.cohomology.finite_odd())
        out.scale = out.cohomology.order();
    for (auto& [k, v] : V.entries)
        v *= out.scale;

    const auto& ltops = L.simplices(d);
    const auto& lfaces = L.simplices(d - 1);
    IntMatrix delta(ltops.size(), lfaces.size());
    for (std::size_t t = 0; t < ltops.size(); ++t)
        for (std::size_t i = 0; i < ltops[t].size(); ++i) {
            auto face = ltops[t];
            face.erase(face.begin() + static_cast<long>(i));
            delta(t, *L.index_of(face)) = i % 2 ? -1 : 1;
        }
    // OL faces and their projections.
    const auto& ofaces = O.complex.simplices(d - 1);
    std::vector<std::size_t> face_image(ofaces.size());
    for (std::size_t e = 0; e < ofaces.size(); ++e)
        face_image[e] = *L.index_of(detail::project(ofaces[e], O.projection));
    // Fibers in the order of L's top simplices.
    std::vector<std::vector<std::size_t>> fibers(ltops.size());
    for (std::size_t s = 0; s < V.tops.size(); ++s)
        fibers[*L.index_of(detail::project(V.tops[s], O.projection)) - 0].push_back(s);
    auto ltop_index = [&](const Simplex& s) {
        const auto it = std::lower_bound(ltops.begin(), ltops.end(), s);
        return static_cast<std::size_t>(it - ltops.begin());
    };
    for (const auto& fiber : fibers)
        for (auto s1 : fiber) {
            std::vector<Integer> phi(ltops.size(), Integer(0));
            std::vector<bool> set(ltops.size(), false);
            for (std::size_t t = 0; t < V.tops.size(); ++t) {
                auto it = V.entries.find({s1, t});
                if (it == V.entries.end())
                    continue;
                const auto eta = ltop_index(detail::project(V.tops[t], O.projection));
                if (set[eta] && phi[eta] != it->second)
                    throw std::logic_error("intersection function does not factor through the projection");
                phi[eta] = it->second;
                set[eta] = true;
            }
            auto res = solve_integer(delta, phi);
            if (!res.solution) {
                out.failed_simplex = s1;
                out.certificate = res.certificate;
                out.modulus = res.modulus;
                out.phi = phi;
                return out;
            }
            Cochain rho(ofaces.size(), Integer(0));
            for (std::size_t e = 0; e < ofaces.size(); ++e)
                rho[e] = -(*res.solution)[face_image[e]];
            V = finger_move(O.complex, std::move(V), s1, rho);
            out.moves.emplace_back(s1, std::move(rho));
        }
    if (!V.is_zero())
        throw std::logic_error("octahedral reduction left nonzero intersections");
    out.success = true;
    return out;
}

} // namespace homgrow
