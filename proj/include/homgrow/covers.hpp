// Finite covers: permutation covers of cell complexes, fundamental group
// presentations, cover enumeration, quotients of right-angled buildings of
// graph products, and mapping tori.
#pragma once

#include "cell_complex.hpp"
#include "complexes.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace homgrow {

struct CoverError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Permutations of {0, ..., n-1}

using Perm = std::vector<std::uint32_t>;

inline Perm identity_perm(std::size_t n)
{
    Perm p(n);
    std::iota(p.begin(), p.end(), 0u);
    return p;
}

inline bool is_identity(const Perm& p)
{
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i)
            return false;
    return true;
}

/// Apply p, then q.
inline Perm then(const Perm& p, const Perm& q)
{
    Perm r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        r[i] = q[p[i]];
    return r;
}

inline Perm inverse(const Perm& p)
{
    Perm r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        r[p[i]] = static_cast<std::uint32_t>(i);
    return r;
}

inline Perm cyclic_shift(std::size_t n, std::uint64_t k)
{
    Perm p(n);
    for (std::size_t i = 0; i < n; ++i)
        p[i] = static_cast<std::uint32_t>((i + k) % n);
    return p;
}

/// 1-based cycle notation, fixed points omitted; identity prints as "()".
inline std::string cycle_notation(const Perm& p)
{
    std::string out;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i] || p[i] == i)
            continue;
        out += '(';
        for (std::size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            if (j != i)
                out += ' ';
            out += std::to_string(j + 1);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

inline Perm parse_cycles(const std::string& text, std::size_t n)
{
    Perm p = identity_perm(n);
    std::vector<bool> used(n, false);
    std::size_t i = 0;
    auto fail = [&](const std::string& why) { return CoverError("cycle notation '" + text + "': " + why); };
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] != '(')
            throw fail("expected '('");
        const auto close = text.find(')', i);
        if (close == std::string::npos)
            throw fail("unbalanced parenthesis");
        std::istringstream in(text.substr(i + 1, close - i - 1));
        std::vector<std::size_t> cycle;
        std::string tok;
        while (in >> tok) {
            std::size_t pos = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(tok, &pos);
            } catch (const std::exception&) {
                throw fail("bad point '" + tok + "'");
            }
            if (pos != tok.size() || v < 1 || v > n)
                throw fail("point out of range");
            if (used[v - 1])
                throw fail("point repeated");
            used[v - 1] = true;
            cycle.push_back(v - 1);
        }
        for (std::size_t j = 0; j < cycle.size(); ++j)
            p[cycle[j]] = static_cast<std::uint32_t>(cycle[(j + 1) % cycle.size()]);
        i = close + 1;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Fundamental group presentations

/// Generators are the edges outside a breadth-first spanning tree grown
/// from vertex 0; relators are 2-cell words with tree edges deleted.
struct Presentation {
    std::vector<std::size_t> generator_edges;
    /// Generator index per edge, or -1 for tree edges.
    std::vector<std::int64_t> generator_of_edge;
    std::vector<EdgePath> relators; // letters (generator, ±1)
};

inline Presentation pi1_presentation(const CellComplex& X)
{
    const std::size_t n = X.count(0);
    if (n == 0)
        throw CoverError("fundamental group of the empty complex");
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t e = 0; e < X.count(1); ++e) {
        incident[X.tail(e)].push_back(e);
        if (X.head(e) != X.tail(e))
            incident[X.head(e)].push_back(e);
    }
    std::vector<bool> seen(n, false), tree(X.count(1), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto e : incident[v]) {
            const auto w = X.tail(e) == v ? X.head(e) : X.tail(e);
            if (!seen[w]) {
                seen[w] = true;
                tree[e] = true;
                ++reached;
                queue.push_back(w);
            }
        }
    }
    if (reached != n)
        throw CoverError("fundamental group presentation needs a connected complex");
    Presentation P;
    P.generator_of_edge.assign(X.count(1), -1);
    for (std::size_t e = 0; e < X.count(1); ++e)
        if (!tree[e]) {
            P.generator_of_edge[e] = static_cast<std::int64_t>(P.generator_edges.size());
            P.generator_edges.push_back(e);
        }
    for (const auto& c : X.cells(2)) {
        EdgePath w;
        for (const auto& s : c.word)
            if (P.generator_of_edge[s.edge] >= 0)
                w.push_back({static_cast<std::size_t>(P.generator_of_edge[s.edge]), s.dir});
        P.relators.push_back(std::move(w));
    }
    return P;
}

// ---------------------------------------------------------------------------
// Covers

/// A degree-n cover given by one permutation per edge: the lift of edge e
/// starting on sheet i ends on sheet perm[e][i].
struct CoverMap {
    std::size_t degree = 1;
    std::vector<Perm> edge_perms;
    std::string id;

    static CoverMap trivial(const CellComplex& X, std::size_t n, std::string id = "trivial")
    {
        return {n, std::vector<Perm>(X.count(1), identity_perm(n)), std::move(id)};
    }

    /// Tree edges act trivially; generator g acts by gens[g].
    static CoverMap from_generators(const CellComplex& X, const Presentation& P, const std::vector<Perm>& gens,
                                    std::string id = {})
    {
        if (gens.size() != P.generator_edges.size())
            throw CoverError("one permutation per generator required");
        std::size_t n = gens.empty() ? 1 : gens[0].size();
        for (const auto& g : gens)
            if (g.size() != n)
                throw CoverError("generator permutations of different degrees");
        CoverMap c = trivial(X, n, std::move(id));
        for (std::size_t g = 0; g < gens.size(); ++g)
            c.edge_perms[P.generator_edges[g]] = gens[g];
        return c;
    }

    /// Cyclic cover of degree n from integer edge labels z: the edge e
    /// shifts sheets by z(e) mod n. z must be a cocycle mod n.
    static CoverMap from_cocycle(const CellComplex& X, const std::vector<std::int64_t>& z, std::size_t n, std::string id = {})
    {
        if (z.size() != X.count(1))
            throw CoverError("cocycle needs one value per edge");
        CoverMap c{n, {}, std::move(id)};
        for (auto v : z) {
            const auto k = static_cast<std::uint64_t>(((v % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) % static_cast<std::int64_t>(n));
            c.edge_perms.push_back(cyclic_shift(n, k));
        }
        return c;
    }
};

/// Sheet reached by lifting `path` from `sheet`.
inline std::uint32_t transport(const CoverMap& c, const EdgePath& path, std::uint32_t sheet)
{
    for (const auto& s : path)
        sheet = s.dir > 0 ? c.edge_perms[s.edge][sheet] : inverse(c.edge_perms[s.edge])[sheet];
    return sheet;
}

/// Checks every 2-cell attaching word lifts to closed loops.
inline std::optional<std::size_t> failing_relator(const CellComplex& X, const CoverMap& c)
{
    std::vector<Perm> inv;
    inv.reserve(c.edge_perms.size());
    for (const auto& p : c.edge_perms)
        inv.push_back(inverse(p));
    for (std::size_t f = 0; f < X.count(2); ++f) {
        const auto& word = X.cell(2, f).word;
        for (std::uint32_t i = 0; i < c.degree; ++i) {
            std::uint32_t s = i;
            for (const auto& step : word)
                s = step.dir > 0 ? c.edge_perms[step.edge][s] : inv[step.edge][s];
            if (s != i)
                return f;
        }
    }
    return std::nullopt;
}

inline void validate_cover(const CellComplex& X, const CoverMap& c)
{
    if (c.edge_perms.size() != X.count(1))
        throw CoverError("cover has " + std::to_string(c.edge_perms.size()) + " edge permutations, complex has " +
                         std::to_string(X.count(1)) + " edges");
    for (const auto& p : c.edge_perms) {
        if (p.size() != c.degree)
            throw CoverError("edge permutation of the wrong degree");
        std::vector<bool> hit(c.degree, false);
        for (auto v : p) {
            if (v >= c.degree || hit[v])
                throw CoverError("edge permutation is not a bijection");
            hit[v] = true;
        }
    }
    if (auto f = failing_relator(X, c))
        throw CoverError("relator check failure on 2-cell " + std::to_string(*f));
}

/// The cover X' → X. Cell (c, i) has index c·n + i and lies over c; its
/// base vertex is (base(c), i) and every boundary entry is lifted along its
/// edge path.
inline CellComplex build_cover(const CellComplex& X, const CoverMap& c)
{
    validate_cover(X, c);
    const std::size_t n = c.degree;
    std::vector<Perm> inv;
    for (const auto& p : c.edge_perms)
        inv.push_back(inverse(p));
    auto lift = [&](const EdgePath& path, std::uint32_t sheet, EdgePath& out) {
        out.clear();
        for (const auto& s : path) {
            if (s.dir > 0) {
                out.push_back({s.edge * n + sheet, +1});
                sheet = c.edge_perms[s.edge][sheet];
            } else {
                sheet = inv[s.edge][sheet];
                out.push_back({s.edge * n + sheet, -1});
            }
        }
        return sheet;
    };
    CellComplex Y;
    for (std::size_t v = 0; v < X.count(0); ++v)
        for (std::uint32_t i = 0; i < n; ++i)
            Y.set_projection(0, Y.add_vertex(), X.cell(0, v).projection);
    for (std::size_t e = 0; e < X.count(1); ++e)
        for (std::uint32_t i = 0; i < n; ++i)
            Y.set_projection(1, Y.add_edge(X.tail(e) * n + i, X.head(e) * n + c.edge_perms[e][i]), X.cell(1, e).projection);
    EdgePath lifted;
    for (std::size_t f = 0; f < X.count(2); ++f) {
        const auto& cell = X.cell(2, f);
        for (std::uint32_t i = 0; i < n; ++i) {
            lift(cell.word, i, lifted);
            Y.set_projection(2, Y.add_face(cell.base_vertex * n + i, lifted), cell.projection);
        }
    }
    for (int k = 3; k <= X.dimension(); ++k)
        for (std::size_t ci = 0; ci < X.count(k); ++ci) {
            const auto& cell = X.cell(k, ci);
            for (std::uint32_t i = 0; i < n; ++i) {
                std::vector<BoundaryEntry> entries;
                for (const auto& e : cell.boundary) {
                    EdgePath p;
                    const auto sheet = lift(e.path, i, p);
                    entries.push_back({e.face * n + sheet, e.coeff, std::move(p)});
                }
                Y.set_projection(k, Y.add_cell(k, cell.base_vertex * n + i, std::move(entries)), cell.projection);
            }
        }
    Y.set_degree(X.degree() * n);
    Y.finalize();
    return Y;
}

/// Number of connected components of the cover without building it.
inline std::size_t cover_components(const CellComplex& X, const CoverMap& c)
{
    const std::size_t n = c.degree;
    std::vector<std::size_t> parent(X.count(0) * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t e = 0; e < X.count(1); ++e)
        for (std::size_t i = 0; i < n; ++i)
            parent[find(X.tail(e) * n + i)] = find(X.head(e) * n + c.edge_perms[e][i]);
    std::size_t roots = 0;
    for (std::size_t v = 0; v < parent.size(); ++v)
        roots += find(v) == v ? 1 : 0;
    return roots;
}

struct RestrictedCover {
    ExtractedSubcomplex sub;
    CoverMap cover;
    std::size_t components = 0;
};

/// Pullback of the cover to a subcomplex A: A' = preimage of A.
inline RestrictedCover restrict_cover(const CellComplex& X, const CoverMap& c, const Subcomplex& A)
{
    if (!A.is_closed(X))
        throw CoverError("restriction target is not a subcomplex");
    RestrictedCover r{extract_subcomplex(X, A), {}, 0};
    r.cover.degree = c.degree;
    r.cover.id = c.id;
    if (r.sub.old_of_new.size() > 1)
        for (auto old : r.sub.old_of_new[1])
            r.cover.edge_perms.push_back(c.edge_perms[old]);
    r.components = cover_components(r.sub.complex, r.cover);
    return r;
}

/// Re-labels sheets so that edges of the breadth-first tree act trivially.
/// The result describes an isomorphic cover.
inline CoverMap tree_normalized(const CellComplex& X, const CoverMap& c)
{
    const auto P = pi1_presentation(X);
    const std::size_t n = c.degree;
    // T[v]: sheet at root ↦ sheet at v along tree paths.
    std::vector<Perm> T(X.count(0));
    std::vector<bool> done(X.count(0), false);
    T[0] = identity_perm(n);
    done[0] = true;
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t e = 0; e < X.count(1); ++e) {
            if (P.generator_of_edge[e] >= 0)
                continue;
            const auto t = X.tail(e), h = X.head(e);
            if (done[t] && !done[h]) {
                T[h] = then(T[t], c.edge_perms[e]);
                done[h] = progress = true;
            } else if (done[h] && !done[t]) {
                T[t] = then(T[h], inverse(c.edge_perms[e]));
                done[t] = progress = true;
            }
        }
    }
    CoverMap out{n, {}, c.id};
    for (std::size_t e = 0; e < X.count(1); ++e)
        out.edge_perms.push_back(then(then(T[X.tail(e)], c.edge_perms[e]), inverse(T[X.head(e)])));
    return out;
}

/// Whether `upper` factors through `lower` (both covers of a connected X),
/// i.e. an equivariant map of fibers exists.
inline bool covers_over(const CellComplex& X, const CoverMap& upper, const CoverMap& lower)
{
    if (lower.degree == 0 || upper.degree % lower.degree != 0)
        return false;
    const auto u = tree_normalized(X, upper);
    const auto l = tree_normalized(X, lower);
    const auto P = pi1_presentation(X);
    std::vector<std::int64_t> f(u.degree, -1);
    for (std::uint32_t start = 0; start < u.degree; ++start) {
        if (f[start] >= 0)
            continue;
        bool placed = false;
        for (std::uint32_t target = 0; target < l.degree && !placed; ++target) {
            std::vector<std::int64_t> g = f;
            std::deque<std::uint32_t> queue{start};
            g[start] = target;
            bool ok = true;
            while (!queue.empty() && ok) {
                const auto i = queue.front();
                queue.pop_front();
                for (auto e : P.generator_edges) {
                    for (int dir : {1, -1}) {
                        const auto j = dir > 0 ? u.edge_perms[e][i] : inverse(u.edge_perms[e])[i];
                        const auto fj = dir > 0 ? l.edge_perms[e][static_cast<std::size_t>(g[i])]
                                                : inverse(l.edge_perms[e])[static_cast<std::size_t>(g[i])];
                        if (g[j] < 0) {
                            g[j] = fj;
                            queue.push_back(j);
                        } else if (g[j] != fj) {
                            ok = false;
                        }
                    }
                }
            }
            if (ok) {
                f = std::move(g);
                placed = true;
            }
        }
        if (!placed)
            return false;
    }
    return true;
}

struct EnumeratedCover {
    CoverMap cover;
    std::vector<Perm> generators;
    bool transitive = false;
};

namespace detail {

/// Whether `gens` is lexicographically minimal among its simultaneous
/// conjugates.
inline bool is_canonical(const std::vector<Perm>& gens, std::size_t n)
{
    Perm sigma = identity_perm(n);
    Perm sigma_inv(n);
    while (std::next_permutation(sigma.begin(), sigma.end())) {
        for (std::size_t i = 0; i < n; ++i)
            sigma_inv[sigma[i]] = static_cast<std::uint32_t>(i);
        // Conjugate σ g σ⁻¹ maps σ(i) ↦ σ(g(i)); compare letter by letter.
        for (const auto& g : gens) {
            int cmp = 0;
            for (std::size_t x = 0; x < n && cmp == 0; ++x) {
                const auto cx = sigma[g[sigma_inv[x]]];
                cmp = cx < g[x] ? -1 : (cx > g[x] ? 1 : 0);
            }
            if (cmp < 0)
                return false;
            if (cmp > 0)
                break;
        }
    }
    return true;
}

inline bool satisfies(const std::vector<Perm>& gens, const std::vector<EdgePath>& relators, std::size_t n)
{
    for (const auto& r : relators)
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint32_t s = i;
            for (const auto& letter : r)
                s = letter.dir > 0 ? gens[letter.edge][s] : inverse(gens[letter.edge])[s];
            if (s != i)
                return false;
        }
    return true;
}

inline bool transitive(const std::vector<Perm>& gens, std::size_t n)
{
    std::vector<bool> seen(n, false);
    std::deque<std::uint32_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        auto i = queue.front();
        queue.pop_front();
        for (const auto& g : gens)
            for (auto j : {g[i], inverse(g)[i]})
                if (!seen[j]) {
                    seen[j] = true;
                    ++count;
                    queue.push_back(j);
                }
    }
    return count == n;
}

} // namespace detail

/// All permutation representations of π₁(X) of degrees min_degree..max_degree
/// up to simultaneous conjugacy; ordered by degree, then lexicographically.
inline std::vector<EnumeratedCover> enumerate_covers(const CellComplex& X, std::size_t max_degree, std::size_t min_degree = 1)
{
    if (max_degree > 6)
        throw CoverError("enumerate_covers is limited to degree 6");
    const auto P = pi1_presentation(X);
    const std::size_t g = P.generator_edges.size();
    std::vector<EnumeratedCover> out;
    for (std::size_t n = std::max<std::size_t>(min_degree, 1); n <= max_degree; ++n) {
        std::vector<Perm> all;
        Perm p = identity_perm(n);
        do {
            all.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        std::vector<std::size_t> idx(g, 0);
        std::vector<Perm> gens(g, all[0]);
        for (;;) {
            for (std::size_t i = 0; i < g; ++i)
                gens[i] = all[idx[i]];
            if (detail::satisfies(gens, P.relators, n) && detail::is_canonical(gens, n)) {
                EnumeratedCover ec;
                ec.generators = gens;
                ec.transitive = detail::transitive(gens, n);
                std::string id = "deg" + std::to_string(n);
                for (const auto& q : gens)
                    id += ":" + cycle_notation(q);
                ec.cover = CoverMap::from_generators(X, P, gens, id);
                out.push_back(std::move(ec));
            }
            bool exhausted = true;
            for (std::size_t pos = g; pos-- > 0;) {
                if (++idx[pos] < all.size()) {
                    exhausted = false;
                    break;
                }
                idx[pos] = 0;
            }
            if (exhausted)
                break;
        }
    }
    return out;
}

/// Random cyclic cover of prime degree p from a uniformly random F_p
/// 1-cocycle (a kernel vector of ∂₂ᵀ).
template <typename Rng>
CoverMap random_cocycle_cover(const CellComplex& X, std::uint64_t p, Rng& rng, std::string id = {})
{
    const auto z = random_kernel_vector(X.boundary_matrix(2).transpose(), p, rng);
    std::vector<std::int64_t> values(z.begin(), z.end());
    return CoverMap::from_cocycle(X, values, p, std::move(id));
}

// ---------------------------------------------------------------------------
// Graph products and building quotients

struct GraphProductSpec {
    SimplicialComplex L;
    std::vector<std::uint64_t> orders; // m_v ≥ 2 per vertex of L

    void validate() const
    {
        if (!is_flag(L).flag)
            throw CoverError("graph product needs a flag complex");
        if (orders.size() != L.num_vertices())
            throw CoverError("graph product needs one order per vertex");
        for (auto m : orders)
            if (m < 2)
                throw CoverError("vertex group orders must be at least 2");
    }

    std::uint64_t min_order() const { return orders.empty() ? 0 : *std::min_element(orders.begin(), orders.end()); }
};

/// Divisors k_v | m_v defining G_L → ∏ ℤ/k_v.
struct QuotientTarget {
    std::vector<std::uint64_t> divisors;

    static QuotientTarget full(const GraphProductSpec& spec) { return {spec.orders}; }

    void validate(const GraphProductSpec& spec) const
    {
        if (divisors.size() != spec.orders.size())
            throw CoverError("quotient target needs one divisor per vertex");
        for (std::size_t v = 0; v < divisors.size(); ++v)
            if (divisors[v] < 1 || spec.orders[v] % divisors[v] != 0)
                throw CoverError("divisibility violation at vertex " + spec.L.name(v) + ": " + std::to_string(divisors[v]) +
                                 " does not divide " + std::to_string(spec.orders[v]));
    }

    std::uint64_t order() const
    {
        std::uint64_t n = 1;
        for (auto k : divisors)
            n *= k;
        return n;
    }

    std::string describe() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < divisors.size(); ++i)
            s += (i ? "," : "") + std::to_string(divisors[i]);
        return s + ")";
    }
};

/// All divisor targets ordered by degree, then lexicographically.
inline std::vector<QuotientTarget> divisor_lattice(const GraphProductSpec& spec)
{
    std::vector<std::vector<std::uint64_t>> options;
    for (auto m : spec.orders) {
        std::vector<std::uint64_t> ds;
        for (std::uint64_t d = 1; d <= m; ++d)
            if (m % d == 0)
                ds.push_back(d);
        options.push_back(ds);
    }
    std::vector<QuotientTarget> out{{{}}};
    for (const auto& ds : options) {
        std::vector<QuotientTarget> next;
        for (const auto& t : out)
            for (auto d : ds) {
                auto u = t;
                u.divisors.push_back(d);
                next.push_back(u);
            }
        out = std::move(next);
    }
    std::stable_sort(out.begin(), out.end(), [](const QuotientTarget& a, const QuotientTarget& b) {
        if (a.order() != b.order())
            return a.order() < b.order();
        return a.divisors < b.divisors;
    });
    return out;
}

/// Divisibility order on targets: the quotient for `a` covers that for `b`.
inline bool refines(const QuotientTarget& a, const QuotientTarget& b)
{
    for (std::size_t v = 0; v < a.divisors.size(); ++v)
        if (a.divisors[v] % b.divisors[v] != 0)
            return false;
    return true;
}

/**
 * Quotient of the right-angled building of G_L by the kernel of
 * G_L → Q = ∏ ℤ/k_v. Cells over the chamber cube (σ,τ) are the cosets
 * Q/H_σ, H_σ generated by the factors of σ; the cell over (σ,τ) in coset
 * qH_σ has its x_s = 1 face in the coset qH_{σ+s}.
 */
inline CellComplex building_quotient(const GraphProductSpec& spec, const QuotientTarget& target)
{
    spec.validate();
    target.validate(spec);
    const CubicalChamber K = davis_chamber(spec.L);
    const auto& cubes = K.cubes();
    const std::size_t nv = spec.L.num_vertices();
    const auto& k = target.divisors;

    // Mixed-radix index of the coset representative with σ-coordinates
    // zeroed, among representatives of Q/H_σ.
    auto coset_count = [&](const Simplex& sigma) {
        std::uint64_t n = target.order();
        for (auto v : sigma)
            n /= k[v];
        return n;
    };
    auto coset_index = [&](const std::vector<std::uint64_t>& q, const Simplex& sigma) {
        std::uint64_t idx = 0;
        for (std::size_t v = 0; v < nv; ++v) {
            if (std::binary_search(sigma.begin(), sigma.end(), v))
                continue;
            idx = idx * k[v] + q[v];
        }
        return idx;
    };
    auto coset_reps = [&](const Simplex& sigma) {
        std::vector<std::vector<std::uint64_t>> reps{std::vector<std::uint64_t>(nv, 0)};
        for (std::size_t v = 0; v < nv; ++v) {
            if (std::binary_search(sigma.begin(), sigma.end(), v))
                continue;
            std::vector<std::vector<std::uint64_t>> next;
            for (const auto& r : reps)
                for (std::uint64_t x = 0; x < k[v]; ++x) {
                    auto s = r;
                    s[v] = x;
                    next.push_back(std::move(s));
                }
            reps = std::move(next);
        }
        return reps; // ordered consistently with coset_index
    };

    std::vector<std::size_t> offset(cubes.size());
    std::vector<std::size_t> level_count;
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        const auto d = cubes[c].dimension();
        if (level_count.size() <= d)
            level_count.resize(d + 1, 0);
        offset[c] = level_count[d];
        level_count[d] += coset_count(cubes[c].sigma);
    }
    auto cell_of = [&](const Simplex& sigma, const Simplex& tau, const std::vector<std::uint64_t>& q) {
        const auto c = K.index_of({sigma, tau});
        return offset[c] + coset_index(q, sigma);
    };
    auto with = [](Simplex s, std::size_t v) {
        s.insert(std::upper_bound(s.begin(), s.end(), v), v);
        return s;
    };
    auto without = [](Simplex s, std::size_t v) {
        s.erase(std::find(s.begin(), s.end(), v));
        return s;
    };

    CellComplex X;
    for (std::size_t c = 0; c < cubes.size(); ++c) {
        const auto& [sigma, tau] = cubes[c];
        const auto dirs = cubes[c].directions();
        const auto d = dirs.size();
        for (const auto& q : coset_reps(sigma)) {
            const std::size_t base = cell_of(sigma, sigma, q);
            std::size_t added;
            if (d == 0) {
                added = X.add_vertex();
            } else if (d == 1) {
                const auto s = dirs[0];
                added = X.add_edge(base, cell_of(with(sigma, s), tau, q));
            } else if (d == 2) {
                const auto s = dirs[0], t = dirs[1];
                added = X.add_face(base, {{cell_of(sigma, without(tau, t), q), +1},
                                          {cell_of(with(sigma, s), tau, q), +1},
                                          {cell_of(with(sigma, t), tau, q), -1},
                                          {cell_of(sigma, without(tau, s), q), -1}});
            } else {
                std::vector<BoundaryEntry> entries;
                for (std::size_t i = 0; i < d; ++i) {
                    const auto s = dirs[i];
                    const std::int64_t sgn = (i % 2) ? -1 : 1;
                    entries.push_back({cell_of(with(sigma, s), tau, q), sgn, {{cell_of(sigma, with(sigma, s), q), +1}}});
                    entries.push_back({cell_of(sigma, without(tau, s), q), -sgn, {}});
                }
                added = X.add_cell(static_cast<int>(d), base, std::move(entries));
            }
            X.set_projection(static_cast<int>(d), added, c);
        }
    }
    X.set_degree(target.order());
    X.finalize();
    return X;
}

// ---------------------------------------------------------------------------
// Mapping tori

struct MappingTorus {
    CellComplex complex;
    /// 1-cocycle counting passages through the gluing; its cyclic covers
    /// unwrap the circle direction.
    std::vector<std::int64_t> time_cocycle;
};

/**
 * Mapping torus of a simplicial self-map f (vertex map) of K. The prism
 * K × [0,1] is cut into staircase simplices (A at level 0, B at level 1,
 * max A ≤ min B); level-1 simplices are glued to their f-images. f must be
 * simplicial and injective on every simplex.
 */
inline MappingTorus mapping_torus(const SimplicialComplex& K, const std::vector<std::size_t>& f)
{
    const std::size_t n = K.num_vertices();
    if (f.size() != n)
        throw CoverError("mapping torus: vertex map has the wrong length");
    for (auto v : f)
        if (v >= n)
            throw CoverError("mapping torus: vertex map leaves the complex");
    for (int d = 1; d <= K.dimension(); ++d)
        for (const auto& s : K.simplices(d)) {
            Simplex img;
            for (auto v : s)
                img.push_back(f[v]);
            std::sort(img.begin(), img.end());
            if (std::adjacent_find(img.begin(), img.end()) != img.end())
                throw CoverError("mapping torus: f is not injective on simplex {" + K.simplex_name(s) + "}");
            if (!K.contains(img))
                throw CoverError("f not simplicial: image of {" + K.simplex_name(s) + "} is not a simplex");
        }
    // Point p = 2v + level.
    auto canon = [&](const std::vector<std::size_t>& raw) {
        bool all_upper = std::all_of(raw.begin(), raw.end(), [](std::size_t p) { return p % 2 == 1; });
        if (!all_upper)
            return Canonical{raw, 1, 0};
        std::vector<std::pair<std::size_t, std::size_t>> img;
        for (std::size_t i = 0; i < raw.size(); ++i)
            img.emplace_back(f[raw[i] / 2], i);
        // Sort and record the permutation parity.
        int sign = 1;
        for (std::size_t i = 0; i < img.size(); ++i)
            for (std::size_t j = 0; j + 1 < img.size() - i; ++j)
                if (img[j].first > img[j + 1].first) {
                    std::swap(img[j], img[j + 1]);
                    sign = -sign;
                }
        Canonical c;
        for (const auto& [v, i] : img)
            c.key.push_back(2 * v);
        c.sign = sign;
        c.first_from = img[0].second;
        return c;
    };
    std::vector<std::vector<std::size_t>> tops;
    for (const auto& s : K.maximal_simplices())
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<std::size_t> cell;
            for (std::size_t j = 0; j <= i; ++j)
                cell.push_back(2 * s[j]);
            for (std::size_t j = i; j < s.size(); ++j)
                cell.push_back(2 * s[j] + 1);
            tops.push_back(std::move(cell));
        }
    auto name = [&](const std::vector<std::size_t>& key) {
        std::string out;
        for (std::size_t i = 0; i < key.size(); ++i)
            out += (i ? "," : "") + K.name(key[i] / 2) + (key[i] % 2 ? "'" : "");
        return out;
    };
    std::vector<std::vector<std::vector<std::size_t>>> keys;
    MappingTorus T{delta_complex(tops, canon, name, &keys), {}};
    if (keys.size() > 1)
        for (const auto& e : keys[1])
            T.time_cocycle.push_back((e[0] % 2 == 0 && e[1] % 2 == 1) ? 1 : 0);
    return T;
}

/// Degree-m cover of a mapping torus unwrapping the circle direction.
inline CoverMap torus_direction_cover(const MappingTorus& T, std::size_t m)
{
    return CoverMap::from_cocycle(T.complex, T.time_cocycle, m, "fiber" + std::to_string(m));
}

} // namespace homgrow
