// Finite abstract simplicial complexes, flag/no-square checks, links, full
// subcomplexes, barycentric subdivision, octahedralization and the cubical
// Davis chamber of a flag complex.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace homgrow {

/// Sorted list of dense vertex indices.
using Simplex = std::vector<std::size_t>;

struct ComplexError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/**
 * Downward-closed set of vertex sets over named vertices.
 *
 * Vertices carry a total order (their dense index), which orients every
 * simplex. Simplices of each dimension are kept sorted lexicographically so
 * iteration order is deterministic. Immutable once built.
 */
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Builds the downward closure of `maximal`. Every name in `names` is a
    /// vertex even if it appears in no simplex.
    SimplicialComplex(std::vector<std::string> names, const std::vector<Simplex>& maximal) : names_(std::move(names))
    {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second)
                throw ComplexError("duplicate vertex identifier '" + names_[i] + "'");
        }
        std::set<Simplex> all;
        for (std::size_t v = 0; v < names_.size(); ++v)
            all.insert(Simplex{v});
        for (Simplex s : maximal) {
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end())
                throw ComplexError("duplicate vertex within one simplex");
            if (s.empty())
                continue;
            if (s.back() >= names_.size())
                throw ComplexError("simplex references an unknown vertex index");
            if (s.size() > 24)
                throw ComplexError("simplex dimension too large for closure");
            if (all.count(s))
                continue;
            const std::size_t n = s.size();
            for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                Simplex face;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        face.push_back(s[i]);
                all.insert(std::move(face));
            }
        }
        for (const auto& s : all) {
            const std::size_t k = s.size() - 1;
            if (by_dim_.size() <= k)
                by_dim_.resize(k + 1);
            by_dim_[k].push_back(s);
        }
        for (auto& level : by_dim_)
            std::sort(level.begin(), level.end());
        positions_.resize(by_dim_.size());
        for (std::size_t k = 0; k < by_dim_.size(); ++k)
            for (std::size_t i = 0; i < by_dim_[k].size(); ++i)
                positions_[k].emplace(by_dim_[k][i], i);
    }

    /// Builds from named maximal simplices; vertex order is order of first
    /// appearance.
    static SimplicialComplex from_names(const std::vector<std::vector<std::string>>& maximal,
                                        std::vector<std::string> extra_vertices = {})
    {
        std::vector<std::string> names;
        std::unordered_map<std::string, std::size_t> seen;
        auto intern = [&](const std::string& n) {
            auto [it, fresh] = seen.emplace(n, names.size());
            if (fresh)
                names.push_back(n);
            return it->second;
        };
        for (const auto& v : extra_vertices)
            intern(v);
        std::vector<Simplex> simplices;
        for (const auto& named : maximal) {
            Simplex s;
            for (const auto& n : named)
                s.push_back(intern(n));
            simplices.push_back(std::move(s));
        }
        return SimplicialComplex(std::move(names), simplices);
    }

    std::size_t num_vertices() const { return names_.size(); }
    const std::vector<std::string>& vertex_names() const { return names_; }
    const std::string& name(std::size_t v) const { return names_.at(v); }

    std::size_t vertex_index(const std::string& name) const
    {
        auto it = index_.find(name);
        if (it == index_.end())
            throw ComplexError("unknown vertex '" + name + "'");
        return it->second;
    }

    /// -1 for the empty complex.
    int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }

    const std::vector<Simplex>& simplices(int k) const
    {
        static const std::vector<Simplex> none;
        if (k < 0 || k >= static_cast<int>(by_dim_.size()))
            return none;
        return by_dim_[static_cast<std::size_t>(k)];
    }

    std::size_t count(int k) const { return simplices(k).size(); }

    std::vector<std::size_t> f_vector() const
    {
        std::vector<std::size_t> f;
        for (const auto& level : by_dim_)
            f.push_back(level.size());
        return f;
    }

    std::size_t total_simplices() const
    {
        std::size_t n = 0;
        for (const auto& level : by_dim_)
            n += level.size();
        return n;
    }

    bool contains(const Simplex& s) const
    {
        if (s.empty())
            return true;
        const std::size_t k = s.size() - 1;
        return k < positions_.size() && positions_[k].count(s) > 0;
    }

    std::optional<std::size_t> index_of(const Simplex& s) const
    {
        if (s.empty() || s.size() > positions_.size())
            return std::nullopt;
        const auto& level = positions_[s.size() - 1];
        auto it = level.find(s);
        if (it == level.end())
            return std::nullopt;
        return it->second;
    }

    bool adjacent(std::size_t a, std::size_t b) const
    {
        if (a == b)
            return false;
        return contains(a < b ? Simplex{a, b} : Simplex{b, a});
    }

    std::vector<std::vector<std::size_t>> adjacency() const
    {
        std::vector<std::vector<std::size_t>> adj(names_.size());
        for (const auto& e : simplices(1)) {
            adj[e[0]].push_back(e[1]);
            adj[e[1]].push_back(e[0]);
        }
        for (auto& row : adj)
            std::sort(row.begin(), row.end());
        return adj;
    }

    /// Simplices not properly contained in another simplex.
    std::vector<Simplex> maximal_simplices() const
    {
        std::vector<Simplex> result;
        for (int k = 0; k <= dimension(); ++k) {
            for (const auto& s : simplices(k)) {
                bool maximal = true;
                for (std::size_t v = 0; v < names_.size() && maximal; ++v) {
                    if (std::binary_search(s.begin(), s.end(), v))
                        continue;
                    Simplex t = s;
                    t.insert(std::upper_bound(t.begin(), t.end(), v), v);
                    if (contains(t))
                        maximal = false;
                }
                if (maximal)
                    result.push_back(s);
            }
        }
        return result;
    }

    std::string simplex_name(const Simplex& s) const
    {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i)
                out += ',';
            out += names_[s[i]];
        }
        return out;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return a.names_ == b.names_ && a.by_dim_ == b.by_dim_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<Simplex>> by_dim_;
    std::vector<std::map<Simplex, std::size_t>> positions_;
};

/// Closure of the given named maximal simplices.
inline SimplicialComplex build_complex(const std::vector<std::vector<std::string>>& maximal_simplices)
{
    return SimplicialComplex::from_names(maximal_simplices);
}

inline bool is_subset(const Simplex& a, const Simplex& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline bool disjoint(const Simplex& a, const Simplex& b)
{
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j)
            return false;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return true;
}

inline Simplex set_union(const Simplex& a, const Simplex& b)
{
    Simplex out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline Simplex set_difference(const Simplex& a, const Simplex& b)
{
    Simplex out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct FlagResult {
    bool flag = true;
    std::optional<Simplex> witness;
};

/// A complex is flag when every clique spans a simplex. On failure reports a
/// clique of minimal size that is not a simplex.
inline FlagResult is_flag(const SimplicialComplex& K)
{
    // Cliques are grown one vertex at a time; the first non-simplex clique
    // found at the smallest size has all of its facets in K.
    const auto adj = K.adjacency();
    for (int k = 1; k <= K.dimension(); ++k) {
        for (const auto& s : K.simplices(k)) {
            for (std::size_t v = s.back() + 1; v < K.num_vertices(); ++v) {
                bool clique = true;
                for (auto u : s)
                    if (!std::binary_search(adj[u].begin(), adj[u].end(), v)) {
                        clique = false;
                        break;
                    }
                if (!clique)
                    continue;
                Simplex t = s;
                t.push_back(v);
                if (!K.contains(t))
                    return {false, t};
            }
        }
    }
    return {};
}

struct NoSquareResult {
    bool no_square = true;
    /// Cycle a-b-c-d in traversal order.
    std::optional<std::vector<std::size_t>> witness;
};

/// Flag complexes in which every 4-cycle of the 1-skeleton has a diagonal.
inline NoSquareResult is_no_square(const SimplicialComplex& K)
{
    if (!is_flag(K).flag)
        throw ComplexError("no-square check requires a flag complex");
    const auto adj = K.adjacency();
    const std::size_t n = K.num_vertices();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = a + 1; c < n; ++c) {
            if (K.adjacent(a, c))
                continue;
            std::vector<std::size_t> common;
            std::set_intersection(adj[a].begin(), adj[a].end(), adj[c].begin(), adj[c].end(),
                                  std::back_inserter(common));
            for (std::size_t i = 0; i < common.size(); ++i)
                for (std::size_t j = i + 1; j < common.size(); ++j)
                    if (!K.adjacent(common[i], common[j]))
                        return {false, std::vector<std::size_t>{a, common[i], c, common[j]}};
        }
    }
    return {};
}

namespace detail {

/// Restricts `K` to the given vertices (kept in K's order) with a simplex
/// predicate applied to the surviving maximal candidates.
template <typename Keep>
SimplicialComplex induced(const SimplicialComplex& K, const std::vector<std::size_t>& vertices, Keep keep)
{
    std::vector<std::size_t> local(K.num_vertices(), static_cast<std::size_t>(-1));
    std::vector<std::string> names;
    for (auto v : vertices) {
        local[v] = names.size();
        names.push_back(K.name(v));
    }
    std::vector<Simplex> simplices;
    for (int k = 0; k <= K.dimension(); ++k) {
        for (const auto& s : K.simplices(k)) {
            if (!keep(s))
                continue;
            Simplex t;
            for (auto v : s)
                t.push_back(local[v]);
            simplices.push_back(std::move(t));
        }
    }
    return SimplicialComplex(std::move(names), simplices);
}

} // namespace detail

/// Lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}.
inline SimplicialComplex link(const SimplicialComplex& K, const Simplex& sigma)
{
    if (sigma.empty() || !K.contains(sigma))
        throw ComplexError("link: simplex not in complex");
    std::vector<std::size_t> vertices;
    for (std::size_t v = 0; v < K.num_vertices(); ++v) {
        if (std::binary_search(sigma.begin(), sigma.end(), v))
            continue;
        if (K.contains(set_union(sigma, Simplex{v})))
            vertices.push_back(v);
    }
    return detail::induced(K, vertices, [&](const Simplex& s) { return disjoint(s, sigma) && K.contains(set_union(s, sigma)); });
}

inline SimplicialComplex full_subcomplex(const SimplicialComplex& K, std::vector<std::size_t> vertices)
{
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    for (auto v : vertices)
        if (v >= K.num_vertices())
            throw ComplexError("full_subcomplex: unknown vertex");
    return detail::induced(K, vertices, [&](const Simplex& s) { return is_subset(s, vertices); });
}

inline SimplicialComplex full_subcomplex(const SimplicialComplex& K, const std::vector<std::string>& names)
{
    std::vector<std::size_t> vertices;
    for (const auto& n : names)
        vertices.push_back(K.vertex_index(n));
    return full_subcomplex(K, vertices);
}

/// Vertices are the simplices of K ordered by (dimension, lexicographic);
/// simplices are chains under inclusion.
inline SimplicialComplex barycentric_subdivision(const SimplicialComplex& K)
{
    std::vector<std::string> names;
    std::vector<Simplex> faces;
    for (int k = 0; k <= K.dimension(); ++k)
        for (const auto& s : K.simplices(k)) {
            names.push_back(k == 0 ? K.name(s[0]) : "{" + K.simplex_name(s) + "}");
            faces.push_back(s);
        }
    // Maximal chains: extend each chain by one larger face at a time.
    std::vector<Simplex> chains;
    std::vector<std::vector<std::size_t>> up(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i)
        for (std::size_t j = 0; j < faces.size(); ++j)
            if (faces[j].size() == faces[i].size() + 1 && is_subset(faces[i], faces[j]))
                up[i].push_back(j);
    std::vector<Simplex> stack;
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (faces[i].size() == 1)
            stack.push_back({i});
    while (!stack.empty()) {
        Simplex chain = std::move(stack.back());
        stack.pop_back();
        const auto& next = up[chain.back()];
        if (next.empty()) {
            chains.push_back(std::move(chain));
            continue;
        }
        for (auto j : next) {
            Simplex longer = chain;
            longer.push_back(j);
            stack.push_back(std::move(longer));
        }
    }
    // Chains that are maximal in the poset are the maximal simplices; shorter
    // chains are picked up by closure. Chains starting above a vertex are
    // faces of chains starting at one of its vertices.
    return SimplicialComplex(std::move(names), chains);
}

struct Octahedralization {
    SimplicialComplex complex;
    /// projection[v'] = vertex of L under v'.
    std::vector<std::size_t> projection;
};

/// Doubles each vertex v into v+ (index 2v) and v- (index 2v+1); every
/// k-simplex of L yields its 2^{k+1} sign choices. The vertex order of OL
/// makes the projection order preserving.
inline Octahedralization octahedralize(const SimplicialComplex& L)
{
    std::vector<std::string> names;
    std::vector<std::size_t> projection;
    for (std::size_t v = 0; v < L.num_vertices(); ++v) {
        names.push_back(L.name(v) + "+");
        names.push_back(L.name(v) + "-");
        projection.push_back(v);
        projection.push_back(v);
    }
    std::vector<Simplex> maximal;
    for (const auto& s : L.maximal_simplices()) {
        const std::size_t n = s.size();
        for (std::uint32_t signs = 0; signs < (1u << n); ++signs) {
            Simplex t;
            for (std::size_t i = 0; i < n; ++i)
                t.push_back(2 * s[i] + ((signs >> i) & 1u));
            maximal.push_back(std::move(t));
        }
    }
    return {SimplicialComplex(std::move(names), maximal), std::move(projection)};
}

/// A cube (σ, τ) of the Davis chamber, σ ⊆ τ, σ possibly empty. Its
/// vertices are the simplices ρ with σ ⊆ ρ ⊆ τ; its coordinates are the
/// vertices of τ∖σ in increasing order.
struct Cube {
    Simplex sigma;
    Simplex tau;

    std::size_t dimension() const { return tau.size() - sigma.size(); }
    Simplex directions() const { return set_difference(tau, sigma); }
    friend auto operator<=>(const Cube&, const Cube&) = default;
};

/**
 * Davis chamber K_L of a flag complex, the cone on the barycentric
 * subdivision realized as a cubical complex. The cone point is (∅, ∅);
 * the cubes with σ ≠ ∅ form ∂K_L; the s-mirror is {(σ,τ) : s ∈ σ}.
 */
class CubicalChamber {
public:
    CubicalChamber() = default;

    explicit CubicalChamber(SimplicialComplex L) : base_(std::move(L))
    {
        std::vector<Simplex> faces{Simplex{}};
        for (int k = 0; k <= base_.dimension(); ++k)
            for (const auto& s : base_.simplices(k))
                faces.push_back(s);
        for (const auto& tau : faces) {
            const std::size_t n = tau.size();
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                Simplex sigma;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        sigma.push_back(tau[i]);
                cubes_.push_back({std::move(sigma), tau});
            }
        }
        std::sort(cubes_.begin(), cubes_.end(), [](const Cube& a, const Cube& b) {
            if (a.dimension() != b.dimension())
                return a.dimension() < b.dimension();
            return a < b;
        });
        for (std::size_t i = 0; i < cubes_.size(); ++i)
            index_.emplace(cubes_[i], i);
    }

    const SimplicialComplex& base() const { return base_; }
    const std::vector<Cube>& cubes() const { return cubes_; }

    std::size_t index_of(const Cube& c) const
    {
        auto it = index_.find(c);
        if (it == index_.end())
            throw ComplexError("cube not in chamber");
        return it->second;
    }

    /// Vertices s with s ∈ σ.
    const Simplex& mirror_labels(std::size_t cube) const { return cubes_.at(cube).sigma; }

    bool in_boundary(std::size_t cube) const { return !cubes_.at(cube).sigma.empty(); }

    bool in_mirror(std::size_t cube, std::size_t s) const
    {
        const auto& sigma = cubes_.at(cube).sigma;
        return std::binary_search(sigma.begin(), sigma.end(), s);
    }

    /// Number of cubes in ∂K_L.
    std::size_t boundary_size() const
    {
        return static_cast<std::size_t>(std::count_if(cubes_.begin(), cubes_.end(), [](const Cube& c) { return !c.sigma.empty(); }));
    }

    std::vector<std::size_t> cube_counts() const
    {
        std::vector<std::size_t> counts;
        for (const auto& c : cubes_) {
            if (counts.size() <= c.dimension())
                counts.resize(c.dimension() + 1);
            ++counts[c.dimension()];
        }
        return counts;
    }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (const auto& c : cubes_)
            chi += (c.dimension() % 2 == 0) ? 1 : -1;
        return chi;
    }

    std::size_t dimension() const { return cubes_.empty() ? 0 : cubes_.back().dimension(); }

private:
    SimplicialComplex base_;
    std::vector<Cube> cubes_;
    std::map<Cube, std::size_t> index_;
};

inline CubicalChamber davis_chamber(const SimplicialComplex& L)
{
    if (!is_flag(L).flag)
        throw ComplexError("Davis chamber requires a flag complex");
    return CubicalChamber(L);
}

/// Complexes used repeatedly in tests, suites and the CLI.
namespace shapes {

inline SimplicialComplex cycle(std::size_t n, const std::string& prefix = "v")
{
    std::vector<std::vector<std::string>> edges;
    for (std::size_t i = 0; i < n; ++i)
        edges.push_back({prefix + std::to_string(i), prefix + std::to_string((i + 1) % n)});
    return build_complex(edges);
}

inline SimplicialComplex discrete(std::size_t n, const std::string& prefix = "v")
{
    std::vector<std::vector<std::string>> points;
    for (std::size_t i = 0; i < n; ++i)
        points.push_back({prefix + std::to_string(i)});
    return build_complex(points);
}

inline SimplicialComplex full_simplex(std::size_t dim, const std::string& prefix = "v")
{
    std::vector<std::string> s;
    for (std::size_t i = 0; i <= dim; ++i)
        s.push_back(prefix + std::to_string(i));
    return build_complex({s});
}

/// Boundary of the (dim+1)-simplex: a combinatorial dim-sphere.
inline SimplicialComplex simplex_boundary(std::size_t dim, const std::string& prefix = "v")
{
    std::vector<std::vector<std::string>> facets;
    for (std::size_t skip = 0; skip <= dim + 1; ++skip) {
        std::vector<std::string> f;
        for (std::size_t i = 0; i <= dim + 1; ++i)
            if (i != skip)
                f.push_back(prefix + std::to_string(i));
        facets.push_back(f);
    }
    return build_complex(facets);
}

inline SimplicialComplex complete_graph(std::size_t n, const std::string& prefix = "v")
{
    std::vector<std::vector<std::string>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            edges.push_back({prefix + std::to_string(i), prefix + std::to_string(j)});
    return build_complex(edges);
}

/// K_{3,3} with vertex order a0 a1 a2 b0 b1 b2.
inline SimplicialComplex k33()
{
    std::vector<std::vector<std::string>> edges;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            edges.push_back({"a" + std::to_string(i), "b" + std::to_string(j)});
    return SimplicialComplex::from_names(edges, {"a0", "a1", "a2", "b0", "b1", "b2"});
}

inline SimplicialComplex octahedron_boundary()
{
    // Antipodal pairs (x0,x1), (y0,y1), (z0,z1).
    std::vector<std::vector<std::string>> facets;
    for (const char* x : {"x0", "x1"})
        for (const char* y : {"y0", "y1"})
            for (const char* z : {"z0", "z1"})
                facets.push_back({x, y, z});
    return build_complex(facets);
}

/// Minimal 6-vertex triangulation of the real projective plane.
inline SimplicialComplex rp2()
{
    return build_complex({{"1", "2", "3"}, {"1", "3", "4"}, {"1", "4", "5"}, {"1", "5", "6"}, {"1", "2", "6"},
                          {"2", "3", "5"}, {"2", "4", "5"}, {"2", "4", "6"}, {"3", "4", "6"}, {"3", "5", "6"}});
}

} // namespace shapes

} // namespace homgrow
