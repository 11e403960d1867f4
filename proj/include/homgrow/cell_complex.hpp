// Finite CW complexes with enough combinatorial data to lift cells to
// covering spaces: every cell has a base vertex, and every boundary entry
// carries an edge path from that base vertex to the face's base vertex.
#pragma once

#include "complexes.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace homgrow {

struct EdgeStep {
    std::size_t edge;
    int dir; // +1 tail to head, -1 head to tail
    friend bool operator==(const EdgeStep&, const EdgeStep&) = default;
    friend auto operator<=>(const EdgeStep&, const EdgeStep&) = default;
};

using EdgePath = std::vector<EdgeStep>;

struct BoundaryEntry {
    std::size_t face;
    std::int64_t coeff;
    EdgePath path;
};

struct Cell {
    std::size_t base_vertex = 0;
    std::vector<BoundaryEntry> boundary;
    /// Attaching loop of a 2-cell, read from its base vertex.
    EdgePath word;
    std::string name;
    /// Cell of the base complex this cell lies over (itself when not a cover).
    std::size_t projection = 0;
};

struct CellComplexError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/**
 * Cells graded by dimension. 1-cells have boundary entries
 * {tail, -1, []} and {head, +1, [(e,+1)]}; 2-cells are given by attaching
 * words and their entries are derived; higher cells list their entries
 * explicitly. `finalize` checks ∂∂ = 0.
 */
class CellComplex {
public:
    std::size_t dimension_count() const { return cells_.size(); }
    int dimension() const { return static_cast<int>(cells_.size()) - 1; }

    std::size_t count(int k) const
    {
        return (k < 0 || k >= static_cast<int>(cells_.size())) ? 0 : cells_[static_cast<std::size_t>(k)].size();
    }

    std::vector<std::size_t> counts() const
    {
        std::vector<std::size_t> out;
        for (const auto& level : cells_)
            out.push_back(level.size());
        return out;
    }

    std::size_t total_cells() const
    {
        std::size_t n = 0;
        for (const auto& level : cells_)
            n += level.size();
        return n;
    }

    const Cell& cell(int k, std::size_t i) const { return cells_.at(static_cast<std::size_t>(k)).at(i); }
    const std::vector<Cell>& cells(int k) const
    {
        static const std::vector<Cell> none;
        return (k < 0 || k >= static_cast<int>(cells_.size())) ? none : cells_[static_cast<std::size_t>(k)];
    }

    std::size_t tail(std::size_t edge) const { return cells_.at(1).at(edge).boundary[0].face; }
    std::size_t head(std::size_t edge) const { return cells_.at(1).at(edge).boundary[1].face; }

    /// Degree over the complex this one was built from (1 unless a cover).
    std::size_t degree() const { return degree_; }
    void set_degree(std::size_t d) { degree_ = d; }

    std::size_t add_vertex(std::string name = {})
    {
        auto& level = level_for(0);
        Cell c;
        c.base_vertex = level.size();
        c.name = std::move(name);
        c.projection = level.size();
        level.push_back(std::move(c));
        return level.size() - 1;
    }

    std::size_t add_edge(std::size_t tail, std::size_t head, std::string name = {})
    {
        if (tail >= count(0) || head >= count(0))
            throw CellComplexError("edge endpoint is not a vertex");
        auto& level = level_for(1);
        Cell c;
        c.base_vertex = tail;
        c.boundary = {{tail, -1, {}}, {head, +1, {{level.size(), +1}}}};
        c.name = std::move(name);
        c.projection = level.size();
        level.push_back(std::move(c));
        return level.size() - 1;
    }

    /// Adds a 2-cell attached along the closed edge path `word` starting at
    /// `base`.
    std::size_t add_face(std::size_t base, EdgePath word, std::string name = {})
    {
        if (base >= count(0))
            throw CellComplexError("2-cell base is not a vertex");
        Cell c;
        c.base_vertex = base;
        std::size_t at = base;
        EdgePath prefix;
        for (const auto& step : word) {
            if (step.edge >= count(1) || (step.dir != 1 && step.dir != -1))
                throw CellComplexError("attaching word uses an unknown edge");
            const std::size_t from = step.dir > 0 ? tail(step.edge) : head(step.edge);
            const std::size_t to = step.dir > 0 ? head(step.edge) : tail(step.edge);
            if (from != at)
                throw CellComplexError("attaching word is not a path");
            EdgePath path = prefix;
            if (step.dir < 0)
                path.push_back({step.edge, -1});
            c.boundary.push_back({step.edge, step.dir, std::move(path)});
            prefix.push_back(step);
            at = to;
        }
        if (at != base)
            throw CellComplexError("attaching word is not closed");
        c.word = std::move(word);
        c.name = std::move(name);
        auto& level = level_for(2);
        c.projection = level.size();
        level.push_back(std::move(c));
        return level.size() - 1;
    }

    /// Adds a cell of dimension k >= 3 (or any k, for builders that compute
    /// entries themselves).
    std::size_t add_cell(int k, std::size_t base, std::vector<BoundaryEntry> boundary, std::string name = {})
    {
        if (k < 1)
            throw CellComplexError("add_cell needs dimension >= 1");
        for (const auto& e : boundary)
            if (e.face >= count(k - 1))
                throw CellComplexError("boundary entry references a missing face");
        Cell c;
        c.base_vertex = base;
        c.boundary = std::move(boundary);
        c.name = std::move(name);
        auto& level = level_for(static_cast<std::size_t>(k));
        c.projection = level.size();
        level.push_back(std::move(c));
        return level.size() - 1;
    }

    void set_projection(int k, std::size_t i, std::size_t target) { cells_.at(static_cast<std::size_t>(k)).at(i).projection = target; }

    /// ∂_k with rows indexed by (k-1)-cells and columns by k-cells.
    SparseMatrix boundary_matrix(int k) const
    {
        SparseMatrix m(count(k - 1), count(k));
        if (k >= 1)
            for (std::size_t c = 0; c < count(k); ++c)
                for (const auto& e : cell(k, c).boundary)
                    m.add(e.face, c, e.coeff);
        return m.freeze();
    }

    /// Verifies ∂∂ = 0 and path endpoints; throws on violation.
    void finalize() const
    {
        for (int k = 2; k <= dimension(); ++k) {
            auto prod = boundary_matrix(k - 1) * boundary_matrix(k);
            if (!prod.is_zero())
                throw std::logic_error("boundary of boundary is nonzero in dimension " + std::to_string(k));
        }
        for (int k = 1; k <= dimension(); ++k)
            for (const auto& c : cells(k))
                for (const auto& e : c.boundary)
                    if (path_end(c.base_vertex, e.path) != cell(k - 1, e.face).base_vertex)
                        throw std::logic_error("boundary path does not reach the face base vertex");
    }

    std::size_t path_end(std::size_t start, const EdgePath& path) const
    {
        std::size_t at = start;
        for (const auto& s : path) {
            const std::size_t from = s.dir > 0 ? tail(s.edge) : head(s.edge);
            if (from != at)
                throw std::logic_error("edge path is discontinuous");
            at = s.dir > 0 ? head(s.edge) : tail(s.edge);
        }
        return at;
    }

    /// Vertices in the closure of each cell, sorted.
    std::vector<std::vector<std::vector<std::size_t>>> closure_vertices() const
    {
        std::vector<std::vector<std::vector<std::size_t>>> out(cells_.size());
        for (std::size_t k = 0; k < cells_.size(); ++k) {
            out[k].resize(cells_[k].size());
            for (std::size_t i = 0; i < cells_[k].size(); ++i) {
                if (k == 0) {
                    out[k][i] = {i};
                    continue;
                }
                std::vector<std::size_t> vs;
                for (const auto& e : cells_[k][i].boundary) {
                    const auto& f = out[k - 1][e.face];
                    vs.insert(vs.end(), f.begin(), f.end());
                }
                std::sort(vs.begin(), vs.end());
                vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
                out[k][i] = std::move(vs);
            }
        }
        return out;
    }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (std::size_t k = 0; k < cells_.size(); ++k)
            chi += (k % 2 == 0 ? 1 : -1) * static_cast<long long>(cells_[k].size());
        return chi;
    }

    /// Connected components of the 1-skeleton; returns a component label
    /// per vertex and the component count.
    std::pair<std::vector<std::size_t>, std::size_t> components() const
    {
        const std::size_t n = count(0);
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i)
            parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t e = 0; e < count(1); ++e)
            parent[find(tail(e))] = find(head(e));
        std::vector<std::size_t> label(n);
        std::map<std::size_t, std::size_t> ids;
        for (std::size_t v = 0; v < n; ++v) {
            auto [it, fresh] = ids.emplace(find(v), ids.size());
            label[v] = it->second;
        }
        return {label, ids.size()};
    }

private:
    std::vector<Cell>& level_for(std::size_t k)
    {
        if (cells_.size() <= k)
            cells_.resize(k + 1);
        return cells_[k];
    }

    std::vector<std::vector<Cell>> cells_;
    std::size_t degree_ = 1;
};

// ---------------------------------------------------------------------------
// Delta-complex builder

/// Canonical form of an ordered point sequence: the cell key it is
/// identified with, the orientation sign, and the position of the input
/// point that becomes the canonical first point.
struct Canonical {
    std::vector<std::size_t> key;
    int sign = 1;
    std::size_t first_from = 0;
};

/**
 * Builds a Delta-complex from ordered top cells. Each cell is an ordered
 * sequence of points; face i deletes position i and is canonicalized by
 * `canon`, which may identify sequences (as in a mapping torus) and flip
 * orientation. The cell named by a one-point sequence is a vertex.
 */
inline CellComplex delta_complex(const std::vector<std::vector<std::size_t>>& top_cells,
                                 const std::function<Canonical(const std::vector<std::size_t>&)>& canon,
                                 const std::function<std::string(const std::vector<std::size_t>&)>& name = {},
                                 std::vector<std::vector<std::vector<std::size_t>>>* keys_out = nullptr)
{
    // Collect canonical cells per dimension, ordered.
    std::vector<std::map<std::vector<std::size_t>, std::size_t>> index;
    std::vector<std::vector<std::vector<std::size_t>>> keys;
    std::function<void(const std::vector<std::size_t>&)> visit = [&](const std::vector<std::size_t>& raw) {
        const auto c = canon(raw);
        const std::size_t k = c.key.size() - 1;
        if (index.size() <= k) {
            index.resize(k + 1);
            keys.resize(k + 1);
        }
        if (index[k].count(c.key))
            return;
        index[k].emplace(c.key, 0);
        if (k == 0)
            return;
        for (std::size_t i = 0; i < c.key.size(); ++i) {
            auto face = c.key;
            face.erase(face.begin() + static_cast<long>(i));
            visit(face);
        }
    };
    for (const auto& t : top_cells)
        if (!t.empty())
            visit(t);
    for (std::size_t k = 0; k < index.size(); ++k) {
        std::size_t i = 0;
        for (auto& [key, pos] : index[k]) {
            pos = i++;
            keys[k].push_back(key);
        }
    }
    auto lookup = [&](const std::vector<std::size_t>& raw) {
        const auto c = canon(raw);
        return std::make_pair(index[c.key.size() - 1].at(c.key), c);
    };
    auto vertex_of = [&](std::size_t point) { return lookup({point}).first; };
    // Edge step from point a to point b (a before b in some cell key).
    auto step = [&](std::size_t a, std::size_t b) {
        const auto [e, c] = lookup({a, b});
        return EdgeStep{e, c.sign};
    };

    CellComplex X;
    for (const auto& key : keys.empty() ? std::vector<std::vector<std::size_t>>{} : keys[0])
        X.add_vertex(name ? name(key) : std::string());
    if (keys.size() > 1)
        for (const auto& key : keys[1]) {
            const auto t = vertex_of(key[0]);
            const auto h = vertex_of(key[1]);
            X.add_edge(t, h, name ? name(key) : std::string());
        }
    if (keys.size() > 2)
        for (const auto& key : keys[2])
            X.add_face(vertex_of(key[0]), {step(key[0], key[1]), step(key[1], key[2]), [&] {
                                               auto s = step(key[0], key[2]);
                                               s.dir = -s.dir;
                                               return s;
                                           }()},
                       name ? name(key) : std::string());
    for (std::size_t k = 3; k < keys.size(); ++k)
        for (const auto& key : keys[k]) {
            std::vector<BoundaryEntry> entries;
            for (std::size_t i = 0; i < key.size(); ++i) {
                auto face = key;
                face.erase(face.begin() + static_cast<long>(i));
                const auto [f, c] = lookup(face);
                const std::int64_t coeff = ((i % 2) ? -1 : 1) * c.sign;
                // Path from key[0] to the point that is the face's base.
                const std::size_t target = face[c.first_from];
                EdgePath path;
                if (target != key[0])
                    path.push_back(step(key[0], target));
                entries.push_back({f, coeff, std::move(path)});
            }
            X.add_cell(static_cast<int>(k), vertex_of(key[0]), std::move(entries), name ? name(key) : std::string());
        }
    X.finalize();
    if (keys_out)
        *keys_out = keys;
    return X;
}

/// Simplicial complex as a cell complex; cells in the complex's own order.
inline CellComplex to_cell_complex(const SimplicialComplex& K)
{
    std::vector<std::vector<std::size_t>> tops;
    for (int k = 0; k <= K.dimension(); ++k)
        for (const auto& s : K.simplices(k))
            tops.push_back(s);
    auto identity = [](const std::vector<std::size_t>& raw) { return Canonical{raw, 1, 0}; };
    return delta_complex(tops, identity, [&](const std::vector<std::size_t>& key) { return K.simplex_name(key); });
}

/// One vertex, a loop per generator, a 2-cell per relator word. Words use
/// (generator, ±1) letters.
inline CellComplex presentation_complex(std::size_t generators, const std::vector<EdgePath>& relators)
{
    CellComplex X;
    X.add_vertex("*");
    for (std::size_t g = 0; g < generators; ++g)
        X.add_edge(0, 0, "g" + std::to_string(g + 1));
    for (std::size_t r = 0; r < relators.size(); ++r)
        X.add_face(0, relators[r], "r" + std::to_string(r + 1));
    X.finalize();
    return X;
}

// ---------------------------------------------------------------------------
// Subcomplexes

/// Membership mask per dimension.
struct Subcomplex {
    std::vector<std::vector<bool>> member;

    static Subcomplex empty(const CellComplex& X)
    {
        Subcomplex s;
        for (std::size_t k = 0; k < X.dimension_count(); ++k)
            s.member.emplace_back(X.count(static_cast<int>(k)), false);
        return s;
    }

    static Subcomplex full(const CellComplex& X)
    {
        Subcomplex s;
        for (std::size_t k = 0; k < X.dimension_count(); ++k)
            s.member.emplace_back(X.count(static_cast<int>(k)), true);
        return s;
    }

    bool contains(int k, std::size_t i) const
    {
        return k >= 0 && static_cast<std::size_t>(k) < member.size() && member[static_cast<std::size_t>(k)][i];
    }

    std::size_t size() const
    {
        std::size_t n = 0;
        for (const auto& level : member)
            n += static_cast<std::size_t>(std::count(level.begin(), level.end(), true));
        return n;
    }

    bool is_closed(const CellComplex& X) const
    {
        for (int k = 1; k <= X.dimension(); ++k)
            for (std::size_t i = 0; i < X.count(k); ++i)
                if (contains(k, i))
                    for (const auto& e : X.cell(k, i).boundary)
                        if (!contains(k - 1, e.face))
                            return false;
        return true;
    }

    /// Adds all faces of member cells.
    Subcomplex& close(const CellComplex& X)
    {
        for (int k = X.dimension(); k >= 1; --k)
            for (std::size_t i = 0; i < X.count(k); ++i)
                if (contains(k, i))
                    for (const auto& e : X.cell(k, i).boundary)
                        member[static_cast<std::size_t>(k - 1)][e.face] = true;
        return *this;
    }

    friend Subcomplex operator&(const Subcomplex& a, const Subcomplex& b)
    {
        Subcomplex s = a;
        for (std::size_t k = 0; k < s.member.size(); ++k)
            for (std::size_t i = 0; i < s.member[k].size(); ++i)
                s.member[k][i] = a.member[k][i] && b.member[k][i];
        return s;
    }

    friend Subcomplex operator|(const Subcomplex& a, const Subcomplex& b)
    {
        Subcomplex s = a;
        for (std::size_t k = 0; k < s.member.size(); ++k)
            for (std::size_t i = 0; i < s.member[k].size(); ++i)
                s.member[k][i] = a.member[k][i] || b.member[k][i];
        return s;
    }

    friend bool operator==(const Subcomplex&, const Subcomplex&) = default;
};

struct ExtractedSubcomplex {
    CellComplex complex;
    /// new_of_old[k][i], or npos when cell i is not in the subcomplex.
    std::vector<std::vector<std::size_t>> new_of_old;
    std::vector<std::vector<std::size_t>> old_of_new;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// The subcomplex as a cell complex. Boundary paths leaving the subcomplex
/// cannot occur for 2-cells (their words use faces only); for higher cells
/// paths are single face edges of the cell and therefore members too.
inline ExtractedSubcomplex extract_subcomplex(const CellComplex& X, const Subcomplex& A)
{
    if (!A.is_closed(X))
        throw CellComplexError("cell set is not a subcomplex");
    ExtractedSubcomplex out;
    out.new_of_old.resize(X.dimension_count());
    out.old_of_new.resize(X.dimension_count());
    for (std::size_t k = 0; k < X.dimension_count(); ++k) {
        out.new_of_old[k].assign(X.count(static_cast<int>(k)), ExtractedSubcomplex::npos);
        for (std::size_t i = 0; i < X.count(static_cast<int>(k)); ++i)
            if (A.contains(static_cast<int>(k), i)) {
                out.new_of_old[k][i] = out.old_of_new[k].size();
                out.old_of_new[k].push_back(i);
            }
    }
    auto edge = [&](std::size_t old) {
        const auto e = out.new_of_old[1][old];
        if (e == ExtractedSubcomplex::npos)
            throw CellComplexError("boundary path leaves the subcomplex");
        return e;
    };
    auto map_path = [&](const EdgePath& p) {
        EdgePath q;
        for (const auto& s : p)
            q.push_back({edge(s.edge), s.dir});
        return q;
    };
    CellComplex& Y = out.complex;
    for (std::size_t k = 0; k < X.dimension_count(); ++k) {
        const int kk = static_cast<int>(k);
        for (auto old : out.old_of_new[k]) {
            const Cell& c = X.cell(kk, old);
            std::size_t added;
            if (k == 0) {
                added = Y.add_vertex(c.name);
            } else if (k == 1) {
                added = Y.add_edge(out.new_of_old[0][X.tail(old)], out.new_of_old[0][X.head(old)], c.name);
            } else if (k == 2) {
                added = Y.add_face(out.new_of_old[0][c.base_vertex], map_path(c.word), c.name);
            } else {
                std::vector<BoundaryEntry> entries;
                for (const auto& e : c.boundary)
                    entries.push_back({out.new_of_old[k - 1][e.face], e.coeff, map_path(e.path)});
                added = Y.add_cell(kk, out.new_of_old[0][c.base_vertex], std::move(entries), c.name);
            }
            Y.set_projection(kk, added, c.projection);
        }
    }
    Y.set_degree(X.degree());
    Y.finalize();
    return out;
}

/// Splits X along the star of vertex x: A1 is the closed star (closures of
/// cells containing x), A2 the cells whose closure misses x, B = A1 ∩ A2.
struct StarDecomposition {
    Subcomplex A1, A2, B;
};

inline StarDecomposition star_decomposition(const CellComplex& X, std::size_t x)
{
    if (x >= X.count(0))
        throw CellComplexError("star decomposition vertex out of range");
    const auto closure = X.closure_vertices();
    StarDecomposition d{Subcomplex::empty(X), Subcomplex::empty(X), {}};
    for (int k = 0; k <= X.dimension(); ++k)
        for (std::size_t i = 0; i < X.count(k); ++i) {
            const auto& vs = closure[static_cast<std::size_t>(k)][i];
            const bool touches = std::binary_search(vs.begin(), vs.end(), x);
            (touches ? d.A1 : d.A2).member[static_cast<std::size_t>(k)][i] = true;
        }
    d.A1.close(X);
    d.B = d.A1 & d.A2;
    return d;
}

} // namespace homgrow
