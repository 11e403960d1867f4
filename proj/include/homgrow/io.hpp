// Line-based text formats: complexes (.cx), graph-product specs (.gp),
// cover specs and immersions.
#pragma once

#include "covers.hpp"
#include "embedding.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace homgrow {

struct IoError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Non-empty lines split into words, comments removed, with line numbers.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenize(std::istream& in)
{
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream words(line);
        std::vector<std::string> w;
        for (std::string t; words >> t;)
            w.push_back(t);
        if (!w.empty())
            out.emplace_back(no, std::move(w));
    }
    return out;
}

[[noreturn]] inline void fail(std::size_t line, const std::string& what)
{
    throw IoError("line " + std::to_string(line) + ": " + what);
}

inline std::uint64_t parse_count(std::size_t line, const std::string& text)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 18)
        fail(line, "expected a nonnegative integer, got '" + text + "'");
    return std::stoull(text);
}

struct ComplexLines {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> simplices;
    std::map<std::string, std::size_t> seen;

    void add_vertex(const std::string& v)
    {
        if (seen.emplace(v, names.size()).second)
            names.push_back(v);
    }

    /// Consumes `vertex` and `simplex` lines; false for other keywords.
    bool take(std::size_t line, const std::vector<std::string>& w)
    {
        if (w[0] == "vertex") {
            if (w.size() < 2)
                fail(line, "vertex line needs at least one identifier");
            for (std::size_t i = 1; i < w.size(); ++i)
                add_vertex(w[i]);
            return true;
        }
        if (w[0] == "simplex") {
            if (w.size() < 2)
                fail(line, "simplex line needs at least one vertex");
            std::vector<std::string> s(w.begin() + 1, w.end());
            for (const auto& v : s)
                add_vertex(v);
            simplices.push_back(std::move(s));
            return true;
        }
        return false;
    }

    SimplicialComplex build() const
    {
        std::vector<Simplex> maximal;
        for (const auto& s : simplices) {
            Simplex t;
            for (const auto& v : s)
                t.push_back(seen.at(v));
            maximal.push_back(std::move(t));
        }
        try {
            return SimplicialComplex(names, maximal);
        } catch (const ComplexError& e) {
            throw IoError(e.what());
        }
    }
};

inline std::ifstream open(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    return in;
}

} // namespace detail

inline SimplicialComplex parse_complex(std::istream& in)
{
    detail::ComplexLines c;
    for (const auto& [no, w] : detail::tokenize(in))
        if (!c.take(no, w))
            detail::fail(no, "unknown keyword '" + w[0] + "'");
    return c.build();
}

inline SimplicialComplex parse_complex(const std::string& text)
{
    std::istringstream in(text);
    return parse_complex(in);
}

inline SimplicialComplex read_complex(const std::string& path)
{
    auto in = detail::open(path);
    return parse_complex(in);
}

/// `vertex` lines for every vertex, then the maximal simplices.
inline std::string write_complex(const SimplicialComplex& K)
{
    std::ostringstream out;
    for (const auto& n : K.vertex_names())
        out << "vertex " << n << '\n';
    for (const auto& s : K.maximal_simplices()) {
        if (s.size() < 2)
            continue;
        out << "simplex";
        for (auto v : s)
            out << ' ' << K.name(v);
        out << '\n';
    }
    return out.str();
}

struct GraphProductFile {
    GraphProductSpec spec;
    /// From `target <vertex> <k>` lines; the full quotient when absent.
    QuotientTarget target;
};

/// Complex lines plus `order <vertex> <m>`, `order * <m>` and optionally
/// `target <vertex> <k>`, `target * <k>`.
inline GraphProductFile parse_graph_product(std::istream& in)
{
    detail::ComplexLines c;
    std::vector<std::tuple<std::size_t, std::string, std::uint64_t>> orders, targets;
    for (const auto& [no, w] : detail::tokenize(in)) {
        if (c.take(no, w))
            continue;
        if (w[0] == "order" || w[0] == "target") {
            if (w.size() != 3)
                detail::fail(no, w[0] + " line needs a vertex (or *) and a number");
            (w[0] == "order" ? orders : targets).emplace_back(no, w[1], detail::parse_count(no, w[2]));
            continue;
        }
        detail::fail(no, "unknown keyword '" + w[0] + "'");
    }
    GraphProductFile g;
    g.spec.L = c.build();
    const std::size_t n = g.spec.L.num_vertices();
    auto assign = [&](const auto& lines, std::vector<std::uint64_t>& out, const char* what) {
        out.assign(n, 0);
        for (const auto& [no, v, m] : lines)
            if (v == "*")
                for (auto& x : out)
                    if (x == 0)
                        x = m;
        for (const auto& [no, v, m] : lines) {
            if (v == "*")
                continue;
            auto it = c.seen.find(v);
            if (it == c.seen.end())
                detail::fail(no, std::string(what) + " for unknown vertex '" + v + "'");
            out[it->second] = m;
        }
    };
    assign(orders, g.spec.orders, "order");
    for (std::size_t v = 0; v < n; ++v)
        if (g.spec.orders[v] == 0)
            throw IoError("vertex '" + g.spec.L.name(v) + "' has no order");
    try {
        g.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw IoError(e.what());
    }
    if (targets.empty()) {
        g.target = QuotientTarget::full(g.spec);
    } else {
        assign(targets, g.target.divisors, "target");
        for (std::size_t v = 0; v < n; ++v)
            if (g.target.divisors[v] == 0)
                g.target.divisors[v] = g.spec.orders[v];
        try {
            g.target.validate(g.spec);
        } catch (const std::invalid_argument& e) {
            throw IoError(e.what());
        }
    }
    return g;
}

inline GraphProductFile read_graph_product(const std::string& path)
{
    auto in = detail::open(path);
    return parse_graph_product(in);
}

inline std::string write_graph_product(const GraphProductSpec& spec, const QuotientTarget* target = nullptr)
{
    std::ostringstream out;
    out << write_complex(spec.L);
    for (std::size_t v = 0; v < spec.orders.size(); ++v)
        out << "order " << spec.L.name(v) << ' ' << spec.orders[v] << '\n';
    if (target)
        for (std::size_t v = 0; v < target->divisors.size(); ++v)
            out << "target " << spec.L.name(v) << ' ' << target->divisors[v] << '\n';
    return out.str();
}

/// `degree <n>` then `perm <generator-index> <cycles>`; generators are those
/// of pi1_presentation(X), unlisted ones act trivially.
inline CoverMap parse_cover(std::istream& in, const CellComplex& X, std::string id = "file")
{
    std::size_t degree = 0;
    std::vector<std::pair<std::size_t, std::string>> perms;
    std::vector<std::size_t> perm_lines;
    for (const auto& [no, w] : detail::tokenize(in)) {
        if (w[0] == "degree") {
            if (w.size() != 2 || degree)
                detail::fail(no, "expected a single 'degree <n>' line");
            degree = detail::parse_count(no, w[1]);
            if (degree == 0)
                detail::fail(no, "degree must be positive");
        } else if (w[0] == "perm") {
            if (w.size() < 2)
                detail::fail(no, "perm line needs a generator index");
            std::string cycles;
            for (std::size_t i = 2; i < w.size(); ++i)
                cycles += (i > 2 ? " " : "") + w[i];
            perms.emplace_back(detail::parse_count(no, w[1]), cycles.empty() ? "()" : cycles);
            perm_lines.push_back(no);
        } else {
            detail::fail(no, "unknown keyword '" + w[0] + "'");
        }
    }
    if (!degree)
        throw IoError("cover file has no degree line");
    const auto P = pi1_presentation(X);
    std::vector<Perm> gens(P.generator_edges.size(), identity_perm(degree));
    for (std::size_t i = 0; i < perms.size(); ++i) {
        const auto& [g, text] = perms[i];
        if (g >= gens.size())
            detail::fail(perm_lines[i], "generator " + std::to_string(g) + " out of range (" + std::to_string(gens.size()) +
                                            " generators)");
        try {
            gens[g] = parse_cycles(text, degree);
        } catch (const CoverError& e) {
            detail::fail(perm_lines[i], e.what());
        }
    }
    if (gens.empty())
        return CoverMap::trivial(X, degree, std::move(id));
    return CoverMap::from_generators(X, P, gens, std::move(id));
}

inline CoverMap read_cover(const std::string& path, const CellComplex& X)
{
    auto in = detail::open(path);
    return parse_cover(in, X, path);
}

inline std::string write_cover(const CellComplex& X, const CoverMap& c)
{
    const auto P = pi1_presentation(X);
    const auto t = tree_normalized(X, c);
    std::ostringstream out;
    out << "degree " << c.degree << '\n';
    for (std::size_t g = 0; g < P.generator_edges.size(); ++g)
        out << "perm " << g << ' ' << cycle_notation(t.edge_perms[P.generator_edges[g]]) << '\n';
    return out.str();
}

struct ImmersionFile {
    Immersion immersion;
    /// Coordinates were given; otherwise the moment immersion is used.
    bool explicit_coords = false;
};

/// Complex lines plus optional `coord <vertex> <q1> ... <q2d>` lines. With
/// no coordinates, d is the complex dimension and the moment map is used.
inline ImmersionFile parse_immersion(std::istream& in)
{
    detail::ComplexLines c;
    std::vector<std::tuple<std::size_t, std::string, Point>> coords;
    for (const auto& [no, w] : detail::tokenize(in)) {
        if (c.take(no, w))
            continue;
        if (w[0] == "coord") {
            if (w.size() < 3)
                detail::fail(no, "coord line needs a vertex and coordinates");
            Point p;
            for (std::size_t i = 2; i < w.size(); ++i) {
                try {
                    p.push_back(parse_rational(w[i]));
                } catch (const std::invalid_argument& e) {
                    detail::fail(no, e.what());
                }
            }
            coords.emplace_back(no, w[1], std::move(p));
            continue;
        }
        detail::fail(no, "unknown keyword '" + w[0] + "'");
    }
    ImmersionFile f;
    const auto K = c.build();
    const int dim = std::max(1, K.dimension());
    if (coords.empty()) {
        f.immersion = moment_immersion(K, dim);
        return f;
    }
    f.explicit_coords = true;
    const std::size_t len = std::get<2>(coords[0]).size();
    if (len % 2)
        detail::fail(std::get<0>(coords[0]), "coordinates must have even length 2d");
    f.immersion = Immersion{static_cast<int>(len / 2), K, std::vector<Point>(K.num_vertices())};
    std::vector<bool> have(K.num_vertices(), false);
    for (const auto& [no, v, p] : coords) {
        auto it = c.seen.find(v);
        if (it == c.seen.end())
            detail::fail(no, "coordinates for unknown vertex '" + v + "'");
        if (p.size() != len)
            detail::fail(no, "coordinate vectors must all have length " + std::to_string(len));
        if (have[it->second])
            detail::fail(no, "duplicate coordinates for '" + v + "'");
        f.immersion.coords[it->second] = p;
        have[it->second] = true;
    }
    for (std::size_t v = 0; v < have.size(); ++v)
        if (!have[v])
            throw IoError("vertex '" + K.name(v) + "' has no coordinates");
    try {
        validate_immersion(f.immersion);
    } catch (const EmbeddingError& e) {
        throw IoError(e.what());
    }
    return f;
}

inline ImmersionFile read_immersion(const std::string& path)
{
    auto in = detail::open(path);
    return parse_immersion(in);
}

inline std::string write_immersion(const Immersion& f)
{
    std::ostringstream out;
    out << write_complex(f.source);
    for (std::size_t v = 0; v < f.coords.size(); ++v) {
        out << "coord " << f.source.name(v);
        for (const auto& q : f.coords[v])
            out << ' ' << to_string(q);
        out << '\n';
    }
    return out.str();
}

} // namespace homgrow
