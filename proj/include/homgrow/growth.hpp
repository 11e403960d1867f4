// Normalized Betti numbers over families of finite covers, sampled growth
// brackets, graph-product estimates and Mayer–Vietoris checks.
#pragma once

#include "covers.hpp"
#include "homology.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace homgrow {

struct GrowthError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GrowthSample {
    std::string id;
    std::size_t degree = 1;
    int k = 0;
    Field field;
    std::size_t betti = 0;
    /// b_k(X′; F) / degree
    Rational value;
};

/// Cells of the base in degree k bound every normalized value.
inline void check_bounded(const GrowthSample& s, std::size_t base_cells)
{
    if (s.value < 0 || s.value > Rational(static_cast<long>(base_cells)))
        throw std::logic_error("normalized Betti number " + to_string(s.value) + " exceeds the " + std::to_string(base_cells) +
                               " cells of the base");
}

/// A cover described by a CoverMap over `base`.
inline GrowthSample normalized_betti(const CellComplex& base, const CoverMap& c, int k, Field F = Field::rationals())
{
    const auto cover = build_cover(base, c);
    GrowthSample s{c.id, c.degree, k, F, betti(ChainComplex(cover), k, F), {}};
    s.value = Rational(static_cast<long>(s.betti), static_cast<long>(s.degree));
    check_bounded(s, base.count(k));
    return s;
}

/// A complex that already records its degree over the base (building
/// quotients, covers from build_cover).
inline GrowthSample normalized_betti(const CellComplex& cover, int k, Field F = Field::rationals(), std::string id = {})
{
    GrowthSample s{std::move(id), cover.degree(), k, F, betti(ChainComplex(cover), k, F), {}};
    if (s.degree == 0)
        throw GrowthError("cover of degree zero");
    s.value = Rational(static_cast<long>(s.betti), static_cast<long>(s.degree));
    return s;
}

struct GrowthBracket {
    Rational observed_min, observed_max;
    /// max over c of min over the sampled tail T(c) = {c′ refining c}.
    Rational tail_lower;
    /// min over c of max over T(c).
    Rational tail_upper;
    /// Every two samples have a common refinement in the family. Without it
    /// the tail values need not be ordered.
    bool directed = false;
    std::string family;
    std::vector<GrowthSample> samples;
    /// Always set: these are statistics of a finite sample, not the limits.
    bool sampled = true;
};

/**
 * refines[i][j] says cover i factors through cover j. When omitted it is
 * computed with covers_over (base connected). Supplied data must be
 * reflexive and compatible with degrees.
 */
inline GrowthBracket growth_bracket(const CellComplex& base, const std::vector<CoverMap>& family, int k, Field F = Field::rationals(),
                                    std::optional<std::vector<std::vector<bool>>> refines = std::nullopt,
                                    std::string description = {})
{
    if (family.empty())
        throw GrowthError("growth bracket needs a nonempty family");
    const std::size_t n = family.size();
    if (refines) {
        if (refines->size() != n)
            throw GrowthError("inconsistent refinement data: wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if ((*refines)[i].size() != n || !(*refines)[i][i])
                throw GrowthError("inconsistent refinement data: relation must be reflexive");
            for (std::size_t j = 0; j < n; ++j)
                if ((*refines)[i][j] && family[i].degree % family[j].degree != 0)
                    throw GrowthError("inconsistent refinement data: " + family[i].id + " cannot cover " + family[j].id);
        }
    } else {
        auto rows = parallel_map(n, [&](std::size_t i) {
            std::vector<bool> row(n);
            for (std::size_t j = 0; j < n; ++j)
                row[j] = i == j || covers_over(base, family[i], family[j]);
            return row;
        });
        refines = std::move(rows);
    }
    GrowthBracket b;
    b.samples = parallel_map(n, [&](std::size_t i) { return normalized_betti(base, family[i], k, F); });
    const auto& R = *refines;
    b.observed_min = b.observed_max = b.samples[0].value;
    for (const auto& s : b.samples) {
        b.observed_min = std::min(b.observed_min, s.value);
        b.observed_max = std::max(b.observed_max, s.value);
    }
    for (std::size_t c = 0; c < n; ++c) {
        Rational lo = b.samples[c].value, hi = lo;
        for (std::size_t d = 0; d < n; ++d)
            if (R[d][c]) {
                lo = std::min(lo, b.samples[d].value);
                hi = std::max(hi, b.samples[d].value);
            }
        if (c == 0 || lo > b.tail_lower)
            b.tail_lower = lo;
        if (c == 0 || hi < b.tail_upper)
            b.tail_upper = hi;
    }
    b.directed = true;
    for (std::size_t i = 0; i < n && b.directed; ++i)
        for (std::size_t j = i + 1; j < n && b.directed; ++j) {
            bool common = false;
            for (std::size_t d = 0; d < n && !common; ++d)
                common = R[d][i] && R[d][j];
            b.directed = common;
        }
    b.family = description.empty() ? std::to_string(n) + " covers" : std::move(description);
    return b;
}

/// Growth of the right-angled Artin group on a flag complex L.
inline std::size_t raag_growth(const SimplicialComplex& L, int k, Field F = Field::rationals())
{
    if (!is_flag(L).flag)
        throw ComplexError("RAAG growth needs a flag complex");
    return reduced_betti(L, k - 1, F);
}

struct GrowthEstimate {
    std::size_t center = 0;
    Rational error;
    std::size_t boundary_cubes = 0;
};

/// Center b̃_{k−1}(L) and radius 2|∂K_L| / min m_v.
inline GrowthEstimate graph_product_growth_estimate(const GraphProductSpec& spec, int k, Field F = Field::rationals())
{
    spec.validate();
    GrowthEstimate e;
    e.center = reduced_betti(spec.L, k - 1, F);
    e.boundary_cubes = davis_chamber(spec.L).boundary_size();
    e.error = Rational(static_cast<long>(2 * e.boundary_cubes), static_cast<long>(spec.min_order()));
    return e;
}

struct BoundReport {
    std::string target;
    int k = 0;
    Field field;
    std::size_t betti = 0;
    std::size_t degree = 1;
    Rational value;
    std::size_t center = 0;
    Rational error;
    Rational deviation;
    bool within = false;
    /// k = dim L + 1: value ≤ b_{k−1}(L; F).
    bool top_degree = false;
    std::size_t top_bound = 0;
    bool top_ok = true;
    bool pass = false;
};

/// Builds the quotient for `target` and checks |value − b̃_{k−1}(L)| ≤
/// 2|∂K_L| / min k_v, plus the one-sided bound in degree dim L + 1.
inline BoundReport verify_graph_product_bound(const GraphProductSpec& spec, const QuotientTarget& target, int k,
                                              Field F = Field::rationals())
{
    const auto X = building_quotient(spec, target);
    BoundReport r;
    r.target = target.describe();
    r.k = k;
    r.field = F;
    r.betti = betti(ChainComplex(X), k, F);
    r.degree = X.degree();
    r.value = Rational(static_cast<long>(r.betti), static_cast<long>(r.degree));
    r.center = reduced_betti(spec.L, k - 1, F);
    const std::uint64_t kmin = target.divisors.empty() ? 1 : *std::min_element(target.divisors.begin(), target.divisors.end());
    const auto boundary = davis_chamber(spec.L).boundary_size();
    r.error = Rational(static_cast<long>(2 * boundary), static_cast<long>(kmin));
    r.deviation = r.value - Rational(static_cast<long>(r.center));
    if (r.deviation < 0)
        r.deviation = -r.deviation;
    r.within = r.deviation <= r.error;
    r.top_degree = k == spec.L.dimension() + 1;
    if (r.top_degree) {
        r.top_bound = spec.L.num_vertices() ? betti(ChainComplex(spec.L), k - 1, F) : 0;
        r.top_ok = r.value <= Rational(static_cast<long>(r.top_bound));
    }
    r.pass = r.within && r.top_ok;
    return r;
}

// ---------------------------------------------------------------------------
// Mayer–Vietoris

struct MvRow {
    std::string id;
    std::size_t degree = 1;
    std::size_t bX = 0, bA1 = 0, bA2 = 0, bB = 0, bB_prev = 0;
    /// b_k(X′) ≤ b_k(A1′) + b_k(A2′) + b_{k−1}(B′)
    bool upper = false;
    /// b_k(A1′) + b_k(A2′) ≤ b_k(B′) + b_k(X′)
    bool lower = false;
};

struct MvReport {
    int k = 0;
    Field field;
    std::vector<MvRow> rows;
    bool pass = true;
};

inline void validate_decomposition(const CellComplex& X, const Subcomplex& A1, const Subcomplex& A2, const Subcomplex& B)
{
    for (const auto* S : {&A1, &A2, &B})
        if (S->member.size() != X.dimension_count() || !S->is_closed(X))
            throw GrowthError("invalid decomposition: pieces must be subcomplexes of X");
    if (!((A1 | A2) == Subcomplex::full(X)))
        throw GrowthError("invalid decomposition: A1 and A2 do not cover X");
    if (!((A1 & A2) == B))
        throw GrowthError("invalid decomposition: B is not the intersection of A1 and A2");
}

/// Both per-cover inequalities for each cover of X, pulled back to the pieces.
inline MvReport mv_inequality_check(const CellComplex& X, const Subcomplex& A1, const Subcomplex& A2, const Subcomplex& B,
                                    const std::vector<CoverMap>& covers, int k, Field F = Field::rationals())
{
    validate_decomposition(X, A1, A2, B);
    auto b = [&](const CellComplex& Y, const CoverMap& c, const Subcomplex& S, int deg) -> std::size_t {
        if (deg < 0)
            return 0;
        const auto r = restrict_cover(Y, c, S);
        if (r.sub.complex.count(0) == 0)
            return 0;
        return betti(ChainComplex(build_cover(r.sub.complex, r.cover)), deg, F);
    };
    MvReport rep;
    rep.k = k;
    rep.field = F;
    rep.rows = parallel_map(covers.size(), [&](std::size_t i) {
        const auto& c = covers[i];
        MvRow row;
        row.id = c.id;
        row.degree = c.degree;
        row.bX = betti(ChainComplex(build_cover(X, c)), k, F);
        row.bA1 = b(X, c, A1, k);
        row.bA2 = b(X, c, A2, k);
        row.bB = b(X, c, B, k);
        row.bB_prev = b(X, c, B, k - 1);
        row.upper = row.bX <= row.bA1 + row.bA2 + row.bB_prev;
        row.lower = row.bA1 + row.bA2 <= row.bB + row.bX;
        return row;
    });
    for (const auto& r : rep.rows)
        rep.pass = rep.pass && r.upper && r.lower;
    return rep;
}

// ---------------------------------------------------------------------------
// Nerves

struct NerveResult {
    SimplicialComplex nerve;
    std::vector<Simplex> acyclic;
    std::size_t betti = 0;
};

/**
 * X covered by subcomplexes; `acyclic` lists the nerve simplices (sets of
 * piece indices) whose intersection is flagged acyclic for growth. Every
 * other nonempty intersection must be a single vertex. Returns
 * b_k(𝒩, 𝓛; F) with 𝓛 the flagged simplices.
 */
inline NerveResult nerve_relative_betti(const CellComplex& X, const std::vector<Subcomplex>& pieces, std::vector<Simplex> acyclic, int k,
                                        Field F = Field::rationals())
{
    const std::size_t n = pieces.size();
    if (n == 0)
        throw GrowthError("nerve needs at least one piece");
    if (n > 20)
        throw GrowthError("nerve: too many pieces");
    Subcomplex all = Subcomplex::empty(X);
    for (const auto& P : pieces) {
        if (P.member.size() != X.dimension_count() || !P.is_closed(X))
            throw GrowthError("nerve pieces must be subcomplexes");
        all = all | P;
    }
    if (!(all == Subcomplex::full(X)))
        throw GrowthError("pieces do not cover X");
    for (auto& s : acyclic)
        std::sort(s.begin(), s.end());
    std::sort(acyclic.begin(), acyclic.end());
    std::vector<Simplex> simplices;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        Simplex s;
        Subcomplex I = Subcomplex::full(X);
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                s.push_back(i);
                I = I & pieces[i];
            }
        if (I.size() == 0)
            continue;
        const bool flagged = std::binary_search(acyclic.begin(), acyclic.end(), s);
        if (!flagged && !(I.size() == 1 && std::count(I.member[0].begin(), I.member[0].end(), true) == 1)) {
            std::string name;
            for (auto i : s)
                name += (name.empty() ? "" : ",") + std::to_string(i);
            throw GrowthError("intersection of pieces {" + name + "} is neither flagged acyclic nor a point");
        }
        simplices.push_back(std::move(s));
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("U" + std::to_string(i));
    NerveResult out{SimplicialComplex(names, simplices), {}, 0};
    std::vector<std::vector<bool>> mask;
    for (int d = 0; d <= out.nerve.dimension(); ++d) {
        mask.emplace_back();
        for (const auto& s : out.nerve.simplices(d)) {
            const bool flagged = std::binary_search(acyclic.begin(), acyclic.end(), s);
            mask.back().push_back(flagged);
            if (flagged) {
                out.acyclic.push_back(s);
                for (std::size_t i = 0; i < s.size() && s.size() > 1; ++i) {
                    auto face = s;
                    face.erase(face.begin() + static_cast<long>(i));
                    if (!std::binary_search(acyclic.begin(), acyclic.end(), face))
                        throw GrowthError("flagged simplices must be closed under faces");
                }
            }
        }
    }
    for (const auto& s : acyclic)
        if (!out.nerve.contains(s))
            throw GrowthError("flagged simplex is not in the nerve");
    out.betti = betti(ChainComplex(out.nerve).relative(mask), k, F);
    return out;
}

// ---------------------------------------------------------------------------
// Mapping tori

struct TorusDecay {
    std::vector<std::size_t> degrees;
    std::vector<std::size_t> betti;
    std::vector<Rational> values;
    bool monotone = true;
};

/// Normalized b_k of the degree-m covers unwrapping the circle direction.
inline TorusDecay mapping_torus_decay(const SimplicialComplex& K, const std::vector<std::size_t>& f, int k, Field F,
                                      const std::vector<std::size_t>& degrees)
{
    const auto T = mapping_torus(K, f);
    TorusDecay out;
    out.degrees = degrees;
    auto samples = parallel_map(degrees.size(), [&](std::size_t i) {
        if (degrees[i] == 0)
            throw GrowthError("cover degree must be positive");
        return normalized_betti(T.complex, torus_direction_cover(T, degrees[i]), k, F);
    });
    for (const auto& s : samples) {
        out.betti.push_back(s.betti);
        out.values.push_back(s.value);
    }
    for (std::size_t i = 1; i < degrees.size(); ++i)
        if (degrees[i] > degrees[i - 1] && out.values[i] > out.values[i - 1])
            out.monotone = false;
    return out;
}

} // namespace homgrow
