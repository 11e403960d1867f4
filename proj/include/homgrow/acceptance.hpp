// The acceptance suites, shared by the acceptance test and `homgrow verify`.
// Each suite is exact; its runtime is measured against a fixed limit.
#pragma once

#include "embedding.hpp"
#include "growth.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>

namespace homgrow::acceptance {

inline constexpr std::uint64_t default_seed = 7;

struct Options {
    std::uint64_t seed = default_seed;
    /// Overrides the trial count of randomized suites when nonzero.
    std::size_t trials = 0;
};

struct Result {
    int id = 0;
    std::string name;
    std::size_t passed = 0;
    std::size_t total = 0;
    double seconds = 0;
    double limit = 0;
    std::string detail;
    bool checks_ok() const { return total > 0 && passed == total; }
    bool pass() const { return checks_ok() && seconds < limit; }

    std::string line() const
    {
        std::ostringstream out;
        out.setf(std::ios::fixed);
        out.precision(2);
        out << "criterion " << id << " [" << name << "]: " << (pass() ? "PASS" : "FAIL") << " (" << passed << "/" << total
            << " checks, " << seconds << " s < " << limit << " s)";
        if (!detail.empty())
            out << " " << detail;
        return out.str();
    }
};

namespace detail {

struct Tally {
    Result& r;
    std::vector<std::string> failures;
    void check(bool ok, const std::string& what)
    {
        ++r.total;
        if (ok)
            ++r.passed;
        else if (failures.size() < 3)
            failures.push_back(what);
    }
    void finish()
    {
        for (const auto& f : failures)
            r.detail += (r.detail.empty() ? "first failures: " : "; ") + f;
    }
};

inline std::vector<std::pair<std::string, SimplicialComplex>> graph_product_complexes()
{
    return {{"point", shapes::full_simplex(0)},     {"two points", shapes::discrete(2)}, {"edge", shapes::full_simplex(1)},
            {"4-cycle", shapes::cycle(4)},          {"5-cycle", shapes::cycle(5)},       {"triangle", shapes::full_simplex(2)}};
}

inline SimplicialComplex random_complex(std::mt19937_64& rng, std::size_t n, std::size_t facets, std::size_t max_size)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("v" + std::to_string(i));
    std::vector<Simplex> maximal;
    for (std::size_t f = 0; f < facets; ++f) {
        Simplex s;
        const std::size_t size = 1 + rng() % max_size;
        while (s.size() < size) {
            const std::size_t v = rng() % n;
            if (std::find(s.begin(), s.end(), v) == s.end())
                s.push_back(v);
        }
        maximal.push_back(s);
    }
    return SimplicialComplex(names, maximal);
}

inline SimplicialComplex random_flag(std::mt19937_64& rng, std::size_t n, double p)
{
    std::bernoulli_distribution edge(p);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            adj[i][j] = adj[j][i] = edge(rng);
    std::vector<Simplex> cliques;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        Simplex s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                s.push_back(i);
        bool ok = true;
        for (std::size_t i = 0; i < s.size() && ok; ++i)
            for (std::size_t j = i + 1; j < s.size() && ok; ++j)
                ok = adj[s[i]][s[j]];
        if (ok)
            cliques.push_back(s);
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("v" + std::to_string(i));
    return SimplicialComplex(names, cliques);
}

/// Random labelled tree: vertex i > 0 attaches to a uniform earlier vertex.
inline SimplicialComplex random_tree(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("t" + std::to_string(i));
    std::vector<Simplex> edges;
    for (std::size_t i = 1; i < n; ++i)
        edges.push_back({rng() % i, i});
    return SimplicialComplex(names, edges);
}

inline std::vector<Point> random_perturbation(std::size_t n, int d, std::mt19937_64& rng)
{
    std::vector<Point> X;
    for (std::size_t v = 0; v < n; ++v) {
        Point p;
        for (int k = 0; k < 2 * d; ++k)
            p.push_back(Rational(static_cast<long>(rng() % 1999) - 999, 97 + static_cast<long>(rng() % 900)));
        if (std::all_of(p.begin(), p.end(), [](const Rational& q) { return q == 0; }))
            p[0] = 1;
        X.push_back(p);
    }
    return X;
}

/// A perturbed octahedral immersion, drawing a new X when one degenerates.
inline OctahedralImmersion perturbed(const SimplicialComplex& L, std::mt19937_64& rng)
{
    for (int attempt = 0;; ++attempt) {
        try {
            return perturbed_octahedral_immersion(moment_immersion(L, 1), random_perturbation(L.num_vertices(), 1, rng), Rational(1, 2));
        } catch (const EmbeddingError&) {
            if (attempt == 9)
                throw;
        }
    }
}

} // namespace detail

/// 1: L = two points, b_1 of the full quotient is (m−1)².
inline void free_product(Result& r, const Options&)
{
    detail::Tally t{r, {}};
    for (std::uint64_t m : {2u, 3u, 5u}) {
        GraphProductSpec spec{shapes::discrete(2), {m, m}};
        const auto X = building_quotient(spec, QuotientTarget::full(spec));
        const long b1 = static_cast<long>(betti(ChainComplex(X), 1));
        const long mm = static_cast<long>(m);
        // Euler characteristic oracle for a connected graph.
        const long chi = static_cast<long>(X.count(0)) - static_cast<long>(X.count(1));
        t.check(X.dimension() == 1 && betti(ChainComplex(X), 0) == 1, "m=" + std::to_string(m) + " not a connected graph");
        t.check(b1 == 1 - chi, "m=" + std::to_string(m) + " Euler characteristic");
        t.check(b1 == (mm - 1) * (mm - 1), "m=" + std::to_string(m) + " b1");
        const Rational value(b1, mm * mm);
        t.check(value == Rational((mm - 1) * (mm - 1), mm * mm), "m=" + std::to_string(m) + " value");
        const Rational dev = value > 1 ? Rational(value - 1) : Rational(1 - value);
        t.check(dev <= Rational(4, mm), "m=" + std::to_string(m) + " bound");
        const auto rep = verify_graph_product_bound(spec, QuotientTarget::full(spec), 1);
        t.check(rep.pass && rep.value == value && rep.error == Rational(4, mm), "m=" + std::to_string(m) + " report");
    }
    t.finish();
}

/// 2: the graph-product bound for every listed L, m, degree and field.
inline void graph_product_bounds(Result& r, const Options&)
{
    detail::Tally t{r, {}};
    struct Job {
        std::string label;
        GraphProductSpec spec;
        int k;
        Field F;
    };
    std::vector<Job> jobs;
    for (const auto& [name, L] : detail::graph_product_complexes())
        for (std::uint64_t m : {2u, 3u})
            for (int k = 0; k <= L.dimension() + 1; ++k)
                for (Field F : {Field::rationals(), Field::prime(2), Field::prime(3)})
                    jobs.push_back({name + " m=" + std::to_string(m) + " k=" + std::to_string(k) + " " + F.tag(),
                                    {L, std::vector<std::uint64_t>(L.num_vertices(), m)}, k, F});
    auto reports = parallel_map(jobs.size(), [&](std::size_t i) {
        return verify_graph_product_bound(jobs[i].spec, QuotientTarget::full(jobs[i].spec), jobs[i].k, jobs[i].F);
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        t.check(reports[i].within, jobs[i].label + " two-sided bound");
        if (reports[i].top_degree)
            t.check(reports[i].top_ok, jobs[i].label + " top-degree bound");
    }
    t.finish();
}

/// 3: Kuratowski graphs and K4 with moment coordinates.
inline void kuratowski(Result& r, const Options&)
{
    detail::Tally t{r, {}};
    const auto k33 = moment_immersion(shapes::k33(), 1);
    t.check(generic_check(k33).generic, "K33 moment immersion generic");
    t.check(mod2_graph_obstruction(k33) == 1, "K33 obstruction is 1");
    const auto V33 = intersection_vector(k33);
    t.check(!vankampen_solve(k33.source, reduce_mod2(V33), Ring::f2).solved, "K33 unsolvable over F2");
    const auto k4 = moment_immersion(shapes::complete_graph(4), 1);
    const auto V4 = intersection_vector(k4);
    const auto s4 = vankampen_solve(k4.source, reduce_mod2(V4), Ring::f2);
    t.check(s4.solved, "K4 solvable over F2");
    t.check(s4.solved && apply_solution(k4.source, reduce_mod2(V4), s4).is_zero(), "K4 solution clears V");
    const auto k5 = moment_immersion(shapes::complete_graph(5), 1);
    const auto V5 = intersection_vector(k5);
    t.check(mod2_graph_obstruction(k5) == 1, "K5 obstruction is 1");
    t.check(!vankampen_solve(k5.source, reduce_mod2(V5), Ring::f2).solved, "K5 unsolvable over F2");
    t.finish();
}

/// 4: random finger moves and geometric detours.
inline void finger_moves(Result& r, const Options& opt)
{
    detail::Tally t{r, {}};
    std::mt19937_64 rng(opt.seed);
    const std::vector<std::pair<std::string, SimplicialComplex>> graphs{
        {"K33", shapes::k33()}, {"K5", shapes::complete_graph(5)}, {"K4", shapes::complete_graph(4)}};
    std::vector<IntersectionVector> V;
    std::vector<bool> solvable;
    for (const auto& [name, G] : graphs) {
        V.push_back(intersection_vector(moment_immersion(G, 1)));
        solvable.push_back(vankampen_solve(G, reduce_mod2(V.back()), Ring::f2).solved);
    }
    const std::size_t moves = opt.trials ? opt.trials : 500;
    for (std::size_t step = 0; step < moves; ++step) {
        const std::size_t g = step % graphs.size();
        const auto& G = graphs[g].second;
        const std::size_t s = rng() % V[g].tops.size();
        Cochain rho(G.num_vertices(), Integer(0));
        for (std::size_t v = 0; v < rho.size(); ++v)
            if (disjoint(V[g].tops[s], {v}))
                rho[v] = static_cast<long>(rng() % 7) - 3;
        V[g] = finger_move(G, V[g], s, rho);
        const bool same_class = vankampen_solve(G, reduce_mod2(V[g]), Ring::f2).solved == solvable[g];
        const bool parity = g == 2 || mod2_obstruction(V[g]) == 1;
        t.check(symmetric(V[g]) && same_class && parity, graphs[g].first + " move " + std::to_string(step));
    }
    std::size_t cases = 0;
    for (std::size_t attempt = 0; cases < 20 && attempt < 200; ++attempt) {
        const auto& [name, G] = graphs[attempt % graphs.size()];
        const auto f = moment_immersion(G, 1);
        const auto& tops = G.simplices(1);
        const std::size_t s = rng() % tops.size();
        const std::size_t v = rng() % G.num_vertices();
        if (!disjoint(tops[s], {v}))
            continue;
        const bool ccw = rng() % 2;
        const auto c = finger_detour(f, s, v, ccw, rng);
        t.check(c.agree, name + " detour of " + G.simplex_name(tops[s]) + " around " + G.name(v));
        ++cases;
    }
    t.check(cases == 20, "20 detour cases placed");
    t.finish();
}

/// 5: N_ε ≤ N log‖Δ‖ / log(1/ε) on random symmetric integer matrices.
inline void small_eigenvalues(Result& r, const Options& opt)
{
    detail::Tally t{r, {}};
    std::mt19937_64 rng(opt.seed);
    const std::size_t trials = opt.trials ? opt.trials : 200;
    std::vector<std::vector<std::vector<std::int64_t>>> mats;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        std::vector<std::vector<std::int64_t>> A(n, std::vector<std::int64_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                A[i][j] = A[j][i] = static_cast<std::int64_t>(rng() % 19) - 9;
        mats.push_back(std::move(A));
    }
    auto ok = parallel_map(mats.size(), [&](std::size_t i) {
        bool all = true;
        for (const Rational& eps : {Rational(1, 2), Rational(1, 4), Rational(1, 8)})
            all = all && small_eigenvalue_check(mats[i], eps).pass;
        return all;
    });
    for (std::size_t i = 0; i < ok.size(); ++i)
        t.check(ok[i], "matrix " + std::to_string(i));
    t.finish();
}

/// 6: a connected cover of the wedge of two circles past which normalized
/// b_1 varies by at most 2δ, δ = 1/4.
inline void pinching(Result& r, const Options&)
{
    detail::Tally t{r, {}};
    const Rational delta(1, 4);
    const auto X = to_cell_complex(build_complex({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "d"}, {"d", "e"}, {"e", "a"}}));
    const Rational D = operator_norm_bound(ChainComplex(X), 1);
    CoverMap chosen;
    bool found = false;
    for (const auto& e : enumerate_covers(X, 4, 4))
        if (e.transitive) {
            chosen = e.cover;
            found = true;
            break;
        }
    t.check(found, "connected degree-4 cover exists");
    if (!found) {
        t.finish();
        return;
    }
    const auto Xd = build_cover(X, chosen);
    t.check(cover_components(X, chosen) == 1 && betti(ChainComplex(Xd), 1) == 5, "X_delta connected with b1 = 5");
    const auto further = enumerate_covers(Xd, 3);
    struct Row {
        Rational value;
        bool pinch_ok;
        bool formula_ok;
    };
    auto rows = parallel_map(further.size(), [&](std::size_t i) {
        const auto& c = further[i].cover;
        const auto Y = build_cover(Xd, c);
        const ChainComplex C(Y);
        const auto b1 = betti(C, 1);
        const long deg = static_cast<long>(4 * c.degree);
        const Rational value(static_cast<long>(b1), deg);
        const auto comps = static_cast<long>(Y.components().second);
        // Lifted Laplacians keep the base row-sum bound.
        const Rational trace = pinch_trace(laplacian(C, 1), D, 8);
        return Row{value, Rational(static_cast<long>(b1)) <= trace, value == 1 + Rational(comps, deg)};
    });
    Rational lo = rows.empty() ? Rational(0) : rows[0].value, hi = lo;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        lo = std::min(lo, rows[i].value);
        hi = std::max(hi, rows[i].value);
        t.check(rows[i].pinch_ok, "pinch trace bound, cover " + further[i].cover.id);
        t.check(rows[i].formula_ok && rows[i].value > 1 && rows[i].value <= 1 + delta, "value 1 + c/n, cover " + further[i].cover.id);
    }
    t.check(hi - lo <= 2 * delta, "window " + to_string(hi - lo) + " exceeds 2 delta");
    r.detail = "window [" + to_string(lo) + ", " + to_string(hi) + "] over " + std::to_string(rows.size()) + " covers";
    t.finish();
}

/// 7: the universal-coefficient inequality.
inline void universal_coefficients(Result& r, const Options& opt)
{
    detail::Tally t{r, {}};
    std::vector<std::pair<std::string, ChainComplex>> cases{
        {"RP2", ChainComplex(shapes::rp2())}, {"Klein torus", ChainComplex(mapping_torus(shapes::cycle(4), {0, 3, 2, 1}).complex)}};
    std::mt19937_64 rng(opt.seed);
    const std::size_t trials = opt.trials ? opt.trials : 100;
    for (std::size_t i = 0; i < trials; ++i)
        cases.emplace_back("random " + std::to_string(i), ChainComplex(detail::random_complex(rng, 7, 7, 3)));
    auto ok = parallel_map(cases.size(), [&](std::size_t i) {
        bool all = true;
        for (std::uint64_t p : {2u, 3u, 5u})
            for (int k = 0; k <= cases[i].second.top_degree(); ++k)
                all = all && uct_inequality_check(cases[i].second, k, p).pass;
        return all;
    });
    for (std::size_t i = 0; i < ok.size(); ++i)
        t.check(ok[i], cases[i].first);
    // The Klein torus carries 2-torsion: F2 sees more than Q.
    t.check(betti(cases[1].second, 1, Field::prime(2)) == betti(cases[1].second, 1) + 1, "Klein torus torsion");
    t.finish();
}

/// 8: fiber covers of the torus.
inline void torus_decay(Result& r, const Options&)
{
    detail::Tally t{r, {}};
    const std::vector<std::size_t> degrees{1, 2, 4, 8};
    const auto d = mapping_torus_decay(shapes::cycle(3), {0, 1, 2}, 1, Field::rationals(), degrees);
    for (std::size_t i = 0; i < degrees.size(); ++i)
        t.check(d.values[i] == Rational(2, static_cast<long>(degrees[i])), "m=" + std::to_string(degrees[i]));
    t.check(d.monotone, "monotone");
    r.detail = "values";
    for (const auto& v : d.values)
        r.detail += " " + to_string(v);
    t.finish();
}

/// 9: the wedge of two circles covered by its circles.
inline void nerve(Result& r, const Options&)
{
    detail::Tally t{r, {}};
    const auto X = to_cell_complex(build_complex({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "d"}, {"d", "e"}, {"e", "a"}}));
    std::vector<Subcomplex> pieces(2, Subcomplex::empty(X));
    const auto closure = X.closure_vertices();
    for (int k = 0; k <= 1; ++k)
        for (std::size_t i = 0; i < X.count(k); ++i) {
            const auto& vs = closure[static_cast<std::size_t>(k)][i];
            pieces[0].member[static_cast<std::size_t>(k)][i] = std::all_of(vs.begin(), vs.end(), [](std::size_t v) { return v <= 2; });
            pieces[1].member[static_cast<std::size_t>(k)][i] =
                std::all_of(vs.begin(), vs.end(), [](std::size_t v) { return v == 0 || v >= 3; });
        }
    const auto res = nerve_relative_betti(X, pieces, {{0}, {1}}, 1);
    const auto raag = raag_growth(shapes::discrete(2), 1);
    t.check(res.betti == 1, "b1(N, L) = 1");
    t.check(raag == 1, "RAAG growth of two points");
    t.check(res.betti == raag, "nerve matches RAAG formula");
    r.detail = "b1(N,L) = " + std::to_string(res.betti);
    t.finish();
}

/// 10: octahedralization counts and the octahedral reduction.
inline void octahedral(Result& r, const Options& opt)
{
    detail::Tally t{r, {}};
    std::mt19937_64 rng(opt.seed);
    for (int trial = 0; trial < 50; ++trial) {
        const auto L = detail::random_flag(rng, 4 + rng() % 4, 0.5);
        const auto O = octahedralize(L);
        bool ok = O.complex.num_vertices() == 2 * L.num_vertices();
        for (int k = 0; k <= L.dimension(); ++k)
            ok = ok && O.complex.count(k) == (std::size_t{1} << (k + 1)) * L.count(k);
        t.check(ok, "flag complex " + std::to_string(trial));
    }
    for (int trial = 0; trial < 10; ++trial) {
        const auto L = detail::random_tree(rng, 3 + rng() % 5);
        const auto oi = detail::perturbed(L, rng);
        const auto O = octahedralize(L);
        const auto V = intersection_vector(oi.immersion);
        const auto res = octahedral_obstruction_reduce(L, 1, O, V);
        auto W = V;
        for (const auto& [s, rho] : res.moves)
            W = finger_move(O.complex, W, s, rho);
        t.check(res.success && W.is_zero(), "tree " + std::to_string(trial));
    }
    const auto C = shapes::cycle(4);
    const auto oi = detail::perturbed(C, rng);
    const auto res = octahedral_obstruction_reduce(C, 1, octahedralize(C), intersection_vector(oi.immersion));
    t.check(!res.success && res.failed_simplex && !res.certificate.empty(), "circle fails with certificate");
    t.finish();
}

/// 11: per-cover Mayer–Vietoris inequalities on building quotients.
inline void mayer_vietoris(Result& r, const Options& opt)
{
    detail::Tally t{r, {}};
    std::mt19937_64 rng(opt.seed);
    struct Job {
        std::string label;
        CellComplex X;
        std::vector<CoverMap> covers;
        std::vector<std::size_t> centers;
    };
    std::vector<Job> jobs;
    for (const auto& [name, L] : detail::graph_product_complexes())
        for (std::uint64_t m : {2u, 3u}) {
            GraphProductSpec spec{L, std::vector<std::uint64_t>(L.num_vertices(), m)};
            Job job{name + " m=" + std::to_string(m), building_quotient(spec, QuotientTarget::full(spec)), {}, {}};
            job.covers.push_back(CoverMap::trivial(job.X, 1, "identity"));
            if (pi1_presentation(job.X).generator_edges.size() <= 4)
                for (const auto& e : enumerate_covers(job.X, 2, 2))
                    job.covers.push_back(e.cover);
            for (std::uint64_t p : {2u, 3u})
                job.covers.push_back(random_cocycle_cover(job.X, p, rng, "cocycle mod " + std::to_string(p)));
            const std::size_t nv = job.X.count(0);
            for (std::size_t c = 0; c < std::min<std::size_t>(nv, 2); ++c)
                job.centers.push_back(rng() % nv);
            jobs.push_back(std::move(job));
        }
    for (const auto& job : jobs)
        for (auto x : job.centers) {
            const auto d = star_decomposition(job.X, x);
            for (int k = 0; k <= job.X.dimension(); ++k) {
                const auto rep = mv_inequality_check(job.X, d.A1, d.A2, d.B, job.covers, k);
                for (const auto& row : rep.rows)
                    t.check(row.upper && row.lower, job.label + " star " + std::to_string(x) + " k=" + std::to_string(k) + " " + row.id);
            }
        }
    t.finish();
}

struct Suite {
    int id;
    std::string name;
    std::string group;
    double limit;
    std::function<void(Result&, const Options&)> run;
};

inline const std::vector<Suite>& suites()
{
    static const std::vector<Suite> all{
        {1, "free-product kernel", "modpl2", 1, free_product},
        {2, "graph-product bounds", "modpl2", 30, graph_product_bounds},
        {3, "Kuratowski obstructions", "appendixC", 1, kuratowski},
        {4, "finger-move calculus", "appendixC", 10, finger_moves},
        {5, "small eigenvalues", "smalleigs", 30, small_eigenvalues},
        {6, "delta-pinching", "pinch", 30, pinching},
        {7, "universal coefficients", "uct", 60, universal_coefficients},
        {8, "mapping-torus decay", "torus", 5, torus_decay},
        {9, "nerve example", "nerve", 1, nerve},
        {10, "octahedral reduction", "appendixC", 30, octahedral},
        {11, "Mayer-Vietoris per cover", "mv", 60, mayer_vietoris},
    };
    return all;
}

inline Result run(const Suite& s, const Options& opt)
{
    Result r;
    r.id = s.id;
    r.name = s.name;
    r.limit = s.limit;
    const auto start = std::chrono::steady_clock::now();
    try {
        s.run(r, opt);
    } catch (const std::exception& e) {
        ++r.total;
        r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace homgrow::acceptance
