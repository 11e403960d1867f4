#include <homgrow/embedding.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace homgrow;

namespace {

// Oracle: segment crossing sign in floating point, cross(b−a, d−c).
int float_cross(const Point& a, const Point& b, const Point& c, const Point& d)
{
    auto x = [](const Point& p) { return p[0].convert_to<double>(); };
    auto y = [](const Point& p) { return p[1].convert_to<double>(); };
    auto orient = [&](const Point& p, const Point& q, const Point& r) {
        return (x(q) - x(p)) * (y(r) - y(p)) - (y(q) - y(p)) * (x(r) - x(p));
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) {
        const double det = (x(b) - x(a)) * (y(d) - y(c)) - (y(b) - y(a)) * (x(d) - x(c));
        return det > 0 ? 1 : -1;
    }
    return 0;
}

Immersion random_immersion(const SimplicialComplex& L, int d, std::mt19937_64& rng)
{
    Immersion f{d, L, {}};
    for (std::size_t v = 0; v < L.num_vertices(); ++v) {
        Point p;
        for (int k = 0; k < 2 * d; ++k)
            p.push_back(Rational(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 3)));
        f.coords.push_back(p);
    }
    return f;
}

SimplicialComplex random_graph(std::mt19937_64& rng, std::size_t n, double p)
{
    std::bernoulli_distribution coin(p);
    std::vector<std::vector<std::string>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng))
                edges.push_back({"v" + std::to_string(i), "v" + std::to_string(j)});
    return build_complex(edges);
}

std::vector<Point> random_perturbation(std::size_t n, int d, std::mt19937_64& rng)
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

} // namespace

TEST_CASE("van Kampen obstruction of the Kuratowski graphs")
{
    for (auto G : {shapes::k33(), shapes::complete_graph(5)}) {
        auto f = moment_immersion(G, 1);
        REQUIRE(generic_check(f).generic);
        CHECK(mod2_graph_obstruction(f) == 1);
        auto V = intersection_vector(f);
        CHECK(symmetric(V));
        auto z = vankampen_solve(G, V, Ring::integers);
        CHECK_FALSE(z.solved);
        CHECK_FALSE(z.certificate.empty());
        auto f2 = vankampen_solve(G, reduce_mod2(V), Ring::f2);
        CHECK_FALSE(f2.solved);
        CHECK(f2.modulus == 2);
        CHECK_FALSE(f2.completeness_caveat);
        CHECK_THROWS_WITH(vankampen_solve(G, reduce_mod2(V), Ring::integers), Catch::Matchers::ContainsSubstring("ring mismatch"));
    }
}

TEST_CASE("planar graphs have solvable finger-move systems")
{
    for (auto G : {shapes::complete_graph(4), shapes::cycle(6), shapes::octahedron_boundary()}) {
        // The octahedron boundary is 2-dimensional; use its 1-skeleton.
        SimplicialComplex H = G;
        if (G.dimension() > 1) {
            std::vector<std::vector<std::string>> edges;
            for (const auto& e : G.simplices(1))
                edges.push_back({G.name(e[0]), G.name(e[1])});
            H = build_complex(edges);
        }
        auto f = moment_immersion(H, 1);
        auto V = intersection_vector(f);
        auto sol = vankampen_solve(H, V, Ring::integers);
        REQUIRE(sol.solved);
        CHECK(apply_solution(H, V, sol).is_zero());
        CHECK(vankampen_solve(H, reduce_mod2(V), Ring::f2).solved);
    }
}

TEST_CASE("intersection vectors match a floating-point oracle")
{
    std::mt19937_64 rng(31);
    int nonzero = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto G = random_graph(rng, 7, 0.5);
        if (G.count(1) == 0)
            continue;
        auto f = random_immersion(G, 1, rng);
        bool generic;
        try {
            generic = generic_check(f).generic;
        } catch (const EmbeddingError&) {
            continue;
        }
        if (!generic)
            continue;
        auto V = intersection_vector(f);
        CHECK(symmetric(V));
        for (const auto& [k, v] : V.entries) {
            const auto& s = V.tops[k.first];
            const auto& t = V.tops[k.second];
            CHECK(v == float_cross(f.coords[s[0]], f.coords[s[1]], f.coords[t[0]], f.coords[t[1]]));
            nonzero += v != 0;
        }
    }
    CHECK(nonzero > 20);
}

TEST_CASE("symmetry in dimension two")
{
    std::mt19937_64 rng(32);
    int checked = 0;
    for (int trial = 0; trial < 30 && checked < 8; ++trial) {
        auto L = shapes::simplex_boundary(2);
        if (trial % 2)
            L = shapes::rp2();
        auto f = random_immersion(L, 2, rng);
        try {
            if (!generic_check(f).generic)
                continue;
        } catch (const EmbeddingError&) {
            continue;
        }
        auto V = intersection_vector(f);
        CHECK(symmetric(V));
        CHECK(vankampen_solve(L, V, Ring::integers).completeness_caveat);
        ++checked;
    }
    CHECK(checked >= 4);
}

TEST_CASE("degenerate immersions are rejected")
{
    auto P = build_complex({{"a", "b"}, {"c", "d"}});
    Immersion f{1, P, {{Rational(0), Rational(0)}, {Rational(2), Rational(0)}, {Rational(1), Rational(0)}, {Rational(3), Rational(0)}}};
    CHECK_FALSE(generic_check(f).generic);
    CHECK_THROWS_AS(intersection_vector(f), EmbeddingError);
    Immersion g{1, P, {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}, {Rational(1), Rational(1)}, {Rational(3), Rational(0)}}};
    CHECK_THROWS_AS(generic_check(g), EmbeddingError);
    CHECK_THROWS_AS(moment_immersion(shapes::full_simplex(2), 1), EmbeddingError);
}

TEST_CASE("finger moves keep symmetry and the mod 2 count on Kuratowski graphs")
{
    std::mt19937_64 rng(33);
    for (auto G : {shapes::k33(), shapes::complete_graph(5)}) {
        auto V = intersection_vector(moment_immersion(G, 1));
        for (int step = 0; step < 40; ++step) {
            Cochain rho(G.num_vertices(), Integer(0));
            const std::size_t s = rng() % V.tops.size();
            for (std::size_t v = 0; v < rho.size(); ++v)
                if (disjoint(V.tops[s], {v}))
                    rho[v] = static_cast<long>(rng() % 5) - 2;
            V = finger_move(G, V, s, rho);
            CHECK(symmetric(V));
            CHECK(mod2_obstruction(V) == 1);
        }
    }
}

TEST_CASE("geometric finger detours agree with the algebraic move")
{
    std::mt19937_64 rng(34);
    int cases = 0;
    for (auto G : {shapes::complete_graph(4), shapes::k33(), shapes::complete_graph(5)}) {
        auto f = moment_immersion(G, 1);
        const auto& tops = G.simplices(1);
        for (std::size_t s = 0; s < tops.size(); ++s)
            for (std::size_t v = 0; v < G.num_vertices(); ++v) {
                if (!disjoint(tops[s], {v}))
                    continue;
                for (bool ccw : {true, false}) {
                    auto c = finger_detour(f, s, v, ccw, rng);
                    CHECK(c.agree);
                    ++cases;
                }
            }
    }
    CHECK(cases > 50);
}

TEST_CASE("top cohomology")
{
    auto tree = build_complex({{"a", "b"}, {"b", "c"}, {"b", "d"}});
    CHECK(top_cohomology(tree, 1).free_rank == 0);
    CHECK(top_cohomology(tree, 1).finite_odd());
    auto C4 = top_cohomology(shapes::cycle(4), 1);
    CHECK(C4.free_rank == 1);
    CHECK_FALSE(C4.finite_odd());
    auto rp2 = top_cohomology(shapes::rp2(), 2);
    CHECK(rp2.free_rank == 0);
    CHECK(rp2.torsion == std::vector<Integer>{2});
    CHECK_FALSE(rp2.finite_odd());
}

TEST_CASE("octahedral reduction")
{
    std::mt19937_64 rng(35);
    SECTION("trees reduce to zero")
    {
        for (auto L : {build_complex({{"a", "b"}, {"b", "c"}, {"c", "d"}}), build_complex({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"d", "e"}})}) {
            for (int trial = 0; trial < 3; ++trial) {
                auto f = moment_immersion(L, 1);
                auto oi = perturbed_octahedral_immersion(f, random_perturbation(L.num_vertices(), 1, rng), Rational(1, 2));
                CHECK(invariance_check(oi.immersion, oi.projection));
                auto O = octahedralize(L);
                auto res = octahedral_obstruction_reduce(L, 1, O, intersection_vector(oi.immersion));
                CHECK(res.success);
                CHECK(res.scale == 1);
                // Replaying the recorded moves clears the vector.
                auto V = intersection_vector(oi.immersion);
                for (const auto& [s, rho] : res.moves)
                    V = finger_move(O.complex, V, s, rho);
                CHECK(V.is_zero());
            }
        }
    }
    SECTION("the 4-cycle fails with a certificate")
    {
        auto L = shapes::cycle(4);
        auto f = moment_immersion(L, 1);
        auto oi = perturbed_octahedral_immersion(f, random_perturbation(4, 1, rng), Rational(1, 2));
        auto O = octahedralize(L);
        auto V = intersection_vector(oi.immersion);
        // OL(C4) = K_{4,4} is not planar.
        CHECK_FALSE(vankampen_solve(O.complex, V, Ring::integers).solved);
        auto res = octahedral_obstruction_reduce(L, 1, O, V);
        CHECK_FALSE(res.success);
        REQUIRE(res.failed_simplex);
        CHECK_FALSE(res.certificate.empty());
    }
    SECTION("non-invariant vectors are rejected")
    {
        auto L = build_complex({{"a", "b"}, {"b", "c"}, {"c", "d"}});
        auto O = octahedralize(L);
        auto V = empty_vector(O.complex, 1);
        REQUIRE_FALSE(V.entries.empty());
        // Two lifts τ, τ' of one edge, both disjoint from σ: change only V(σ,τ).
        bool changed = false;
        for (auto it = V.entries.begin(); it != V.entries.end() && !changed; ++it)
            for (const auto& [k2, v2] : V.entries)
                if (k2.first == it->first.first && k2.second != it->first.second &&
                    O.projection[V.tops[k2.second][0]] == O.projection[V.tops[it->first.second][0]] &&
                    O.projection[V.tops[k2.second][1]] == O.projection[V.tops[it->first.second][1]]) {
                    it->second = 1;
                    V.entries[{it->first.second, it->first.first}] = -1;
                    changed = true;
                    break;
                }
        REQUIRE(changed);
        CHECK_THROWS_WITH(octahedral_obstruction_reduce(L, 1, O, V), Catch::Matchers::ContainsSubstring("invariance violated"));
    }
    SECTION("zero perturbations are rejected")
    {
        auto L = shapes::cycle(4);
        std::vector<Point> X(4, Point{Rational(1), Rational(0)});
        X[2] = {Rational(0), Rational(0)};
        CHECK_THROWS_AS(perturbed_octahedral_immersion(moment_immersion(L, 1), X, Rational(1, 2)), EmbeddingError);
    }
}
