#include <homgrow/growth.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace homgrow;

namespace {

CellComplex wedge() { return presentation_complex(2, {}); }

CellComplex simplicial_wedge() { return to_cell_complex(build_complex({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "d"}, {"d", "e"}, {"e", "a"}})); }

SimplicialComplex torus_surface()
{
    // 3x3 grid triangulation of the torus.
    std::vector<std::vector<std::string>> tris;
    auto v = [](int i, int j) { return "t" + std::to_string((i % 3 + 3) % 3) + std::to_string((j % 3 + 3) % 3); };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            tris.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
            tris.push_back({v(i, j), v(i, j + 1), v(i + 1, j + 1)});
        }
    return build_complex(tris);
}

SimplicialComplex random_complex(std::mt19937_64& rng, std::size_t n, std::size_t facets, std::size_t max_size)
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

} // namespace

TEST_CASE("normalized Betti numbers of wedge covers")
{
    const auto W = wedge();
    for (const auto& e : enumerate_covers(W, 4)) {
        auto s = normalized_betti(W, e.cover, 1);
        if (e.transitive) {
            // χ multiplicativity: b1 = 1 + n for a connected n-fold cover.
            CHECK(s.value == Rational(static_cast<long>(e.cover.degree) + 1, static_cast<long>(e.cover.degree)));
        }
        CHECK(s.value <= 2);
    }
    CHECK(normalized_betti(W, CoverMap::trivial(W, 3), 1).value == 2);
    CHECK(normalized_betti(W, CoverMap::trivial(W, 2), 0).value == 1);
    // Re-basing: a cover of a cover, normalized over either base.
    const auto mid = enumerate_covers(W, 2, 2);
    for (const auto& m : mid) {
        if (!m.transitive)
            continue;
        const auto X1 = build_cover(W, m.cover);
        for (const auto& top : enumerate_covers(X1, 2, 2)) {
            const auto X2 = build_cover(X1, top.cover);
            auto over1 = normalized_betti(X1, top.cover, 1);
            auto over0 = normalized_betti(X2, 1);
            CHECK(X2.degree() == 4);
            CHECK(over0.value == over1.value / 2);
        }
    }
}

TEST_CASE("growth brackets")
{
    const auto W = wedge();
    std::vector<CoverMap> connected;
    for (const auto& e : enumerate_covers(W, 4))
        if (e.transitive)
            connected.push_back(e.cover);
    auto b = growth_bracket(W, connected, 1);
    CHECK(b.observed_max == 2);
    CHECK(b.observed_min == Rational(5, 4));
    CHECK(b.sampled);
    // No two degree-4 covers share a refinement inside the sample.
    CHECK_FALSE(b.directed);

    const auto C = to_cell_complex(shapes::cycle(4));
    std::vector<CoverMap> circle;
    for (const auto& e : enumerate_covers(C, 4))
        if (e.transitive)
            circle.push_back(e.cover);
    auto bc = growth_bracket(C, circle, 1);
    CHECK(bc.observed_min == Rational(1, 4));
    CHECK(bc.observed_max == 1);
    // Degrees 1, 2, 4 form a chain with 3 off to the side.
    CHECK_FALSE(bc.directed);
    std::vector<CoverMap> chain;
    for (const auto& c : circle)
        if (c.degree != 3)
            chain.push_back(c);
    auto chained = growth_bracket(C, chain, 1);
    CHECK(chained.directed);
    CHECK(chained.tail_upper == Rational(1, 4));
    CHECK(chained.tail_lower == Rational(1, 4));

    const auto disk = to_cell_complex(shapes::full_simplex(2));
    auto bd = growth_bracket(disk, {CoverMap::trivial(disk, 1), CoverMap::trivial(disk, 3)}, 0);
    CHECK(bd.observed_min == 1);
    CHECK(bd.observed_max == 1);

    CHECK_THROWS_AS(growth_bracket(W, {}, 1), GrowthError);
    CHECK_THROWS_AS(growth_bracket(W, {CoverMap::trivial(W, 3), CoverMap::trivial(W, 2)}, 1, Field::rationals(),
                                   std::vector<std::vector<bool>>{{true, true}, {false, true}}),
                    GrowthError);
}

TEST_CASE("closed forms for RAAGs and graph products")
{
    CHECK(raag_growth(shapes::discrete(2), 1) == 1);
    CHECK(raag_growth(shapes::cycle(5), 2) == 1);
    for (int k = 1; k <= 3; ++k)
        CHECK(raag_growth(shapes::full_simplex(2), k) == 0);
    CHECK(raag_growth(SimplicialComplex{}, 0) == 1);
    CHECK_THROWS(raag_growth(shapes::cycle(3), 1));

    auto e = graph_product_growth_estimate({shapes::discrete(2), {5, 5}}, 1);
    CHECK(e.center == 1);
    CHECK(e.error == Rational(4, 5));
    auto p = graph_product_growth_estimate({shapes::cycle(5), {3, 3, 3, 3, 3}}, 2);
    CHECK(p.center == 1);
    CHECK(p.error == Rational(40, 3));
    CHECK(p.boundary_cubes == 20);
}

TEST_CASE("graph product bound on building quotients")
{
    GraphProductSpec two{shapes::discrete(2), {2, 2}};
    auto r = verify_graph_product_bound(two, QuotientTarget::full(two), 1);
    CHECK(r.value == Rational(1, 4));
    CHECK(r.error == 2);
    CHECK(r.pass);
    GraphProductSpec five{shapes::discrete(2), {5, 5}};
    auto r5 = verify_graph_product_bound(five, QuotientTarget::full(five), 1);
    CHECK(r5.value == Rational(16, 25));
    CHECK(r5.deviation == Rational(9, 25));
    CHECK(r5.error == Rational(4, 5));
    CHECK(r5.top_degree);
    CHECK(r5.top_bound == 2);
    CHECK(r5.pass);
    GraphProductSpec pt{shapes::full_simplex(0), {4}};
    auto rp = verify_graph_product_bound(pt, QuotientTarget::full(pt), 1);
    CHECK(rp.value == 0);
    CHECK(rp.center == 0);
    CHECK(rp.pass);

    // Every divisor target and degree for a few small L, all fields.
    for (auto L : {shapes::cycle(4), shapes::full_simplex(1), shapes::discrete(3)}) {
        GraphProductSpec spec{L, std::vector<std::uint64_t>(L.num_vertices(), 2)};
        for (const auto& t : divisor_lattice(spec))
            for (int k = 0; k <= L.dimension() + 1; ++k)
                for (Field F : {Field::rationals(), Field::prime(2), Field::prime(3)}) {
                    auto rep = verify_graph_product_bound(spec, t, k, F);
                    CHECK(rep.pass);
                    // Normalized values never exceed the chamber's k-cubes.
                    CHECK(rep.value <= Rational(static_cast<long>(davis_chamber(L).cube_counts()[static_cast<std::size_t>(k)])));
                }
    }
}

TEST_CASE("Mayer-Vietoris inequalities")
{
    SECTION("torus split along a vertex star, fiber covers")
    {
        const auto K = shapes::cycle(3);
        const auto T = mapping_torus(K, {0, 1, 2});
        const auto d = star_decomposition(T.complex, 0);
        std::vector<CoverMap> covers;
        for (std::size_t m : {1u, 2u, 3u, 4u})
            covers.push_back(torus_direction_cover(T, m));
        for (int k = 0; k <= 2; ++k) {
            auto rep = mv_inequality_check(T.complex, d.A1, d.A2, d.B, covers, k);
            CHECK(rep.pass);
        }
    }
    SECTION("disjoint pieces add")
    {
        auto K = to_cell_complex(build_complex({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "e"}}));
        Subcomplex A1 = Subcomplex::empty(K), A2 = Subcomplex::empty(K);
        for (int k = 0; k <= 1; ++k)
            for (std::size_t i = 0; i < K.count(k); ++i) {
                const auto vs = K.closure_vertices()[static_cast<std::size_t>(k)][i];
                (vs[0] < 3 ? A1 : A2).member[static_cast<std::size_t>(k)][i] = true;
            }
        std::mt19937_64 rng(5);
        std::vector<CoverMap> covers{CoverMap::trivial(K, 2), random_cocycle_cover(K, 3, rng, "z3")};
        for (int k = 0; k <= 1; ++k) {
            auto rep = mv_inequality_check(K, A1, A2, A1 & A2, covers, k);
            CHECK(rep.pass);
            for (const auto& row : rep.rows)
                CHECK(row.bX == row.bA1 + row.bA2);
        }
    }
    SECTION("X = A1 = A2 = B")
    {
        auto K = to_cell_complex(shapes::cycle(5));
        auto F = Subcomplex::full(K);
        auto rep = mv_inequality_check(K, F, F, F, {CoverMap::trivial(K, 1)}, 1);
        CHECK(rep.pass);
    }
    SECTION("random complexes, cocycle covers, vertex stars")
    {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 25; ++trial) {
            auto K = to_cell_complex(random_complex(rng, 7, 6, 3));
            std::vector<CoverMap> covers{CoverMap::trivial(K, 1)};
            for (std::uint64_t p : {2u, 3u})
                covers.push_back(random_cocycle_cover(K, p, rng, "z" + std::to_string(p)));
            const auto d = star_decomposition(K, rng() % K.count(0));
            for (int k = 0; k <= K.dimension(); ++k)
                for (Field F : {Field::rationals(), Field::prime(2)})
                    CHECK(mv_inequality_check(K, d.A1, d.A2, d.B, covers, k, F).pass);
        }
    }
    SECTION("invalid decompositions")
    {
        auto K = to_cell_complex(shapes::cycle(4));
        auto E = Subcomplex::empty(K);
        CHECK_THROWS_AS(mv_inequality_check(K, E, E, E, {CoverMap::trivial(K, 1)}, 1), GrowthError);
        auto d = star_decomposition(K, 0);
        CHECK_THROWS_AS(mv_inequality_check(K, d.A1, d.A2, Subcomplex::empty(K), {CoverMap::trivial(K, 1)}, 1), GrowthError);
    }
}

TEST_CASE("nerves of covers by subcomplexes")
{
    const auto X = simplicial_wedge();
    // Pieces: the two circles through the wedge vertex a.
    std::vector<Subcomplex> pieces(2, Subcomplex::empty(X));
    const auto closure = X.closure_vertices();
    for (int k = 0; k <= 1; ++k)
        for (std::size_t i = 0; i < X.count(k); ++i) {
            const auto& vs = closure[static_cast<std::size_t>(k)][i];
            const bool first = std::all_of(vs.begin(), vs.end(), [](std::size_t v) { return v <= 2; });
            const bool second = std::all_of(vs.begin(), vs.end(), [](std::size_t v) { return v == 0 || v >= 3; });
            pieces[0].member[static_cast<std::size_t>(k)][i] = first;
            pieces[1].member[static_cast<std::size_t>(k)][i] = second;
        }
    auto res = nerve_relative_betti(X, pieces, {{0}, {1}}, 1);
    CHECK(res.nerve.f_vector() == std::vector<std::size_t>{2, 1});
    CHECK(res.betti == 1);
    CHECK(res.betti == raag_growth(shapes::discrete(2), 1));
    CHECK(nerve_relative_betti(X, pieces, {{0}, {1}}, 0).betti == 0);
    // Unflagged circles are not points.
    CHECK_THROWS_AS(nerve_relative_betti(X, pieces, {{0}}, 1), GrowthError);
    // Flagged edge with an unflagged endpoint is not a subcomplex.
    CHECK_THROWS_AS(nerve_relative_betti(X, pieces, {{0}, {0, 1}}, 1), GrowthError);

    auto single = nerve_relative_betti(X, {Subcomplex::full(X)}, {{0}}, 1);
    CHECK(single.betti == 0);
    const auto torus = to_cell_complex(torus_surface());
    for (int k = 1; k <= 2; ++k)
        CHECK(nerve_relative_betti(torus, {Subcomplex::full(torus)}, {{0}}, k).betti == 0);
}

TEST_CASE("mapping torus decay")
{
    auto t = mapping_torus_decay(shapes::cycle(3), {0, 1, 2}, 1, Field::rationals(), {1, 2, 4, 8});
    CHECK(t.values == std::vector<Rational>{2, 1, Rational(1, 2), Rational(1, 4)});
    CHECK(t.betti == std::vector<std::size_t>{2, 2, 2, 2});
    CHECK(t.monotone);
    auto pt = mapping_torus_decay(shapes::full_simplex(0), {0}, 1, Field::rationals(), {1, 3, 5});
    CHECK(pt.values == std::vector<Rational>{1, Rational(1, 3), Rational(1, 5)});
    auto rot = mapping_torus_decay(shapes::cycle(4), {1, 2, 3, 0}, 1, Field::prime(2), {1, 2, 4});
    CHECK(rot.monotone);
    CHECK_THROWS(mapping_torus_decay(shapes::cycle(3), {0, 1, 2}, 1, Field::rationals(), {0}));
}
