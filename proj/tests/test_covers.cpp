#include <homgrow/covers.hpp>
#include <homgrow/homology.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace homgrow;

namespace {

CellComplex wedge(std::size_t g) { return presentation_complex(g, {}); }

long long chi(const CellComplex& X) { return X.euler_characteristic(); }

std::vector<std::size_t> bettis(const CellComplex& X, Field F = Field::rationals())
{
    return betti_numbers(ChainComplex(X), F);
}

Perm random_perm(std::mt19937_64& rng, std::size_t n)
{
    Perm p = identity_perm(n);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

// Oracle: Burnside count of Hom(F_g, S_n) up to conjugacy,
// (1/n!) Σ_h |C(h)|^g.
std::size_t burnside_free(std::size_t g, std::size_t n)
{
    std::vector<Perm> all;
    Perm p = identity_perm(n);
    do
        all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::size_t total = 0;
    for (const auto& h : all) {
        std::size_t centralizer = 0;
        for (const auto& x : all)
            centralizer += then(x, h) == then(h, x) ? 1 : 0;
        std::size_t term = 1;
        for (std::size_t i = 0; i < g; ++i)
            term *= centralizer;
        total += term;
    }
    return total / all.size();
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

TEST_CASE("cycle notation round trip")
{
    CHECK(cycle_notation(identity_perm(4)) == "()");
    Perm p{1, 2, 0, 4, 3};
    CHECK(cycle_notation(p) == "(1 2 3)(4 5)");
    CHECK(parse_cycles("(1 2 3)(4 5)", 5) == p);
    CHECK(parse_cycles("()", 3) == identity_perm(3));
    CHECK_THROWS_AS(parse_cycles("(1 2)(2 3)", 3), CoverError);
    CHECK_THROWS_AS(parse_cycles("(1 4)", 3), CoverError);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        auto q = random_perm(rng, 1 + rng() % 7);
        CHECK(parse_cycles(cycle_notation(q), q.size()) == q);
        CHECK(then(q, inverse(q)) == identity_perm(q.size()));
    }
}

TEST_CASE("fundamental group presentations")
{
    auto W = wedge(2);
    auto P = pi1_presentation(W);
    CHECK(P.generator_edges.size() == 2);
    CHECK(P.relators.empty());
    auto T = presentation_complex(2, {{{0, 1}, {1, 1}, {0, -1}, {1, -1}}});
    auto PT = pi1_presentation(T);
    CHECK(PT.generator_edges.size() == 2);
    REQUIRE(PT.relators.size() == 1);
    CHECK(PT.relators[0] == EdgePath{{0, 1}, {1, 1}, {0, -1}, {1, -1}});
    auto disk = presentation_complex(1, {{{0, 1}}});
    auto PD = pi1_presentation(disk);
    CHECK(PD.generator_edges.size() == 1);
    CHECK(PD.relators.size() == 1);
    // Simplicial circle: one generator from the non-tree edge.
    auto C = to_cell_complex(shapes::cycle(5));
    CHECK(pi1_presentation(C).generator_edges.size() == 1);
    CHECK_THROWS_AS(pi1_presentation(to_cell_complex(shapes::discrete(2))), CoverError);
}

TEST_CASE("cover construction")
{
    auto W = wedge(2);
    auto triv = build_cover(W, CoverMap::trivial(W, 3));
    CHECK(bettis(triv) == std::vector<std::size_t>{3, 6});
    CHECK(triv.degree() == 3);

    auto C = to_cell_complex(shapes::cycle(4));
    auto PC = pi1_presentation(C);
    for (std::size_t n = 1; n <= 6; ++n) {
        auto cov = build_cover(C, CoverMap::from_generators(C, PC, {cyclic_shift(n, 1)}));
        CHECK(bettis(cov) == std::vector<std::size_t>{1, 1});
    }

    auto PW = pi1_presentation(W);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng() % 6;
        CoverMap c = CoverMap::from_generators(W, PW, {random_perm(rng, n), random_perm(rng, n)});
        auto Y = build_cover(W, c);
        CHECK(chi(Y) == static_cast<long long>(n) * chi(W));
        const auto b = bettis(Y);
        // b_1 = b_0 + n for a cover of a wedge of two circles.
        CHECK(b[1] == b[0] + n);
        CHECK(b[0] == cover_components(W, c));
    }

    // Relator violation: the disk has no nontrivial covers.
    auto disk = presentation_complex(1, {{{0, 1}}});
    auto PD = pi1_presentation(disk);
    CHECK_THROWS_AS(build_cover(disk, CoverMap::from_generators(disk, PD, {cyclic_shift(2, 1)})), CoverError);
}

TEST_CASE("covers of random simplicial complexes are multiplicative")
{
    std::mt19937_64 rng(3);
    int built = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto K = random_complex(rng, 6, 6, 3);
        auto X = to_cell_complex(K);
        if (X.components().second != 1)
            continue;
        for (std::uint64_t p : {2u, 3u}) {
            auto c = random_cocycle_cover(X, p, rng);
            auto Y = build_cover(X, c);
            ++built;
            CHECK(chi(Y) == static_cast<long long>(p) * chi(X));
            CHECK(Y.degree() == p);
            // Trivial covers multiply all Betti numbers.
            auto T = build_cover(X, CoverMap::trivial(X, p));
            auto bx = bettis(X), bt = bettis(T);
            for (std::size_t k = 0; k < bx.size(); ++k)
                CHECK(bt[k] == p * bx[k]);
        }
    }
    CHECK(built > 20);
}

TEST_CASE("restriction commutes with building")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        auto K = random_complex(rng, 6, 5, 3);
        auto X = to_cell_complex(K);
        if (X.components().second != 1)
            continue;
        const auto c = random_cocycle_cover(X, 3, rng);
        auto A = star_decomposition(X, rng() % X.count(0)).A1;
        auto r = restrict_cover(X, c, A);
        CHECK(r.cover.degree == 3);
        auto built = build_cover(r.sub.complex, r.cover);
        auto Y = build_cover(X, c);
        Subcomplex pre = Subcomplex::empty(Y);
        for (int k = 0; k <= Y.dimension(); ++k)
            for (std::size_t i = 0; i < Y.count(k); ++i)
                pre.member[static_cast<std::size_t>(k)][i] = A.contains(k, i / 3);
        REQUIRE(pre.is_closed(Y));
        auto preimage = extract_subcomplex(Y, pre).complex;
        CHECK(built.counts() == preimage.counts());
        CHECK(bettis(built) == bettis(preimage));
        CHECK(bettis(built)[0] == r.components);
    }
    // Restriction to a point has n sheets.
    auto W = wedge(2);
    Subcomplex pt = Subcomplex::empty(W);
    pt.member[0][0] = true;
    auto r = restrict_cover(W, CoverMap::from_generators(W, pi1_presentation(W), {cyclic_shift(4, 1), identity_perm(4)}), pt);
    CHECK(r.components == 4);
}

TEST_CASE("cover enumeration up to conjugacy")
{
    auto C = presentation_complex(1, {});
    auto e = enumerate_covers(C, 2, 2);
    CHECK(e.size() == 2);
    auto W = wedge(2);
    CHECK(enumerate_covers(W, 2, 2).size() == 4);
    for (std::size_t n = 1; n <= 4; ++n)
        CHECK(enumerate_covers(W, n, n).size() == burnside_free(2, n));
    // Transitive classes correspond to conjugacy classes of index-n subgroups
    // of F_2: 1, 3, 7, 26.
    const std::size_t subgroups[] = {1, 3, 7, 26};
    for (std::size_t n = 1; n <= 4; ++n) {
        std::size_t transitive = 0;
        for (const auto& ec : enumerate_covers(W, n, n))
            transitive += ec.transitive ? 1 : 0;
        CHECK(transitive == subgroups[n - 1]);
    }
    auto disk = presentation_complex(1, {{{0, 1}}});
    for (const auto& ec : enumerate_covers(disk, 3))
        CHECK(is_identity(ec.generators[0]));
    // Torus group Z²: commuting pairs in S_2 up to conjugacy.
    auto T = presentation_complex(2, {{{0, 1}, {1, 1}, {0, -1}, {1, -1}}});
    CHECK(enumerate_covers(T, 2, 2).size() == 4);
    // Σ over classes of h of the class number of C(h): 3 + 2 + 3.
    CHECK(enumerate_covers(T, 3, 3).size() == 8);
}

TEST_CASE("covers over covers")
{
    auto W = wedge(2);
    auto P = pi1_presentation(W);
    auto c4 = CoverMap::from_generators(W, P, {cyclic_shift(4, 1), identity_perm(4)});
    auto c2 = CoverMap::from_generators(W, P, {cyclic_shift(2, 1), identity_perm(2)});
    auto c2b = CoverMap::from_generators(W, P, {identity_perm(2), cyclic_shift(2, 1)});
    auto c3 = CoverMap::from_generators(W, P, {cyclic_shift(3, 1), identity_perm(3)});
    CHECK(covers_over(W, c4, c2));
    CHECK_FALSE(covers_over(W, c4, c2b));
    CHECK_FALSE(covers_over(W, c3, c2));
    CHECK(covers_over(W, c2, CoverMap::trivial(W, 1)));
    // Conjugating sheets gives an isomorphic cover.
    Perm s{2, 0, 3, 1};
    auto conj = [&](const Perm& g) { return then(then(inverse(s), g), s); };
    auto c4s = CoverMap::from_generators(W, P, {conj(cyclic_shift(4, 1)), identity_perm(4)});
    CHECK(covers_over(W, c4s, c4));
    CHECK(covers_over(W, c4, c4s));
}

TEST_CASE("building quotients")
{
    for (std::uint64_t m : {2u, 3u, 5u}) {
        GraphProductSpec spec{shapes::discrete(2), {m, m}};
        auto X = building_quotient(spec, QuotientTarget::full(spec));
        CHECK(X.counts() == std::vector<std::size_t>{m * m + 2 * m, 2 * m * m});
        CHECK(X.degree() == m * m);
        CHECK(bettis(X) == std::vector<std::size_t>{1, (m - 1) * (m - 1)});
    }
    {
        GraphProductSpec spec{shapes::full_simplex(0), {4}};
        auto X = building_quotient(spec, QuotientTarget::full(spec));
        CHECK(X.counts() == std::vector<std::size_t>{5, 4});
        CHECK(bettis(X) == std::vector<std::size_t>{1, 0});
    }
    {
        GraphProductSpec spec{shapes::cycle(5), {2, 2, 2, 2, 2}};
        auto X = building_quotient(spec, {{1, 1, 1, 1, 1}});
        CHECK(X.counts() == davis_chamber(spec.L).cube_counts());
        CHECK(bettis(X) == std::vector<std::size_t>{1, 0, 0});
    }
    GraphProductSpec bad{shapes::discrete(2), {4, 4}};
    CHECK_THROWS_AS(building_quotient(bad, {{3, 4}}), CoverError);
    CHECK_THROWS_AS(building_quotient({shapes::cycle(3), {2, 2, 2}}, {{2, 2, 2}}), CoverError);

    // Cells over each cube: |Q| / Π_{v∈σ} k_v. Euler characteristic from
    // this count is an independent oracle.
    const std::vector<SimplicialComplex> Ls{shapes::cycle(4), shapes::cycle(5), shapes::full_simplex(2), shapes::full_simplex(1)};
    for (const auto& L : Ls) {
        GraphProductSpec spec{L, std::vector<std::uint64_t>(L.num_vertices(), 2)};
        spec.orders[0] = 4;
        for (const auto& t : divisor_lattice(spec)) {
            auto X = building_quotient(spec, t);
            auto K = davis_chamber(L);
            std::vector<std::size_t> per(X.dimension_count(), 0);
            long long euler = 0;
            for (const auto& cube : K.cubes()) {
                std::uint64_t n = t.order();
                for (auto v : cube.sigma)
                    n /= t.divisors[v];
                per[cube.dimension()] += n;
                euler += (cube.dimension() % 2 ? -1 : 1) * static_cast<long long>(n);
            }
            CHECK(X.counts() == per);
            CHECK(chi(X) == euler);
            CHECK(bettis(X)[0] == 1);
            for (std::size_t c = 0; c < X.count(0); ++c)
                CHECK(X.cell(0, c).projection < K.cubes().size());
        }
    }
}

TEST_CASE("mapping tori")
{
    auto circle = shapes::cycle(3);
    auto T = mapping_torus(circle, {0, 1, 2});
    CHECK(bettis(T.complex) == std::vector<std::size_t>{1, 2, 1});
    CHECK(chi(T.complex) == 0);
    for (std::size_t m : {1u, 2u, 4u, 8u}) {
        auto cov = build_cover(T.complex, torus_direction_cover(T, m));
        CHECK(bettis(cov) == std::vector<std::size_t>{1, 2, 1});
    }
    // Reflection of the 4-cycle a b c d fixing a and c.
    auto C4 = shapes::cycle(4);
    auto K = mapping_torus(C4, {0, 3, 2, 1});
    CHECK(bettis(K.complex, Field::prime(2)) == std::vector<std::size_t>{1, 2, 1});
    CHECK(bettis(K.complex) == std::vector<std::size_t>{1, 1, 0});
    auto h1 = integral_homology(ChainComplex(K.complex), 1);
    CHECK(h1.betti == 1);
    CHECK(h1.torsion == std::vector<Integer>{2});
    // Rotation of the 4-cycle: still a torus.
    CHECK(bettis(mapping_torus(C4, {1, 2, 3, 0}).complex) == std::vector<std::size_t>{1, 2, 1});
    // Point: a circle.
    auto P = mapping_torus(shapes::full_simplex(0), {0});
    CHECK(bettis(P.complex) == std::vector<std::size_t>{1, 1});
    // Identity on a filled triangle: a solid torus.
    CHECK(bettis(mapping_torus(shapes::full_simplex(2), {0, 1, 2}).complex) == std::vector<std::size_t>{1, 1, 0, 0});
    CHECK(bettis(mapping_torus(shapes::full_simplex(2), {2, 0, 1}).complex) == std::vector<std::size_t>{1, 1, 0, 0});
    CHECK_THROWS_AS(mapping_torus(C4, {0, 2, 1, 3}), CoverError);
    CHECK_THROWS_AS(mapping_torus(C4, {0, 0, 1, 1}), CoverError);
}
