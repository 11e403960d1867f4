#include <homgrow/io.hpp>
#include <homgrow/report.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace homgrow;

TEST_CASE("complex files")
{
    auto K = parse_complex("# pentagon\nsimplex a b\nsimplex b c\n  simplex c d # trailing\nsimplex d e\nsimplex e a\n\nvertex z\n");
    CHECK(K.f_vector() == std::vector<std::size_t>{6, 5});
    CHECK(K.vertex_names() == std::vector<std::string>{"a", "b", "c", "d", "e", "z"});
    // Vertex lines fix the order even before simplices mention them.
    auto L = parse_complex("vertex q p\nsimplex p q r\n");
    CHECK(L.vertex_names() == std::vector<std::string>{"q", "p", "r"});
    CHECK(L.f_vector() == std::vector<std::size_t>{3, 3, 1});

    CHECK_THROWS_WITH(parse_complex("simplex a b\nedge a b\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse_complex("simplex a a\n"), IoError);
    CHECK_THROWS_AS(parse_complex("simplex\n"), IoError);
    CHECK_THROWS_AS(read_complex("/nonexistent/x.cx"), IoError);

    for (auto S : {shapes::rp2(), shapes::cycle(5), shapes::discrete(3), shapes::octahedron_boundary()}) {
        auto R = parse_complex(write_complex(S));
        CHECK(R == S);
    }
}

TEST_CASE("graph product files")
{
    std::istringstream in("vertex a b\norder * 5\n");
    auto g = parse_graph_product(in);
    CHECK(g.spec.orders == std::vector<std::uint64_t>{5, 5});
    CHECK(g.target.divisors == std::vector<std::uint64_t>{5, 5});

    std::istringstream mixed("simplex a b\nsimplex b c\norder * 4\norder b 6\ntarget a 2\ntarget * 1\n");
    auto h = parse_graph_product(mixed);
    CHECK(h.spec.orders == std::vector<std::uint64_t>{4, 6, 4});
    CHECK(h.target.divisors == std::vector<std::uint64_t>{2, 1, 1});

    std::istringstream missing("vertex a b\norder a 3\n");
    CHECK_THROWS_WITH(parse_graph_product(missing), Catch::Matchers::ContainsSubstring("no order"));
    std::istringstream bad_target("vertex a\norder a 4\ntarget a 3\n");
    CHECK_THROWS_WITH(parse_graph_product(bad_target), Catch::Matchers::ContainsSubstring("divisibility"));
    std::istringstream unknown("vertex a\norder b 4\n");
    CHECK_THROWS_AS(parse_graph_product(unknown), IoError);
    std::istringstream small("vertex a\norder a 1\n");
    CHECK_THROWS_AS(parse_graph_product(small), IoError);

    std::istringstream round(write_graph_product(h.spec, &h.target));
    auto back = parse_graph_product(round);
    CHECK(back.spec.orders == h.spec.orders);
    CHECK(back.target.divisors == h.target.divisors);
}

TEST_CASE("cover files")
{
    const auto W = presentation_complex(2, {});
    std::istringstream in("degree 3\nperm 0 (1 2 3)\nperm 1 (1 2)\n");
    auto c = parse_cover(in, W);
    CHECK(c.degree == 3);
    CHECK(build_cover(W, c).counts() == std::vector<std::size_t>{3, 6});
    CHECK(cover_components(W, c) == 1);
    std::istringstream out(write_cover(W, c));
    CHECK(covers_over(W, parse_cover(out, W), c));

    std::istringstream range("degree 2\nperm 5 (1 2)\n");
    CHECK_THROWS_WITH(parse_cover(range, W), Catch::Matchers::ContainsSubstring("line 2"));
    std::istringstream nodeg("perm 0 (1 2)\n");
    CHECK_THROWS_AS(parse_cover(nodeg, W), IoError);
    std::istringstream badcycle("degree 2\nperm 0 (1 3)\n");
    CHECK_THROWS_AS(parse_cover(badcycle, W), IoError);

    // Simply connected base: only the trivial cover of the given degree.
    const auto D = to_cell_complex(shapes::full_simplex(2));
    std::istringstream disk("degree 4\n");
    CHECK(build_cover(D, parse_cover(disk, D)).count(0) == 12);

    // Random covers of a torus survive a write/read cycle up to isomorphism.
    const auto T = mapping_torus(shapes::cycle(3), {0, 1, 2}).complex;
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        auto r = random_cocycle_cover(T, 3, rng);
        std::istringstream s(write_cover(T, r));
        auto back = parse_cover(s, T);
        CHECK(covers_over(T, back, r));
        CHECK(covers_over(T, r, back));
    }
}

TEST_CASE("immersion files")
{
    std::istringstream in("simplex a b\nsimplex c d\ncoord a 0 0\ncoord b 1 1\ncoord c 0 1\ncoord d 1/2 -3/4\n");
    auto f = parse_immersion(in);
    CHECK(f.explicit_coords);
    CHECK(f.immersion.d == 1);
    CHECK(f.immersion.coords[3][1] == Rational(-3, 4));
    auto V = intersection_vector(f.immersion);
    CHECK(V.at(0, 1) != 0);

    std::istringstream moment("simplex a b\nsimplex b c\n");
    auto m = parse_immersion(moment);
    CHECK_FALSE(m.explicit_coords);
    CHECK(m.immersion.coords[2] == Point{Rational(3), Rational(9)});

    std::istringstream round(write_immersion(f.immersion));
    auto back = parse_immersion(round);
    CHECK(back.immersion.coords == f.immersion.coords);

    std::istringstream odd("simplex a b\ncoord a 1 2 3\ncoord b 1 2 3\n");
    CHECK_THROWS_AS(parse_immersion(odd), IoError);
    std::istringstream partial("simplex a b\ncoord a 1 2\n");
    CHECK_THROWS_WITH(parse_immersion(partial), Catch::Matchers::ContainsSubstring("no coordinates"));
    std::istringstream junk("simplex a b\ncoord a 1 x\ncoord b 0 0\n");
    CHECK_THROWS_AS(parse_immersion(junk), IoError);
}

TEST_CASE("reports")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

    Report r("growth estimate", 7);
    r.add("center", std::size_t{1});
    r.add("error", Rational(40, 3));
    r.add_list("values", std::vector<Rational>{2, 1, Rational(1, 2)});
    r.check("bound", true);
    CHECK(r.pass());
    const auto text = r.str();
    CHECK(text.find("seed = 7\n") != std::string::npos);
    CHECK(text.find("error = 40/3\n") != std::string::npos);
    CHECK(text.find("values = 2,1,1/2\n") != std::string::npos);
    CHECK(text.rfind("verdict = pass\n") == text.size() - std::string("verdict = pass\n").size());
    r.check("other", false);
    CHECK_FALSE(r.pass());
    CHECK(r.str().find("verdict = fail") != std::string::npos);
    // Same content, same bytes.
    Report a("x", 1), b("x", 1);
    a.add("k", Rational(3, 6));
    b.add("k", Rational(1, 2));
    CHECK(a.str() == b.str());
}
