// homgrow: command-line front end.
//
// Exit codes: 0 pass, 1 property failure, 2 input error.
#include <homgrow/acceptance.hpp>
#include <homgrow/io.hpp>
#include <homgrow/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

using namespace homgrow;

namespace {

struct Common {
    std::uint64_t seed = acceptance::default_seed;
    std::string output;
    std::string field = "q";
    int k = 1;
};

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string joined_args(int argc, char** argv)
{
    std::string s;
    for (int i = 1; i < argc; ++i)
        s += (i > 1 ? " " : "") + std::string(argv[i]);
    return s;
}

int emit(const std::string& text, const std::string& output)
{
    if (output.empty() || output == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream out(output);
    if (!out)
        throw InputError("cannot write '" + output + "'");
    out << text;
    return 0;
}

int finish(const Report& r, const Common& c)
{
    emit(r.str(), c.output);
    return r.pass() ? 0 : 1;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

std::size_t parse_number(const std::string& text, const std::string& what)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw InputError(what + ": '" + text + "' is not a nonnegative integer");
    return std::stoull(text);
}

std::string simplex_text(const SimplicialComplex& K, const Simplex& s)
{
    std::string out;
    for (auto v : s)
        out += (out.empty() ? "" : " ") + K.name(v);
    return out;
}

Simplex simplex_of(const SimplicialComplex& K, const std::string& text)
{
    Simplex s;
    for (const auto& n : split(text, ','))
        s.push_back(K.vertex_index(n));
    std::sort(s.begin(), s.end());
    if (s.empty())
        throw InputError("empty simplex");
    if (!K.contains(s))
        throw InputError("{" + text + "} is not a simplex of the input");
    return s;
}

/// Cells of X (built from K) whose vertices all lie in `names`.
Subcomplex piece_of(const SimplicialComplex& K, const CellComplex& X, const std::string& names)
{
    std::vector<bool> in(K.num_vertices(), false);
    for (const auto& n : split(names, ','))
        in[K.vertex_index(n)] = true;
    Subcomplex S = Subcomplex::empty(X);
    const auto closure = X.closure_vertices();
    for (int k = 0; k <= X.dimension(); ++k)
        for (std::size_t i = 0; i < X.count(k); ++i) {
            const auto& vs = closure[static_cast<std::size_t>(k)][i];
            S.member[static_cast<std::size_t>(k)][i] = std::all_of(vs.begin(), vs.end(), [&](std::size_t v) { return in[v]; });
        }
    return S;
}

int write_result_complex(const SimplicialComplex& out, const std::string& command, const std::string& input, const Common& c)
{
    std::string header = "# homgrow " HOMGROW_VERSION " " + command + "\n# input " + input + " sha256:" + file_sha256(input) + "\n";
    return emit(header + write_complex(out), c.output);
}

// ---------------------------------------------------------------------------
// complex

int complex_check(const std::string& path, const std::string& command, const Common& c)
{
    const auto K = read_complex(path);
    Report r(command, c.seed);
    r.input(path);
    r.add("dimension", K.dimension());
    std::vector<std::size_t> f;
    for (int k = 0; k <= K.dimension(); ++k)
        f.push_back(K.count(k));
    r.add_list("f_vector", f);
    const auto fl = is_flag(K);
    r.check("flag", fl.flag);
    if (!fl.flag) {
        r.add("flag.witness", simplex_text(K, *fl.witness));
        return finish(r, c);
    }
    const auto ns = is_no_square(K);
    r.check("no_square", ns.no_square);
    if (!ns.no_square)
        r.add("no_square.witness", simplex_text(K, *ns.witness));
    return finish(r, c);
}

// ---------------------------------------------------------------------------
// growth

int growth_estimate(const std::string& path, const std::string& command, const Common& c)
{
    const auto g = read_graph_product(path);
    const auto F = Field::parse(c.field);
    const auto e = graph_product_growth_estimate(g.spec, c.k, F);
    Report r(command, c.seed);
    r.input(path);
    r.add("k", c.k);
    r.add("field", F.tag());
    r.add("center", e.center);
    r.add("error", e.error);
    r.add("boundary_cubes", e.boundary_cubes);
    r.add("min_order", g.spec.min_order());
    return finish(r, c);
}

int growth_verify_bound(const std::string& path, const std::string& command, const Common& c)
{
    const auto g = read_graph_product(path);
    const auto F = Field::parse(c.field);
    const auto b = verify_graph_product_bound(g.spec, g.target, c.k, F);
    Report r(command, c.seed);
    r.input(path);
    r.add("target", b.target);
    r.add("k", c.k);
    r.add("field", F.tag());
    r.add("betti", b.betti);
    r.add("degree", b.degree);
    r.add("value", b.value);
    r.add("center", b.center);
    r.add("error", b.error);
    r.add("deviation", b.deviation);
    r.check("within", b.within);
    if (b.top_degree) {
        r.add("top_bound", b.top_bound);
        r.check("top_ok", b.top_ok);
    }
    return finish(r, c);
}

int growth_bracket(const std::string& path, const std::vector<std::string>& cover_files, std::size_t max_degree, const std::string& command,
                   const Common& c)
{
    const auto K = read_complex(path);
    const auto X = to_cell_complex(K);
    const auto F = Field::parse(c.field);
    Report r(command, c.seed);
    r.input(path);
    std::vector<CoverMap> family{CoverMap::trivial(X, 1, "identity")};
    std::string description;
    if (cover_files.empty()) {
        for (const auto& e : enumerate_covers(X, max_degree, 2))
            if (e.transitive)
                family.push_back(e.cover);
        description = "connected covers of degree <= " + std::to_string(max_degree);
    } else {
        for (const auto& f : cover_files) {
            r.input(f);
            auto cv = read_cover(f, X);
            cv.id = f;
            family.push_back(std::move(cv));
        }
        description = "identity and " + std::to_string(cover_files.size()) + " cover files";
    }
    const auto b = homgrow::growth_bracket(X, family, c.k, F, std::nullopt, description);
    r.add("k", c.k);
    r.add("field", F.tag());
    r.add("family", b.family);
    r.add("samples", b.samples.size());
    for (std::size_t i = 0; i < b.samples.size(); ++i)
        r.add("sample." + std::to_string(i), b.samples[i].id + " degree " + std::to_string(b.samples[i].degree) + " betti " +
                                                 std::to_string(b.samples[i].betti) + " value " + to_string(b.samples[i].value));
    r.add("observed_min", b.observed_min);
    r.add("observed_max", b.observed_max);
    r.add("tail_lower", b.tail_lower);
    r.add("tail_upper", b.tail_upper);
    r.add("directed", b.directed);
    r.add("caveat", "statistics of a finite sample, not the limits");
    return finish(r, c);
}

int growth_mv(const std::string& path, const std::string& center, std::size_t max_degree, const std::string& command, const Common& c)
{
    const auto K = read_complex(path);
    const auto X = to_cell_complex(K);
    const auto F = Field::parse(c.field);
    const std::size_t x = K.vertex_index(center);
    std::mt19937_64 rng(c.seed);
    std::vector<CoverMap> covers{CoverMap::trivial(X, 1, "identity")};
    if (pi1_presentation(X).generator_edges.size() <= 4)
        for (const auto& e : enumerate_covers(X, max_degree, 2))
            covers.push_back(e.cover);
    for (std::uint64_t p : {2u, 3u})
        covers.push_back(random_cocycle_cover(X, p, rng, "cocycle mod " + std::to_string(p)));
    const auto d = star_decomposition(X, x);
    const auto rep = mv_inequality_check(X, d.A1, d.A2, d.B, covers, c.k, F);
    Report r(command, c.seed);
    r.input(path);
    r.add("k", c.k);
    r.add("field", F.tag());
    r.add("center", center);
    r.add("covers", covers.size());
    std::size_t ok = 0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        ok += row.upper && row.lower;
        r.add("row." + std::to_string(i), row.id + " degree " + std::to_string(row.degree) + " X " + std::to_string(row.bX) + " A1 " +
                                              std::to_string(row.bA1) + " A2 " + std::to_string(row.bA2) + " B " + std::to_string(row.bB) +
                                              " B[k-1] " + std::to_string(row.bB_prev) + " upper " + (row.upper ? "ok" : "FAIL") +
                                              " lower " + (row.lower ? "ok" : "FAIL"));
    }
    r.add("rows_ok", std::to_string(ok) + "/" + std::to_string(rep.rows.size()));
    r.check("inequalities", rep.pass);
    return finish(r, c);
}

int growth_nerve(const std::string& path, const std::vector<std::string>& pieces, const std::vector<std::string>& acyclic,
                 const std::string& command, const Common& c)
{
    const auto K = read_complex(path);
    const auto X = to_cell_complex(K);
    const auto F = Field::parse(c.field);
    if (pieces.empty())
        throw InputError("nerve needs at least one --piece");
    std::vector<Subcomplex> subs;
    for (const auto& p : pieces)
        subs.push_back(piece_of(K, X, p));
    std::vector<Simplex> flagged;
    for (const auto& a : acyclic) {
        Simplex s;
        for (const auto& t : split(a, ',')) {
            const auto i = parse_number(t, "--acyclic");
            if (i >= pieces.size())
                throw InputError("--acyclic refers to piece " + t + " of " + std::to_string(pieces.size()));
            s.push_back(i);
        }
        flagged.push_back(std::move(s));
    }
    const auto res = nerve_relative_betti(X, subs, flagged, c.k, F);
    Report r(command, c.seed);
    r.input(path);
    r.add("k", c.k);
    r.add("field", F.tag());
    r.add("pieces", pieces.size());
    std::vector<std::size_t> f;
    for (int k = 0; k <= res.nerve.dimension(); ++k)
        f.push_back(res.nerve.count(k));
    r.add_list("nerve_f_vector", f);
    r.add("acyclic_simplices", res.acyclic.size());
    r.add("relative_betti", res.betti);
    return finish(r, c);
}

int growth_torus(const std::string& path, const std::string& degrees_text, const std::string& map_text, const std::string& command,
                 const Common& c)
{
    const auto K = read_complex(path);
    const auto F = Field::parse(c.field);
    std::vector<std::size_t> f(K.num_vertices());
    for (std::size_t v = 0; v < f.size(); ++v)
        f[v] = v;
    for (const auto& pair : split(map_text, ',')) {
        const auto pos = pair.find(':');
        if (pos == std::string::npos)
            throw InputError("--map entries look like a:b, got '" + pair + "'");
        f[K.vertex_index(pair.substr(0, pos))] = K.vertex_index(pair.substr(pos + 1));
    }
    std::vector<std::size_t> degrees;
    for (const auto& t : split(degrees_text, ','))
        degrees.push_back(parse_number(t, "--degrees"));
    if (degrees.empty())
        throw InputError("--degrees is empty");
    const auto d = mapping_torus_decay(K, f, c.k, F, degrees);
    Report r(command, c.seed);
    r.input(path);
    r.add("k", c.k);
    r.add("field", F.tag());
    r.add_list("degrees", d.degrees);
    r.add_list("betti", d.betti);
    r.add_list("values", d.values);
    r.check("monotone", d.monotone);
    return finish(r, c);
}

// ---------------------------------------------------------------------------
// vankampen

Ring parse_ring(const std::string& text)
{
    if (text == "z" || text == "Z")
        return Ring::integers;
    if (text == "f2" || text == "F2" || text == "2")
        return Ring::f2;
    throw InputError("unknown ring '" + text + "' (use z or f2)");
}

std::string pair_key(const SimplicialComplex& L, const Simplex& a, const Simplex& b)
{
    return "{" + simplex_text(L, a) + "}|{" + simplex_text(L, b) + "}";
}

int vankampen_obstruct(const std::string& path, const std::string& command, const Common& c)
{
    const auto file = read_immersion(path);
    const auto& f = file.immersion;
    const auto V = intersection_vector(f);
    Report r(command, c.seed);
    r.input(path);
    r.add("d", f.d);
    r.add("coordinates", file.explicit_coords ? "file" : "moment curve");
    std::size_t nonzero = 0;
    for (const auto& [key, value] : V.entries)
        if (value != 0 && key.first < key.second) {
            ++nonzero;
            r.add("pair." + pair_key(f.source, V.tops[key.first], V.tops[key.second]), value);
        }
    r.add("nonzero_pairs", nonzero);
    const int o = mod2_obstruction(V);
    r.add("obstruction", o);
    r.check("vanishes", o == 0);
    return finish(r, c);
}

int vankampen_solve_cmd(const std::string& path, const std::string& ring_text, const std::string& command, const Common& c)
{
    const auto file = read_immersion(path);
    const auto& f = file.immersion;
    const Ring ring = parse_ring(ring_text);
    auto V = intersection_vector(f);
    if (ring == Ring::f2)
        V = reduce_mod2(V);
    const auto sol = vankampen_solve(f.source, V, ring);
    Report r(command, c.seed);
    r.input(path);
    r.add("d", f.d);
    r.add("ring", ring == Ring::f2 ? "F2" : "Z");
    r.add("equations", sol.equations.size());
    r.add("result", sol.solved ? "SOLUTION" : "UNSOLVABLE");
    const auto& faces = f.source.simplices(f.d - 1);
    if (sol.solved) {
        for (std::size_t s = 0; s < sol.rho.size(); ++s)
            for (std::size_t e = 0; e < sol.rho[s].size(); ++e)
                if (sol.rho[s][e] != 0)
                    r.add("rho.{" + simplex_text(f.source, V.tops[s]) + "}.{" + simplex_text(f.source, faces[e]) + "}", sol.rho[s][e]);
        r.add("residual_zero", apply_solution(f.source, V, sol).is_zero());
    } else {
        for (std::size_t i = 0; i < sol.certificate.size(); ++i)
            if (sol.certificate[i] != 0) {
                const auto [a, b] = sol.equations[i];
                r.add("certificate." + pair_key(f.source, V.tops[a], V.tops[b]), sol.certificate[i]);
            }
        r.add("certificate_modulus", sol.modulus);
    }
    if (sol.completeness_caveat)
        r.add("caveat", "d = 2: solvability does not decide embeddability");
    r.check("solved", sol.solved);
    return finish(r, c);
}

int vankampen_octa_reduce(const std::string& path, const std::string& command, const Common& c)
{
    const auto file = read_immersion(path);
    const auto& f = file.immersion;
    const auto& L = f.source;
    std::mt19937_64 rng(c.seed);
    std::optional<OctahedralImmersion> oi;
    std::string last_error;
    for (int attempt = 0; attempt < 10 && !oi; ++attempt) {
        try {
            oi = perturbed_octahedral_immersion(f, acceptance::detail::random_perturbation(L.num_vertices(), f.d, rng), Rational(1, 2));
        } catch (const EmbeddingError& e) {
            last_error = e.what();
        }
    }
    if (!oi)
        throw EmbeddingError(last_error);
    const auto O = octahedralize(L);
    const auto V = intersection_vector(oi->immersion);
    const auto res = octahedral_obstruction_reduce(L, f.d, O, V);
    Report r(command, c.seed);
    r.input(path);
    r.add("d", f.d);
    r.add("epsilon", oi->epsilon);
    r.add("octahedral_vertices", O.complex.num_vertices());
    r.add("octahedral_tops", V.tops.size());
    r.add("cohomology_free_rank", res.cohomology.free_rank);
    r.add_list("cohomology_torsion", res.cohomology.torsion);
    r.add("scale", res.scale);
    r.add("moves", res.moves.size());
    if (res.success) {
        auto W = V;
        for (auto& [key, v] : W.entries)
            v *= res.scale;
        for (const auto& [s, rho] : res.moves)
            W = finger_move(O.complex, W, s, rho);
        r.add("residual_zero", W.is_zero());
    } else if (res.failed_simplex) {
        r.add("failed_simplex", simplex_text(O.complex, V.tops[*res.failed_simplex]));
        r.add_list("certificate", res.certificate);
        r.add("certificate_modulus", res.modulus);
    }
    r.check("reduced", res.success);
    return finish(r, c);
}

// ---------------------------------------------------------------------------
// verify

int verify(const std::string& group, std::size_t trials, const std::string& command, const Common& c)
{
    static const std::vector<std::string> groups{"all", "modpl2", "appendixC", "smalleigs", "pinch", "uct", "torus", "nerve", "mv"};
    if (std::find(groups.begin(), groups.end(), group) == groups.end())
        throw InputError("unknown suite '" + group + "'");
    Report r(command, c.seed);
    acceptance::Options opt{c.seed, trials};
    std::size_t passed = 0, total = 0;
    for (const auto& s : acceptance::suites()) {
        if (group != "all" && s.group != group)
            continue;
        const auto res = acceptance::run(s, opt);
        std::cerr << res.line() << '\n';
        passed += res.passed;
        total += res.total;
        const std::string key = "criterion." + std::to_string(s.id);
        r.add(key, s.name + ": " + std::to_string(res.passed) + "/" + std::to_string(res.total) + " checks");
        r.check(key + ".pass", res.checks_ok());
        r.check(key + ".within_time_limit", res.seconds < res.limit);
    }
    r.add("checks", std::to_string(passed) + "/" + std::to_string(total));
    return finish(r, c);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"homgrow: homology growth and van Kampen obstruction workbench"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(HOMGROW_VERSION));

    Common common;
    std::function<int()> action;
    const std::string command = joined_args(argc, argv);

    auto add_common = [&](CLI::App* sub, bool with_k) {
        sub->add_option("--seed", common.seed, "seed for randomized choices")->capture_default_str();
        sub->add_option("--output,-o", common.output, "write the result here instead of stdout");
        if (with_k) {
            sub->add_option("--k", common.k, "homological degree")->capture_default_str();
            sub->add_option("--field", common.field, "q, f2, f3, ... or a prime")->capture_default_str();
        }
    };

    std::string input;
    std::string simplex, vertices, degrees = "1,2,4,8", map, center, ring = "z", suite;
    std::vector<std::string> cover_files, pieces, acyclic;
    std::size_t max_degree = 3, trials = 0;

    // complex
    auto* complex = app.add_subcommand("complex", "simplicial complex utilities");
    complex->require_subcommand(1);
    auto* c_check = complex->add_subcommand("check", "flag and no-square tests");
    auto* c_link = complex->add_subcommand("link", "link of a simplex");
    auto* c_full = complex->add_subcommand("full", "full subcomplex on a vertex set");
    auto* c_bary = complex->add_subcommand("bary", "barycentric subdivision");
    auto* c_octa = complex->add_subcommand("octa", "octahedralization");
    for (auto* s : {c_check, c_link, c_full, c_bary, c_octa}) {
        s->add_option("input", input, ".cx file")->required();
        add_common(s, false);
    }
    c_link->add_option("--simplex", simplex, "comma-separated vertex ids")->required();
    c_full->add_option("--vertices", vertices, "comma-separated vertex ids")->required();
    c_check->callback([&] { action = [&] { return complex_check(input, command, common); }; });
    c_link->callback([&] {
        action = [&] {
            const auto K = read_complex(input);
            return write_result_complex(link(K, simplex_of(K, simplex)), command, input, common);
        };
    });
    c_full->callback([&] {
        action = [&] {
            const auto K = read_complex(input);
            return write_result_complex(full_subcomplex(K, split(vertices, ',')), command, input, common);
        };
    });
    c_bary->callback([&] { action = [&] { return write_result_complex(barycentric_subdivision(read_complex(input)), command, input, common); }; });
    c_octa->callback([&] { action = [&] { return write_result_complex(octahedralize(read_complex(input)).complex, command, input, common); }; });

    // growth
    auto* growth = app.add_subcommand("growth", "normalized Betti numbers of covers");
    growth->require_subcommand(1);
    auto* g_estimate = growth->add_subcommand("estimate", "center and radius for a graph product (.gp)");
    auto* g_bound = growth->add_subcommand("verify-bound", "check one building quotient against the estimate (.gp)");
    auto* g_bracket = growth->add_subcommand("bracket", "sampled growth bracket over a cover family (.cx)");
    auto* g_mv = growth->add_subcommand("mv", "per-cover Mayer-Vietoris inequalities for a star decomposition (.cx)");
    auto* g_nerve = growth->add_subcommand("nerve", "relative Betti number of the nerve of a cover by subcomplexes (.cx)");
    auto* g_torus = growth->add_subcommand("torus", "decay along the circle direction of a mapping torus (.cx)");
    for (auto* s : {g_estimate, g_bound, g_bracket, g_mv, g_nerve, g_torus}) {
        s->add_option("input", input, "input file")->required();
        add_common(s, true);
    }
    g_bracket->add_option("--cover", cover_files, "cover files; default enumerates connected covers");
    g_bracket->add_option("--max-degree", max_degree, "largest enumerated degree")->capture_default_str();
    g_mv->add_option("--center", center, "vertex whose star is A1")->required();
    g_mv->add_option("--max-degree", max_degree, "largest enumerated degree")->capture_default_str();
    g_nerve->add_option("--piece", pieces, "comma-separated vertex ids; the piece is their full subcomplex")->required();
    g_nerve->add_option("--acyclic", acyclic, "comma-separated piece indices of a nerve simplex flagged acyclic");
    g_torus->add_option("--degrees", degrees, "cover degrees")->capture_default_str();
    g_torus->add_option("--map", map, "vertex map a:b,...; identity elsewhere");
    g_estimate->callback([&] { action = [&] { return growth_estimate(input, command, common); }; });
    g_bound->callback([&] { action = [&] { return growth_verify_bound(input, command, common); }; });
    g_bracket->callback([&] { action = [&] { return growth_bracket(input, cover_files, max_degree, command, common); }; });
    g_mv->callback([&] {
        max_degree = std::min<std::size_t>(max_degree, 3);
        action = [&] { return growth_mv(input, center, max_degree, command, common); };
    });
    g_nerve->callback([&] { action = [&] { return growth_nerve(input, pieces, acyclic, command, common); }; });
    g_torus->callback([&] { action = [&] { return growth_torus(input, degrees, map, command, common); }; });

    // vankampen
    auto* vk = app.add_subcommand("vankampen", "intersection vectors and finger moves");
    vk->require_subcommand(1);
    auto* v_obstruct = vk->add_subcommand("obstruct", "mod-2 obstruction of an immersion");
    auto* v_solve = vk->add_subcommand("solve", "solve for finger moves cancelling the intersection vector");
    auto* v_octa = vk->add_subcommand("octa-reduce", "reduce the octahedral intersection vector");
    for (auto* s : {v_obstruct, v_solve, v_octa}) {
        s->add_option("input", input, "complex or immersion file")->required();
        add_common(s, false);
    }
    v_solve->add_option("--ring", ring, "z or f2")->capture_default_str();
    v_obstruct->callback([&] { action = [&] { return vankampen_obstruct(input, command, common); }; });
    v_solve->callback([&] { action = [&] { return vankampen_solve_cmd(input, ring, command, common); }; });
    v_octa->callback([&] { action = [&] { return vankampen_octa_reduce(input, command, common); }; });

    // verify
    auto* ver = app.add_subcommand("verify", "replay the acceptance suites");
    ver->add_option("suite", suite, "all, modpl2, appendixC, smalleigs, pinch, uct, torus, nerve or mv")->required();
    ver->add_option("--trials", trials, "trial count for randomized suites (0 = default)");
    add_common(ver, false);
    ver->callback([&] { action = [&] { return verify(suite, trials, command, common); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action();
    } catch (const std::invalid_argument& e) {
        std::cerr << "homgrow: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "homgrow: error: " << e.what() << '\n';
        return 2;
    }
}
