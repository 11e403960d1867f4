#include <homgrow/linalg.hpp>

#include <catch_amalgamated.hpp>

#include <functional>
#include <random>

using namespace homgrow;

namespace {

// Oracle: Gaussian elimination over Q on a dense copy.
std::size_t dense_rank(std::vector<std::vector<Rational>> m)
{
    std::size_t rank = 0;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && m[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0)
                continue;
            Rational f = m[r][c] / m[rank][c];
            for (std::size_t j = c; j < cols; ++j)
                m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Rational>> as_rational(const SparseMatrix& s, std::uint64_t p = 0)
{
    auto d = s.to_dense();
    std::vector<std::vector<Rational>> out;
    for (auto& row : d) {
        out.emplace_back();
        for (auto v : row)
            out.back().push_back(p ? Rational(static_cast<long long>(to_mod(v, p))) : Rational(v));
    }
    return out;
}

// Oracle over F_p: dense elimination with integer residues.
std::size_t dense_rank_mod(const SparseMatrix& s, std::uint64_t p)
{
    auto d = s.to_dense();
    std::size_t rank = 0;
    const std::size_t rows = d.size(), cols = rows ? d[0].size() : 0;
    for (auto& row : d)
        for (auto& v : row)
            v = static_cast<std::int64_t>(to_mod(v, p));
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && d[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(d[piv], d[rank]);
        auto inv = static_cast<std::int64_t>(inv_mod(static_cast<std::uint64_t>(d[rank][c]), p));
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || d[r][c] == 0)
                continue;
            std::int64_t f = d[r][c] * inv % static_cast<std::int64_t>(p);
            for (std::size_t j = 0; j < cols; ++j)
                d[r][j] = ((d[r][j] - f * d[rank][j]) % static_cast<std::int64_t>(p) + static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
        }
        ++rank;
    }
    return rank;
}

SparseMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int spread, double density)
{
    std::uniform_int_distribution<int> value(-spread, spread);
    std::bernoulli_distribution keep(density);
    SparseMatrix m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r)
            if (keep(rng))
                m.add(r, c, value(rng));
    return m.freeze();
}

// Oracle: the product of the first i elementary divisors is the gcd of all
// i x i minors.
Integer det(std::vector<std::vector<Rational>> m)
{
    const std::size_t n = m.size();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            d = -d;
        }
        d *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            Rational f = m[r][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j)
                m[r][j] -= f * m[c][j];
        }
    }
    return boost::multiprecision::numerator(d);
}

Integer minors_gcd(const std::vector<std::vector<std::int64_t>>& a, std::size_t k)
{
    const std::size_t rows = a.size(), cols = a[0].size();
    Integer g = 0;
    std::vector<std::size_t> rs(k), cs(k);
    std::function<void(std::size_t, std::size_t)> pick_cols;
    std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t i, std::size_t from) {
        if (i == k) {
            pick_cols(0, 0);
            return;
        }
        for (std::size_t r = from; r < rows; ++r) {
            rs[i] = r;
            pick_rows(i + 1, r + 1);
        }
    };
    pick_cols = [&](std::size_t i, std::size_t from) {
        if (i == k) {
            std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
            for (std::size_t x = 0; x < k; ++x)
                for (std::size_t y = 0; y < k; ++y)
                    m[x][y] = a[rs[x]][cs[y]];
            g = gcd(g, det(m));
            return;
        }
        for (std::size_t c = from; c < cols; ++c) {
            cs[i] = c;
            pick_cols(i + 1, c + 1);
        }
    };
    pick_rows(0, 0);
    return g;
}

} // namespace

TEST_CASE("sparse matrix freeze sums duplicates and drops zeros")
{
    SparseMatrix m(2, 2);
    m.add(1, 0, 3);
    m.add(0, 0, 1);
    m.add(1, 0, -3);
    m.add(0, 1, 2);
    m.freeze();
    REQUIRE(m.column(0).size() == 1);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(1, 0) == 0);
    CHECK(m.nonzeros() == 2);
    CHECK(m.transpose().at(1, 0) == 2);
}

TEST_CASE("ranks agree with dense elimination oracles")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 1 + rng() % 9, cols = 1 + rng() % 9;
        auto m = random_matrix(rng, rows, cols, 3, 0.45);
        CHECK(rank_rational(m) == dense_rank(as_rational(m)));
        for (std::uint64_t p : {2u, 3u, 5u, 7u})
            CHECK(rank_mod_p(m, p) == dense_rank_mod(m, p));
    }
}

TEST_CASE("rank over Q falls back to big integers on overflow")
{
    // Entries near 2^40 force int64 overflow during fraction-free steps.
    SparseMatrix m(3, 3);
    const std::int64_t big = 1ll << 40;
    m.add(0, 0, big);
    m.add(1, 0, big + 1);
    m.add(2, 0, 3);
    m.add(0, 1, big + 7);
    m.add(1, 1, big - 5);
    m.add(2, 1, 11);
    m.add(0, 2, 2 * big + 7);
    m.add(1, 2, 2 * big - 4);
    m.add(2, 2, 14);
    m.freeze();
    CHECK(rank_rational(m) == 2);
}

TEST_CASE("rank mod p rejects composite moduli")
{
    SparseMatrix m(1, 1);
    CHECK_THROWS_AS(rank_mod_p(m, 4), std::invalid_argument);
}

TEST_CASE("Smith normal form matches determinantal divisors")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
        auto m = random_matrix(rng, rows, cols, 6, 0.7);
        auto dense = m.to_dense();
        auto s = smith_normal_form(IntMatrix::from(m));
        // U A V = D
        CHECK(s.U * IntMatrix::from(m) * s.V == s.D);
        Integer running = 1;
        for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
            Integer g = minors_gcd(dense, k);
            if (k <= s.divisors.size()) {
                running *= s.divisors[k - 1];
                CHECK(running == g);
            } else {
                CHECK(g == 0);
            }
        }
        for (std::size_t i = 1; i < s.divisors.size(); ++i)
            CHECK(s.divisors[i] % s.divisors[i - 1] == 0);
        // Sparse route gives the same divisors.
        CHECK(elementary_divisors(m) == s.divisors);
    }
}

TEST_CASE("integer solve returns solutions or certificates")
{
    IntMatrix A(2, 2);
    A(0, 0) = 2;
    A(1, 1) = 3;
    auto ok = solve_integer(A, {Integer(4), Integer(9)});
    REQUIRE(ok.solution);
    CHECK((*ok.solution)[0] == 2);
    CHECK((*ok.solution)[1] == 3);
    auto bad = solve_integer(A, {Integer(1), Integer(0)});
    REQUIRE_FALSE(bad.solution);
    // diag(2,3) has Smith form diag(1,6): y A == 0 and y b != 0 mod 6.
    CHECK(bad.modulus == 6);
    CHECK((bad.certificate[0] * 2) % 6 == 0);
    CHECK((bad.certificate[1] * 3) % 6 == 0);
    CHECK(bad.certificate[0] % 6 != 0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        auto m = random_matrix(rng, rows, cols, 4, 0.6);
        auto Am = IntMatrix::from(m);
        std::vector<Integer> b(rows);
        for (auto& x : b)
            x = static_cast<long>(rng() % 9) - 4;
        auto r = solve_integer(Am, b);
        if (r.solution) {
            CHECK(Am.apply(*r.solution) == b);
        } else {
            Integer yb = 0;
            for (std::size_t i = 0; i < rows; ++i)
                yb += r.certificate[i] * b[i];
            for (std::size_t c = 0; c < cols; ++c) {
                Integer ya = 0;
                for (std::size_t i = 0; i < rows; ++i)
                    ya += r.certificate[i] * Am(i, c);
                if (r.modulus == 0)
                    CHECK(ya == 0);
                else
                    CHECK(ya % r.modulus == 0);
            }
            if (r.modulus == 0)
                CHECK(yb != 0);
            else
                CHECK(yb % r.modulus != 0);
        }
    }
}

TEST_CASE("F_p solve and random kernel vectors")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
        const std::uint64_t p = trial % 2 ? 2 : 3;
        std::vector<std::vector<std::uint64_t>> A(rows, std::vector<std::uint64_t>(cols));
        std::vector<std::uint64_t> b(rows);
        for (auto& row : A)
            for (auto& v : row)
                v = rng() % p;
        for (auto& v : b)
            v = rng() % p;
        auto r = solve_mod_p(A, b, p);
        if (r.solution) {
            for (std::size_t i = 0; i < rows; ++i) {
                std::uint64_t acc = 0;
                for (std::size_t j = 0; j < cols; ++j)
                    acc = (acc + A[i][j] * (*r.solution)[j]) % p;
                CHECK(acc == b[i]);
            }
        } else {
            std::uint64_t yb = 0;
            for (std::size_t i = 0; i < rows; ++i)
                yb = (yb + r.certificate[i] * b[i]) % p;
            CHECK(yb != 0);
            for (std::size_t j = 0; j < cols; ++j) {
                std::uint64_t ya = 0;
                for (std::size_t i = 0; i < rows; ++i)
                    ya = (ya + r.certificate[i] * A[i][j]) % p;
                CHECK(ya == 0);
            }
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        auto m = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 8, 2, 0.5);
        auto x = random_kernel_vector(m, 3, rng);
        auto d = m.to_dense();
        for (const auto& row : d) {
            std::int64_t acc = 0;
            for (std::size_t j = 0; j < row.size(); ++j)
                acc += row[j] * static_cast<std::int64_t>(x[j]);
            CHECK(to_mod(acc, 3) == 0);
        }
    }
}
