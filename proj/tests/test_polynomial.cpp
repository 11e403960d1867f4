#include <homgrow/polynomial.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace homgrow;

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

// Oracle: Faddeev-LeVerrier over Q. Returns det(tI - A), low degree first.
std::vector<Rational> faddeev_leverrier(const Matrix& A)
{
    const std::size_t n = A.size();
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n, 0)), AM(n, std::vector<Rational>(n));
    std::vector<Rational> c(n + 1, 0);
    c[n] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Rational s = 0;
                for (std::size_t l = 0; l < n; ++l)
                    s += Rational(A[i][l]) * M[l][j];
                AM[i][j] = s;
            }
        for (std::size_t i = 0; i < n; ++i)
            AM[i][i] += c[n - k + 1];
        M = AM;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                tr += Rational(A[i][l]) * M[l][i];
        c[n - k] = -tr / Rational(static_cast<long>(k));
    }
    return c;
}

// Oracle for real-rooted polynomials: Descartes' rule of signs is exact.
std::size_t descartes_positive_roots(const std::vector<Rational>& c)
{
    std::size_t changes = 0;
    int last = 0;
    for (const auto& x : c) {
        int s = sign(x);
        if (s == 0)
            continue;
        if (last && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

std::vector<Rational> taylor_shift(std::vector<Rational> c, const Rational& a)
{
    // coefficients of p(x + a)
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = n - 1; j > i; --j)
            c[j - 1] += a * c[j];
    return c;
}

std::vector<Rational> reflect(std::vector<Rational> c)
{
    for (std::size_t i = 1; i < c.size(); i += 2)
        c[i] = -c[i];
    return c;
}

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n, int bound)
{
    std::uniform_int_distribution<int> v(-bound, bound);
    Matrix A(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            A[i][j] = A[j][i] = v(rng);
    return A;
}

} // namespace

TEST_CASE("characteristic polynomial of small matrices")
{
    // [[1,2],[2,5]] -> t^2 - 6t + 1
    auto p = characteristic_polynomial({{1, 2}, {2, 5}});
    CHECK(p == Polynomial({Integer(1), Integer(-6), Integer(1)}));
    CHECK(characteristic_polynomial({{0}}) == Polynomial({Integer(0), Integer(1)}));
    CHECK(characteristic_polynomial({}) == Polynomial({Integer(1)}));
}

TEST_CASE("characteristic polynomial agrees with Faddeev-LeVerrier")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng() % 9;
        Matrix A(n, std::vector<std::int64_t>(n));
        for (auto& row : A)
            for (auto& x : row)
                x = static_cast<std::int64_t>(rng() % 19) - 9;
        auto ours = characteristic_polynomial(A);
        auto oracle = faddeev_leverrier(A);
        for (std::size_t k = 0; k <= n; ++k)
            CHECK(Rational(ours.coeff(k)) == oracle[k]);
    }
}

TEST_CASE("square-free decomposition reassembles the input")
{
    // (x-1)^3 (x+2)^2 x
    Polynomial a({Integer(-1), Integer(1)}), b({Integer(2), Integer(1)}), x({Integer(0), Integer(1)});
    auto f = a * a * a * b * b * x;
    auto parts = square_free_decomposition(f);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == x);
    CHECK(parts[1] == b);
    CHECK(parts[2] == a);
}

TEST_CASE("root counting matches Descartes on real-rooted characteristic polynomials")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 1 + rng() % 10;
        auto A = random_symmetric(rng, n, 9);
        auto f = characteristic_polynomial(A);
        std::vector<Rational> c;
        for (std::size_t k = 0; k <= n; ++k)
            c.push_back(Rational(f.coeff(k)));
        for (const Rational& eps : {Rational(1, 2), Rational(1, 4), Rational(1, 8)}) {
            // Roots in (0, eps) and (-eps, 0) by shifting.
            const auto pos = descartes_positive_roots(c) - descartes_positive_roots(taylor_shift(c, eps));
            auto r = reflect(c);
            const auto neg = descartes_positive_roots(r) - descartes_positive_roots(taylor_shift(r, eps));
            // Strip zero roots for the Sturm route.
            std::size_t z = 0;
            while (f.coeff(z) == 0)
                ++z;
            Polynomial h(std::vector<Integer>(f.coefficients().begin() + static_cast<long>(z), f.coefficients().end()));
            CHECK(count_roots_open(h, -eps, eps) == pos + neg);
        }
    }
}

TEST_CASE("Sturm counting handles repeated roots")
{
    // (x - 1)^2 (x - 3): two roots in (0, 2)
    Polynomial a({Integer(-1), Integer(1)}), b({Integer(-3), Integer(1)});
    auto f = a * a * b;
    CHECK(count_roots_open(f, Rational(0), Rational(2)) == 2);
    CHECK(count_roots_open(f, Rational(0), Rational(4)) == 3);
    CHECK(count_roots_open(f, Rational(3, 2), Rational(4)) == 1);
    CHECK_THROWS(count_roots_open(f, Rational(1), Rational(2)));
}
