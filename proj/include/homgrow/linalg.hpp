// Exact sparse and dense linear algebra over Z, Q and F_p: ranks, Smith
// normal form, and linear system solving with failure certificates.
#pragma once

#include "numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace homgrow {

struct SparseEntry {
    std::size_t row;
    std::int64_t value;
    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Column-major sparse integer matrix. Entries are appended with `add` and
/// canonicalized by `freeze` (sorted by row, duplicates summed, zeros
/// dropped).
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) { }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    void add(std::size_t row, std::size_t col, std::int64_t value)
    {
        if (row >= rows_ || col >= columns_.size())
            throw std::out_of_range("sparse entry out of range");
        columns_[col].push_back({row, value});
    }

    SparseMatrix& freeze()
    {
        for (auto& column : columns_) {
            std::sort(column.begin(), column.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.row < b.row; });
            std::vector<SparseEntry> merged;
            for (const auto& e : column) {
                if (!merged.empty() && merged.back().row == e.row)
                    merged.back().value = checked_add(merged.back().value, e.value);
                else
                    merged.push_back(e);
            }
            std::erase_if(merged, [](const SparseEntry& e) { return e.value == 0; });
            column = std::move(merged);
        }
        return *this;
    }

    const std::vector<SparseEntry>& column(std::size_t c) const { return columns_.at(c); }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto& c : columns_)
            n += c.size();
        return n;
    }

    std::int64_t at(std::size_t r, std::size_t c) const
    {
        for (const auto& e : columns_.at(c))
            if (e.row == r)
                return e.value;
        return 0;
    }

    SparseMatrix transpose() const
    {
        SparseMatrix t(cols(), rows_);
        for (std::size_t c = 0; c < cols(); ++c)
            for (const auto& e : columns_[c])
                t.columns_[e.row].push_back({c, e.value});
        return t;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b)
    {
        if (a.cols() != b.rows())
            throw std::invalid_argument("sparse product shape mismatch");
        SparseMatrix out(a.rows(), b.cols());
        std::map<std::size_t, std::int64_t> acc;
        for (std::size_t c = 0; c < b.cols(); ++c) {
            acc.clear();
            for (const auto& eb : b.columns_[c])
                for (const auto& ea : a.columns_[eb.row])
                    acc[ea.row] = checked_add(acc[ea.row], checked_mul(ea.value, eb.value));
            for (const auto& [r, v] : acc)
                if (v != 0)
                    out.columns_[c].push_back({r, v});
        }
        return out;
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b)
    {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            throw std::invalid_argument("sparse sum shape mismatch");
        SparseMatrix out(a.rows(), a.cols());
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out.columns_[c] = a.columns_[c];
            out.columns_[c].insert(out.columns_[c].end(), b.columns_[c].begin(), b.columns_[c].end());
        }
        return out.freeze();
    }

    bool is_zero() const
    {
        return std::all_of(columns_.begin(), columns_.end(), [](const auto& c) { return c.empty(); });
    }

    bool is_symmetric() const
    {
        if (rows_ != cols())
            return false;
        const auto t = transpose();
        for (std::size_t c = 0; c < cols(); ++c) {
            auto a = columns_[c];
            auto b = t.columns_[c];
            auto by_row = [](const SparseEntry& x, const SparseEntry& y) { return x.row < y.row; };
            std::sort(a.begin(), a.end(), by_row);
            std::sort(b.begin(), b.end(), by_row);
            if (a != b)
                return false;
        }
        return true;
    }

    /// Largest row sum of absolute values; an upper bound for the spectral
    /// norm of a symmetric matrix.
    std::int64_t max_row_abs_sum() const
    {
        std::vector<std::int64_t> sums(rows_, 0);
        for (const auto& column : columns_)
            for (const auto& e : column)
                sums[e.row] = checked_add(sums[e.row], e.value < 0 ? -e.value : e.value);
        return sums.empty() ? 0 : *std::max_element(sums.begin(), sums.end());
    }

    static SparseMatrix identity(std::size_t n, std::int64_t scale = 1)
    {
        SparseMatrix m(n, n);
        if (scale != 0)
            for (std::size_t i = 0; i < n; ++i)
                m.columns_[i].push_back({i, scale});
        return m;
    }

    static SparseMatrix from_dense(const std::vector<std::vector<std::int64_t>>& rows)
    {
        SparseMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols())
                throw std::invalid_argument("ragged dense matrix");
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                if (rows[r][c] != 0)
                    m.columns_[c].push_back({r, rows[r][c]});
        }
        return m;
    }

    std::vector<std::vector<std::int64_t>> to_dense() const
    {
        std::vector<std::vector<std::int64_t>> d(rows_, std::vector<std::int64_t>(cols(), 0));
        for (std::size_t c = 0; c < cols(); ++c)
            for (const auto& e : columns_[c])
                d[e.row][c] = e.value;
        return d;
    }

private:
    std::size_t rows_ = 0;
    std::vector<std::vector<SparseEntry>> columns_;
};

// ---------------------------------------------------------------------------
// Ranks

/// Rank over F_p by column reduction with pivots on the largest row index.
inline std::size_t rank_mod_p(const SparseMatrix& A, std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("rank_mod_p: modulus " + std::to_string(p) + " is not prime");
    using Column = std::vector<std::pair<std::size_t, std::uint64_t>>;
    std::vector<Column> reduced;
    std::vector<std::int64_t> pivot_of_row(A.rows(), -1);
    std::size_t rank = 0;
    Column work, scratch;
    for (std::size_t c = 0; c < A.cols(); ++c) {
        work.clear();
        for (const auto& e : A.column(c)) {
            auto v = to_mod(e.value, p);
            if (v)
                work.emplace_back(e.row, v);
        }
        while (!work.empty()) {
            const auto [low, lv] = work.back();
            const auto piv = pivot_of_row[low];
            if (piv < 0) {
                // Normalize so the pivot entry is one.
                const auto inv = inv_mod(lv, p);
                for (auto& [r, v] : work)
                    v = mul_mod(v, inv, p);
                pivot_of_row[low] = static_cast<std::int64_t>(reduced.size());
                reduced.push_back(work);
                ++rank;
                break;
            }
            const auto& other = reduced[static_cast<std::size_t>(piv)];
            const auto factor = p - lv; // work -= lv * other (other has pivot 1)
            scratch.clear();
            std::size_t i = 0, j = 0;
            while (i < work.size() || j < other.size()) {
                if (j == other.size() || (i < work.size() && work[i].first < other[j].first)) {
                    scratch.push_back(work[i++]);
                } else if (i == work.size() || other[j].first < work[i].first) {
                    scratch.emplace_back(other[j].first, mul_mod(other[j].second, factor, p));
                    ++j;
                } else {
                    auto v = (work[i].second + mul_mod(other[j].second, factor, p)) % p;
                    if (v)
                        scratch.emplace_back(work[i].first, v);
                    ++i;
                    ++j;
                }
            }
            std::swap(work, scratch);
        }
    }
    return rank;
}

namespace detail {

template <typename T>
T abs_value(const T& v)
{
    return v < 0 ? T(-v) : v;
}

inline std::int64_t gcd_value(std::int64_t a, std::int64_t b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

inline Integer gcd_value(const Integer& a, const Integer& b) { return gcd(a, b); }

inline std::int64_t mul_value(std::int64_t a, std::int64_t b) { return checked_mul(a, b); }
inline std::int64_t sub_value(std::int64_t a, std::int64_t b) { return checked_sub(a, b); }
inline Integer mul_value(const Integer& a, const Integer& b) { return a * b; }
inline Integer sub_value(const Integer& a, const Integer& b) { return a - b; }

/// Fraction-free column reduction over Z; each reduced column is divided by
/// its content so entries stay small on boundary matrices.
template <typename T>
std::size_t rank_fraction_free(const SparseMatrix& A)
{
    using Column = std::vector<std::pair<std::size_t, T>>;
    std::vector<Column> reduced;
    std::vector<std::int64_t> pivot_of_row(A.rows(), -1);
    std::size_t rank = 0;
    Column work, scratch;
    for (std::size_t c = 0; c < A.cols(); ++c) {
        work.clear();
        for (const auto& e : A.column(c))
            work.emplace_back(e.row, T(e.value));
        while (!work.empty()) {
            const std::size_t low = work.back().first;
            const auto piv = pivot_of_row[low];
            if (piv < 0) {
                pivot_of_row[low] = static_cast<std::int64_t>(reduced.size());
                reduced.push_back(work);
                ++rank;
                break;
            }
            const auto& other = reduced[static_cast<std::size_t>(piv)];
            const T a = other.back().second;
            const T b = work.back().second;
            const T g = gcd_value(a, b);
            const T wa = a / g; // work := wa * work - wb * other
            const T wb = b / g;
            scratch.clear();
            std::size_t i = 0, j = 0;
            while (i < work.size() || j < other.size()) {
                if (j == other.size() || (i < work.size() && work[i].first < other[j].first)) {
                    scratch.emplace_back(work[i].first, mul_value(work[i].second, wa));
                    ++i;
                } else if (i == work.size() || other[j].first < work[i].first) {
                    scratch.emplace_back(other[j].first, mul_value(T(-other[j].second), wb));
                    ++j;
                } else {
                    T v = sub_value(mul_value(work[i].second, wa), mul_value(other[j].second, wb));
                    if (v != 0)
                        scratch.emplace_back(work[i].first, std::move(v));
                    ++i;
                    ++j;
                }
            }
            T content = 0;
            for (const auto& [r, v] : scratch)
                content = gcd_value(content, v);
            if (content > 1)
                for (auto& [r, v] : scratch)
                    v /= content;
            std::swap(work, scratch);
        }
    }
    return rank;
}

} // namespace detail

/// Rank over Q by fraction-free elimination; int64 fast path with an exact
/// big-integer retry on overflow.
inline std::size_t rank_rational(const SparseMatrix& A)
{
    try {
        return detail::rank_fraction_free<std::int64_t>(A);
    } catch (const Overflow&) {
        return detail::rank_fraction_free<Integer>(A);
    }
}

// ---------------------------------------------------------------------------
// Dense matrices and Smith normal form

template <typename T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) { }

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T(1);
        return m;
    }

    static DenseMatrix from(const SparseMatrix& s)
    {
        DenseMatrix m(s.rows(), s.cols());
        for (std::size_t c = 0; c < s.cols(); ++c)
            for (const auto& e : s.column(c))
                m(e.row, c) = T(e.value);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a != b)
            for (std::size_t c = 0; c < cols_; ++c)
                std::swap((*this)(a, c), (*this)(b, c));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a != b)
            for (std::size_t r = 0; r < rows_; ++r)
                std::swap((*this)(r, a), (*this)(r, b));
    }

    /// row[dst] += f * row[src]
    void add_row(std::size_t dst, std::size_t src, const T& f)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(dst, c) += f * (*this)(src, c);
    }

    /// col[dst] += f * col[src]
    void add_col(std::size_t dst, std::size_t src, const T& f)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, dst) += f * (*this)(r, src);
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t c = 0; c < cols_; ++c)
            (*this)(r, c) = -(*this)(r, c);
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("dense product shape mismatch");
        DenseMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) += a(i, k) * b(k, j);
            }
        return out;
    }

    std::vector<T> apply(const std::vector<T>& x) const
    {
        std::vector<T> y(rows_, T(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0)
                    y[i] += (*this)(i, j) * x[j];
        return y;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = DenseMatrix<Integer>;

/// U * A * V = D with U, V unimodular and D diagonal with d_0 | d_1 | ...
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    /// Nonzero diagonal entries, positive, in divisibility order.
    std::vector<Integer> divisors;
};

/// Smith normal form with transforms. Dense; intended for the small systems
/// of the obstruction solver and for residual blocks after sparse
/// elimination.
inline SmithForm smith_normal_form(const IntMatrix& A, bool want_transforms = true)
{
    SmithForm s;
    s.D = A;
    IntMatrix& D = s.D;
    const std::size_t m = A.rows(), n = A.cols();
    if (want_transforms) {
        s.U = IntMatrix::identity(m);
        s.V = IntMatrix::identity(n);
    }
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
        D.add_row(dst, src, f);
        if (want_transforms)
            s.U.add_row(dst, src, f);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
        D.add_col(dst, src, f);
        if (want_transforms)
            s.V.add_col(dst, src, f);
    };
    auto row_swap = [&](std::size_t a, std::size_t b) {
        D.swap_rows(a, b);
        if (want_transforms)
            s.U.swap_rows(a, b);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        D.swap_cols(a, b);
        if (want_transforms)
            s.V.swap_cols(a, b);
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        bool found = false;
        std::size_t pr = t, pc = t;
        Integer best;
        for (std::size_t r = t; r < m; ++r)
            for (std::size_t c = t; c < n; ++c)
                if (D(r, c) != 0 && (!found || abs(D(r, c)) < best)) {
                    best = abs(D(r, c));
                    pr = r;
                    pc = c;
                    found = true;
                }
        if (!found)
            break;
        row_swap(t, pr);
        col_swap(t, pc);
        for (;;) {
            bool dirty = false;
            for (std::size_t r = t + 1; r < m; ++r) {
                if (D(r, t) == 0)
                    continue;
                Integer q = D(r, t) / D(t, t);
                row_add(r, t, -q);
                if (D(r, t) != 0) {
                    row_swap(t, r);
                    dirty = true;
                }
            }
            for (std::size_t c = t + 1; c < n; ++c) {
                if (D(t, c) == 0)
                    continue;
                Integer q = D(t, c) / D(t, t);
                col_add(c, t, -q);
                if (D(t, c) != 0) {
                    col_swap(t, c);
                    dirty = true;
                }
            }
            if (dirty)
                continue;
            // Enforce divisibility of the trailing block by the pivot.
            bool divides = true;
            for (std::size_t r = t + 1; r < m && divides; ++r)
                for (std::size_t c = t + 1; c < n; ++c)
                    if (D(r, c) % D(t, t) != 0) {
                        row_add(t, r, Integer(1));
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (D(t, t) < 0) {
            D.negate_row(t);
            if (want_transforms)
                s.U.negate_row(t);
        }
        s.divisors.push_back(D(t, t));
    }
    return s;
}

/// Elementary divisors of a sparse integer matrix. Unit pivots are
/// eliminated sparsely first; the residual block goes through the dense
/// Smith form. Divisors equal to one are included.
inline std::vector<Integer> elementary_divisors(const SparseMatrix& A)
{
    // Row-indexed maps of the live submatrix.
    std::vector<std::map<std::size_t, Integer>> cols(A.cols());
    std::vector<std::map<std::size_t, Integer>> rows(A.rows());
    for (std::size_t c = 0; c < A.cols(); ++c)
        for (const auto& e : A.column(c)) {
            cols[c][e.row] = e.value;
            rows[e.row][c] = e.value;
        }
    std::vector<bool> col_alive(A.cols(), true), row_alive(A.rows(), true);
    std::size_t units = 0;
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t c = 0; c < A.cols(); ++c) {
            if (!col_alive[c])
                continue;
            // Prefer a unit whose row is short to limit fill-in.
            std::size_t best_row = 0;
            std::size_t best_len = static_cast<std::size_t>(-1);
            for (const auto& [r, v] : cols[c])
                if ((v == 1 || v == -1) && rows[r].size() < best_len) {
                    best_row = r;
                    best_len = rows[r].size();
                }
            if (best_len == static_cast<std::size_t>(-1))
                continue;
            const std::size_t pr = best_row;
            const Integer pv = cols[c][pr];
            // A' = A - a_{.c} a_{r.} / pv ; pv is a unit so this is integral.
            const auto col_entries = cols[c];
            const auto row_entries = rows[pr];
            for (const auto& [r, a_rc] : col_entries) {
                if (r == pr)
                    continue;
                const Integer f = a_rc * pv; // pv^{-1} == pv for units
                for (const auto& [cc, a_pcc] : row_entries) {
                    if (cc == c)
                        continue;
                    Integer v = rows[r][cc] - f * a_pcc;
                    if (v == 0) {
                        rows[r].erase(cc);
                        cols[cc].erase(r);
                    } else {
                        rows[r][cc] = v;
                        cols[cc][r] = v;
                    }
                }
            }
            for (const auto& [r, v] : col_entries)
                rows[r].erase(c);
            for (const auto& [cc, v] : row_entries)
                cols[cc].erase(pr);
            cols[c].clear();
            rows[pr].clear();
            col_alive[c] = false;
            row_alive[pr] = false;
            ++units;
            progress = true;
        }
    }
    std::vector<std::size_t> live_rows, live_cols;
    for (std::size_t r = 0; r < A.rows(); ++r)
        if (row_alive[r] && !rows[r].empty())
            live_rows.push_back(r);
    for (std::size_t c = 0; c < A.cols(); ++c)
        if (col_alive[c] && !cols[c].empty())
            live_cols.push_back(c);
    std::vector<Integer> divisors(units, Integer(1));
    if (!live_rows.empty() && !live_cols.empty()) {
        std::map<std::size_t, std::size_t> row_pos;
        for (std::size_t i = 0; i < live_rows.size(); ++i)
            row_pos[live_rows[i]] = i;
        IntMatrix R(live_rows.size(), live_cols.size());
        for (std::size_t j = 0; j < live_cols.size(); ++j)
            for (const auto& [r, v] : cols[live_cols[j]])
                R(row_pos.at(r), j) = v;
        auto rest = smith_normal_form(R, false).divisors;
        divisors.insert(divisors.end(), rest.begin(), rest.end());
    }
    std::sort(divisors.begin(), divisors.end());
    return divisors;
}

// ---------------------------------------------------------------------------
// Linear systems

/// Solution of A x = b, or a certificate y that no solution exists:
/// over a field y A = 0 and y b != 0; over Z, y A = 0 (mod `modulus`) and
/// y b != 0 (mod `modulus`), modulus 0 meaning exact equality.
template <typename T>
struct SolveResult {
    std::optional<std::vector<T>> solution;
    std::vector<T> certificate;
    Integer modulus = 0;
};

inline SolveResult<Integer> solve_integer(const IntMatrix& A, const std::vector<Integer>& b)
{
    if (b.size() != A.rows())
        throw std::invalid_argument("solve_integer: shape mismatch");
    const auto s = smith_normal_form(A, true);
    const auto c = s.U.apply(b);
    const std::size_t r = s.divisors.size();
    SolveResult<Integer> out;
    std::vector<Integer> y(A.cols(), Integer(0));
    auto certify = [&](std::size_t i, const Integer& modulus) {
        out.certificate.assign(A.rows(), Integer(0));
        for (std::size_t j = 0; j < A.rows(); ++j)
            out.certificate[j] = s.U(i, j);
        out.modulus = modulus;
        return out;
    };
    for (std::size_t i = 0; i < A.rows(); ++i) {
        if (i < r) {
            if (c[i] % s.divisors[i] != 0)
                return certify(i, s.divisors[i]);
            y[i] = c[i] / s.divisors[i];
        } else if (c[i] != 0) {
            return certify(i, Integer(0));
        }
    }
    out.solution = s.V.apply(y);
    return out;
}

/// Dense Gaussian elimination over F_p.
inline SolveResult<std::uint64_t> solve_mod_p(std::vector<std::vector<std::uint64_t>> A, std::vector<std::uint64_t> b,
                                               std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("solve_mod_p: modulus is not prime");
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    if (b.size() != m)
        throw std::invalid_argument("solve_mod_p: shape mismatch");
    // Track row operations to produce a certificate for inconsistent rows.
    std::vector<std::vector<std::uint64_t>> ops(m, std::vector<std::uint64_t>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        ops[i][i] = 1;
        b[i] %= p;
        for (auto& v : A[i])
            v %= p;
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t pr = row;
        while (pr < m && A[pr][col] == 0)
            ++pr;
        if (pr == m)
            continue;
        std::swap(A[pr], A[row]);
        std::swap(b[pr], b[row]);
        std::swap(ops[pr], ops[row]);
        const auto inv = inv_mod(A[row][col], p);
        for (auto& v : A[row])
            v = mul_mod(v, inv, p);
        b[row] = mul_mod(b[row], inv, p);
        for (auto& v : ops[row])
            v = mul_mod(v, inv, p);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || A[r][col] == 0)
                continue;
            const auto f = p - A[r][col];
            for (std::size_t j = 0; j < n; ++j)
                A[r][j] = (A[r][j] + mul_mod(f, A[row][j], p)) % p;
            b[r] = (b[r] + mul_mod(f, b[row], p)) % p;
            for (std::size_t j = 0; j < m; ++j)
                ops[r][j] = (ops[r][j] + mul_mod(f, ops[row][j], p)) % p;
        }
        pivot_cols.push_back(col);
        ++row;
    }
    SolveResult<std::uint64_t> out;
    for (std::size_t r = row; r < m; ++r)
        if (b[r] != 0) {
            out.certificate = ops[r];
            out.modulus = p;
            return out;
        }
    std::vector<std::uint64_t> x(n, 0);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
        x[pivot_cols[i]] = b[i];
    out.solution = std::move(x);
    return out;
}

/// Uniformly random element of the kernel of A over F_p (free variables
/// drawn from `rng`, pivots back-substituted). Sparse-friendly: A is given
/// by columns and reduced row by row.
template <typename Rng>
std::vector<std::uint64_t> random_kernel_vector(const SparseMatrix& A, std::uint64_t p, Rng& rng)
{
    // Row-major copy of A mod p; eliminate to reduced echelon form on rows.
    const std::size_t n = A.cols();
    std::vector<std::map<std::size_t, std::uint64_t>> rows(A.rows());
    for (std::size_t c = 0; c < n; ++c)
        for (const auto& e : A.column(c))
            if (auto v = to_mod(e.value, p))
                rows[e.row][c] = v;
    std::vector<std::map<std::size_t, std::uint64_t>> echelon; // pivot = first key, value 1
    std::vector<std::int64_t> pivot_row_of_col(n, -1);
    for (auto& row : rows) {
        auto work = std::move(row);
        // Reduce by existing pivots until the leading column is new.
        for (;;) {
            while (!work.empty() && work.begin()->second == 0)
                work.erase(work.begin());
            if (work.empty())
                break;
            const auto [lead, lv] = *work.begin();
            const auto pr = pivot_row_of_col[lead];
            if (pr < 0) {
                const auto inv = inv_mod(lv, p);
                for (auto& [c, v] : work)
                    v = mul_mod(v, inv, p);
                pivot_row_of_col[lead] = static_cast<std::int64_t>(echelon.size());
                echelon.push_back(std::move(work));
                break;
            }
            const auto f = p - lv;
            for (const auto& [c, v] : echelon[static_cast<std::size_t>(pr)]) {
                auto& w = work[c];
                w = (w + mul_mod(f, v, p)) % p;
                if (w == 0)
                    work.erase(c);
            }
        }
    }
    std::uniform_int_distribution<std::uint64_t> draw(0, p - 1);
    std::vector<std::uint64_t> x(n, 0);
    for (std::size_t c = 0; c < n; ++c)
        if (pivot_row_of_col[c] < 0)
            x[c] = draw(rng);
    // Back-substitute in decreasing pivot column order.
    for (std::size_t cc = n; cc-- > 0;) {
        const auto pr = pivot_row_of_col[cc];
        if (pr < 0)
            continue;
        std::uint64_t acc = 0;
        for (const auto& [c, v] : echelon[static_cast<std::size_t>(pr)])
            if (c != cc)
                acc = (acc + mul_mod(v, x[c], p)) % p;
        x[cc] = (p - acc) % p;
    }
    return x;
}

} // namespace homgrow
