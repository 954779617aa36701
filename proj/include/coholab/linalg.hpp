#pragma once

// Exact linear algebra over Q(i): fraction-free Bareiss elimination on a
// denominator-cleared Gaussian-integer matrix, rational back-substitution for
// nullspaces and solves, and a sparse column-major form for the linearized
// coboundary operators. No floating tolerances anywhere: ranks are integers.

#include <coholab/numeric.hpp>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace coholab {

template <typename K>
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<K> a; // row-major

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}
    K& at(int r, int c) { return a[std::size_t(r) * cols + c]; }
    const K& at(int r, int c) const { return a[std::size_t(r) * cols + c]; }
};

using MatQ = Matrix<CQ>;
using MatZ = Matrix<CZ>;

// Row-scaling by the lcm of all denominators in the row. Preserves rank,
// pivot-column structure and nullspace.
inline MatZ clear_denominators(const MatQ& m) {
    MatZ out(m.rows, m.cols);
    for (int r = 0; r < m.rows; ++r) {
        Int l = 1;
        for (int c = 0; c < m.cols; ++c) {
            const CQ& z = m.at(r, c);
            l = lcm(l, denominator(z.re));
            l = lcm(l, denominator(z.im));
        }
        for (int c = 0; c < m.cols; ++c) {
            const CQ& z = m.at(r, c);
            Rational re = z.re * l, im = z.im * l;
            out.at(r, c) = CZ(numerator(re), numerator(im));
        }
    }
    return out;
}

struct Echelon {
    MatZ m;                      // fraction-free row echelon form
    std::vector<int> pivot_cols; // one per pivot row, increasing
    int rank = 0;
};

// Bareiss single-step update keeps every intermediate entry a minor of the
// input, so the division by the previous pivot is exact in Z[i].
inline Echelon bareiss_echelon(MatZ m) {
    Echelon out;
    CZ prev(Int(1));
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int pivot = -1;
        for (int i = r; i < m.rows; ++i) {
            if (!m.at(i, c).is_zero()) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(r, j));
        const CZ piv = m.at(r, c);
        for (int i = r + 1; i < m.rows; ++i) {
            const CZ head = m.at(i, c);
            for (int j = c + 1; j < m.cols; ++j)
                m.at(i, j) = div_exact(m.at(i, j) * piv - head * m.at(r, j), prev);
            m.at(i, c) = CZ();
        }
        prev = piv;
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    out.m = std::move(m);
    return out;
}

inline int rank(const MatQ& m) { return bareiss_echelon(clear_denominators(m)).rank; }

// Pivot columns of the echelon form; the matching columns of the original
// matrix are an exact basis of its column space.
inline std::vector<int> column_space_columns(const MatQ& m) {
    return bareiss_echelon(clear_denominators(m)).pivot_cols;
}

namespace detail {

// Back-substitution over Q(i) for one assignment of the free variables.
inline std::vector<CQ> back_substitute(const Echelon& e, const std::vector<CQ>& fixed) {
    std::vector<CQ> x = fixed;
    for (int r = e.rank - 1; r >= 0; --r) {
        int pc = e.pivot_cols[std::size_t(r)];
        CQ acc;
        for (int j = pc + 1; j < e.m.cols; ++j) {
            const CZ& z = e.m.at(r, j);
            if (z.is_zero() || x[std::size_t(j)].is_zero()) continue;
            acc += CQ(Rational(z.re), Rational(z.im)) * x[std::size_t(j)];
        }
        const CZ& p = e.m.at(r, pc);
        x[std::size_t(pc)] = div(-acc, CQ(Rational(p.re), Rational(p.im)));
    }
    return x;
}

} // namespace detail

// Exact nullspace basis, one vector per free column.
inline std::vector<std::vector<CQ>> nullspace(const MatQ& m) {
    Echelon e = bareiss_echelon(clear_denominators(m));
    std::vector<bool> is_pivot(std::size_t(m.cols), false);
    for (int c : e.pivot_cols) is_pivot[std::size_t(c)] = true;
    std::vector<std::vector<CQ>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[std::size_t(free)]) continue;
        std::vector<CQ> fixed(std::size_t(m.cols));
        fixed[std::size_t(free)] = CQ(Rational(1));
        basis.push_back(detail::back_substitute(e, fixed));
    }
    return basis;
}

// Exact solve of A x = b (free variables pinned to zero); nullopt when
// inconsistent.
inline std::optional<std::vector<CQ>> solve(const MatQ& a, const std::vector<CQ>& b) {
    MatQ aug(a.rows, a.cols + 1);
    for (int r = 0; r < a.rows; ++r) {
        for (int c = 0; c < a.cols; ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols) = b[std::size_t(r)];
    }
    Echelon e = bareiss_echelon(clear_denominators(aug));
    for (int c : e.pivot_cols)
        if (c == a.cols) return std::nullopt;
    // Solve on the echelon of the augmented system: move b to the rhs.
    std::vector<CQ> x(std::size_t(a.cols));
    for (int r = e.rank - 1; r >= 0; --r) {
        int pc = e.pivot_cols[std::size_t(r)];
        CQ acc;
        for (int j = pc + 1; j < a.cols; ++j) {
            const CZ& z = e.m.at(r, j);
            if (z.is_zero() || x[std::size_t(j)].is_zero()) continue;
            acc += CQ(Rational(z.re), Rational(z.im)) * x[std::size_t(j)];
        }
        const CZ& rhs = e.m.at(r, a.cols);
        CQ num = CQ(Rational(rhs.re), Rational(rhs.im)) - acc;
        const CZ& p = e.m.at(r, pc);
        x[std::size_t(pc)] = div(num, CQ(Rational(p.re), Rational(p.im)));
    }
    return x;
}

inline bool in_column_space(const MatQ& a, const std::vector<CQ>& b) {
    return solve(a, b).has_value();
}

// ---------------------------------------------------------------------------
// Sparse column-major matrices for the coboundary operators (their columns
// are tiny regardless of degree).

struct SparseQ {
    int rows = 0, cols = 0;
    std::vector<std::vector<std::pair<int, CQ>>> col; // (row, value), rows ascending

    SparseQ() = default;
    SparseQ(int r, int c) : rows(r), cols(c), col(std::size_t(c)) {}

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& c : col) n += c.size();
        return n;
    }

    bool is_zero() const {
        for (const auto& c : col)
            for (const auto& [r, v] : c)
                if (!v.is_zero()) return false;
        return true;
    }

    MatQ dense() const {
        MatQ m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (const auto& [r, v] : col[std::size_t(c)]) m.at(r, c) = v;
        return m;
    }
};

template <typename K>
std::vector<K> sparse_apply(const SparseQ& s, const std::vector<K>& x) {
    std::vector<K> y(std::size_t(s.rows));
    for (int c = 0; c < s.cols; ++c) {
        const K& xc = x[std::size_t(c)];
        if (xc.is_zero()) continue;
        for (const auto& [r, v] : s.col[std::size_t(c)]) {
            if constexpr (std::is_same_v<K, CQ>)
                y[std::size_t(r)] += v * xc;
            else
                y[std::size_t(r)] += to_double(v) * xc;
        }
    }
    return y;
}

inline SparseQ multiply(const SparseQ& a, const SparseQ& b) {
    SparseQ out(a.rows, b.cols);
    for (int c = 0; c < b.cols; ++c) {
        std::map<int, CQ> acc;
        for (const auto& [k, bv] : b.col[std::size_t(c)])
            for (const auto& [r, av] : a.col[std::size_t(k)]) acc[r] += av * bv;
        for (auto& [r, v] : acc)
            if (!v.is_zero()) out.col[std::size_t(c)].emplace_back(r, std::move(v));
    }
    return out;
}

} // namespace coholab
