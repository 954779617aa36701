#pragma once

// The coboundary operator as an exact sparse matrix on flattened cochains,
// and the cohomology spaces computed from it: Z^n = ker d_n, B^n = im d_{n-1}
// (B^0 = 0), H^n = Z^n / B^n with integer dimensions.

#include <coholab/cochain.hpp>
#include <coholab/linalg.hpp>

#include <map>

namespace coholab {

// Column (I, c) of the degree-n operator, assembled entry-wise:
//   left term:    row ((i0, I), c') with value L[i0](c', c)
//   middle j:     rows (I_1..I_{j-1}, p, q, I_{j+1}..I_n) with (-1)^j c_{p q I_j}
//   right term:   row ((I, i_last), c') with value (-1)^{n+1} R[i_last](c', c)
inline SparseQ linearize_coboundary(const Algebra& alg, const Bimodule& mod, int n) {
    if (n < 0) throw std::invalid_argument("degree must be nonnegative");
    const std::size_t in_tuples = power(alg.dim, n);
    const std::size_t out_tuples = power(alg.dim, n + 1);
    SparseQ op(int(out_tuples * std::size_t(mod.dim)), int(in_tuples * std::size_t(mod.dim)));

    std::vector<int> tuple(std::size_t(std::max(n, 1)), 0);
    const bool last_positive = ((n + 1) % 2) == 0;

    for (std::size_t t = 0; t < in_tuples; ++t) {
        std::size_t rem = t;
        for (int j = n - 1; j >= 0; --j) {
            tuple[std::size_t(j)] = int(rem % std::size_t(alg.dim));
            rem /= std::size_t(alg.dim);
        }
        for (int c = 0; c < mod.dim; ++c) {
            const int col = int(t * std::size_t(mod.dim)) + c;
            std::map<int, CQ> entries;

            // prepend i0
            for (int i0 = 0; i0 < alg.dim; ++i0) {
                const std::size_t out_t = std::size_t(i0) * in_tuples + t;
                const auto& L = mod.left[std::size_t(i0)];
                for (int r = 0; r < mod.dim; ++r) {
                    const CQ& v = L[std::size_t(r * mod.dim + c)];
                    if (!v.is_zero()) entries[int(out_t * std::size_t(mod.dim)) + r] += v;
                }
            }
            // middle terms
            for (int j = 1; j <= n; ++j) {
                const int target = tuple[std::size_t(j - 1)];
                const bool neg = (j % 2 == 1);
                for (int p = 0; p < alg.dim; ++p)
                    for (int q = 0; q < alg.dim; ++q) {
                        const CQ& w = alg.c(p, q, target);
                        if (w.is_zero()) continue;
                        std::size_t out_t = 0;
                        for (int s = 0; s < j - 1; ++s) out_t = out_t * std::size_t(alg.dim) + std::size_t(tuple[std::size_t(s)]);
                        out_t = out_t * std::size_t(alg.dim) + std::size_t(p);
                        out_t = out_t * std::size_t(alg.dim) + std::size_t(q);
                        for (int s = j; s < n; ++s) out_t = out_t * std::size_t(alg.dim) + std::size_t(tuple[std::size_t(s)]);
                        entries[int(out_t * std::size_t(mod.dim)) + c] += neg ? -w : w;
                    }
            }
            // append i_last
            for (int il = 0; il < alg.dim; ++il) {
                const std::size_t out_t = t * std::size_t(alg.dim) + std::size_t(il);
                const auto& R = mod.right[std::size_t(il)];
                for (int r = 0; r < mod.dim; ++r) {
                    const CQ& v = R[std::size_t(r * mod.dim + c)];
                    if (v.is_zero()) continue;
                    entries[int(out_t * std::size_t(mod.dim)) + r] += last_positive ? v : -v;
                }
            }

            for (auto& [row, v] : entries)
                if (!v.is_zero()) op.col[std::size_t(col)].emplace_back(row, std::move(v));
        }
    }
    return op;
}

inline Cochain<CQ> cochain_from_flat(int degree, const Algebra& alg, const Bimodule& mod,
                                     std::vector<CQ> flat) {
    Cochain<CQ> f = Cochain<CQ>::zero(degree, alg.dim, mod.dim);
    f.values = std::move(flat);
    return f;
}

// Exact basis of Z^n = ker d_n.
inline std::vector<Cochain<CQ>> cocycle_space(const Algebra& alg, const Bimodule& mod, int n) {
    SparseQ op = linearize_coboundary(alg, mod, n);
    std::vector<Cochain<CQ>> basis;
    for (auto& v : nullspace(op.dense())) basis.push_back(cochain_from_flat(n, alg, mod, std::move(v)));
    return basis;
}

// Exact basis of B^n = im d_{n-1} (empty for n = 0).
inline std::vector<Cochain<CQ>> coboundary_space(const Algebra& alg, const Bimodule& mod, int n) {
    std::vector<Cochain<CQ>> basis;
    if (n == 0) return basis;
    SparseQ op = linearize_coboundary(alg, mod, n - 1);
    MatQ dense = op.dense();
    for (int c : column_space_columns(dense)) {
        std::vector<CQ> v(std::size_t(dense.rows));
        for (const auto& [r, val] : op.col[std::size_t(c)]) v[std::size_t(r)] = val;
        basis.push_back(cochain_from_flat(n, alg, mod, std::move(v)));
    }
    return basis;
}

struct CohomologyRanks {
    int cocycle_dim = 0;    // dim Z^n
    int coboundary_dim = 0; // dim B^n
    int cohomology_dim = 0; // dim H^n
};

inline CohomologyRanks cohomology_ranks(const Algebra& alg, const Bimodule& mod, int n) {
    const std::size_t cochain_dim = power(alg.dim, n) * std::size_t(mod.dim);
    SparseQ op_n = linearize_coboundary(alg, mod, n);
    const int rank_n = rank(op_n.dense());
    const int z = int(cochain_dim) - rank_n;
    int b = 0;
    if (n > 0) {
        SparseQ op_prev = linearize_coboundary(alg, mod, n - 1);
        // coboundaries must be cocycles; a nonzero composition is a bug
        if (!multiply(op_n, op_prev).is_zero())
            throw std::logic_error("coboundary operators do not compose to zero");
        b = rank(op_prev.dense());
    }
    return {z, b, z - b};
}

inline int cohomology_dim(const Algebra& alg, const Bimodule& mod, int n) {
    return cohomology_ranks(alg, mod, n).cohomology_dim;
}

} // namespace coholab
