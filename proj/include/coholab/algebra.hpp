#pragma once

// Finite-dimensional associative algebras over C given by exact rational
// structure constants, bimodules given by action matrices, the norm model
// used by every defect and bound computation, and the builtin test algebras.
//
// Norm model: nu(a) = kappa * sum_i |a_i| on A with kappa chosen so nu is
// submultiplicative; ||x||_inf = max_i |x_i| on X. Multilinear operator norms
// are then attained at basis tuples, which keeps them exactly computable.

#include <coholab/linalg.hpp>
#include <coholab/numeric.hpp>

#include <span>
#include <string>
#include <vector>

namespace coholab {

template <typename K>
using Element = std::vector<K>; // coordinates in the parent basis

struct Algebra {
    int dim = 0;
    std::vector<std::string> basis_labels;
    std::vector<CQ> structure;   // c[(i*dim + j)*dim + k]: e_i e_j = sum_k c_ijk e_k
    Rational norm_scale = 1;     // kappa
    std::vector<CD> structure_d; // floating mirror of the structure tensor

    const CQ& c(int i, int j, int k) const {
        return structure[std::size_t((i * dim + j) * dim + k)];
    }
    const CD& c_d(int i, int j, int k) const {
        return structure_d[std::size_t((i * dim + j) * dim + k)];
    }
};

struct Bimodule {
    int dim = 0;                          // d_X
    std::vector<std::vector<CQ>> left;    // per algebra basis index: d_X x d_X, row-major
    std::vector<std::vector<CQ>> right;
    std::vector<std::vector<CD>> left_d;
    std::vector<std::vector<CD>> right_d;
};

// --------------------------------------------------------------------------
// Element arithmetic (K = CQ exact or CD floating).

template <typename K>
Element<K> zero_element(int dim) { return Element<K>(std::size_t(dim)); }

template <typename K>
Element<K> basis_element(int dim, int i, K value = K(1)) {
    auto e = Element<K>(std::size_t(dim));
    e[std::size_t(i)] = value;
    return e;
}

template <typename K>
Element<K> add(const Element<K>& a, const Element<K>& b) {
    Element<K> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <typename K>
Element<K> sub(const Element<K>& a, const Element<K>& b) {
    Element<K> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

template <typename K>
Element<K> scaled(const Element<K>& a, const K& s) {
    Element<K> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

template <typename K>
bool is_zero(const Element<K>& a) {
    for (const K& v : a)
        if (!v.is_zero()) return false;
    return true;
}

// Algebra product through the structure tensor.
template <typename K>
Element<K> mul(const Algebra& alg, const Element<K>& a, const Element<K>& b) {
    Element<K> r(std::size_t(alg.dim));
    for (int i = 0; i < alg.dim; ++i) {
        if (a[std::size_t(i)].is_zero()) continue;
        for (int j = 0; j < alg.dim; ++j) {
            if (b[std::size_t(j)].is_zero()) continue;
            K w = a[std::size_t(i)] * b[std::size_t(j)];
            for (int k = 0; k < alg.dim; ++k) {
                if constexpr (std::is_same_v<K, CQ>) {
                    const CQ& s = alg.c(i, j, k);
                    if (!s.is_zero()) r[std::size_t(k)] += w * s;
                } else {
                    const CD& s = alg.c_d(i, j, k);
                    if (!s.is_zero()) r[std::size_t(k)] += w * s;
                }
            }
        }
    }
    return r;
}

namespace detail {

template <typename K>
const std::vector<std::vector<K>>& left_actions(const Bimodule& mod) {
    if constexpr (std::is_same_v<K, CQ>) return mod.left; else return mod.left_d;
}
template <typename K>
const std::vector<std::vector<K>>& right_actions(const Bimodule& mod) {
    if constexpr (std::is_same_v<K, CQ>) return mod.right; else return mod.right_d;
}

template <typename K>
void add_matrix_apply(Element<K>& acc, const std::vector<K>& m, const Element<K>& x,
                      const K& weight, int dim) {
    for (int r = 0; r < dim; ++r) {
        K s{};
        for (int c = 0; c < dim; ++c) {
            const K& e = m[std::size_t(r * dim + c)];
            if (!e.is_zero() && !x[std::size_t(c)].is_zero()) s += e * x[std::size_t(c)];
        }
        if (!s.is_zero()) acc[std::size_t(r)] += weight * s;
    }
}

} // namespace detail

// a . x  (left action, a in A by coordinates, x in X)
template <typename K>
Element<K> act_left(const Bimodule& mod, const Element<K>& a, const Element<K>& x) {
    Element<K> r(std::size_t(mod.dim));
    const auto& mats = detail::left_actions<K>(mod);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) detail::add_matrix_apply(r, mats[i], x, a[i], mod.dim);
    return r;
}

// x . a  (right action)
template <typename K>
Element<K> act_right(const Bimodule& mod, const Element<K>& x, const Element<K>& a) {
    Element<K> r(std::size_t(mod.dim));
    const auto& mats = detail::right_actions<K>(mod);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero()) detail::add_matrix_apply(r, mats[i], x, a[i], mod.dim);
    return r;
}

template <typename K>
Element<CD> element_to_double(const Element<K>& a) {
    if constexpr (std::is_same_v<K, CD>) {
        return a;
    } else {
        Element<CD> r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = to_double(a[i]);
        return r;
    }
}

// --------------------------------------------------------------------------
// Norms.

// nu(a) = kappa * sum |a_i|
inline double norm(const Algebra& alg, const Element<CD>& a) {
    double s = 0;
    for (const CD& z : a) s += modulus(z);
    return to_double(alg.norm_scale) * s;
}

inline double norm(const Algebra& alg, const Element<CQ>& a) {
    return norm(alg, element_to_double(a));
}

// Exact variant for elements with real rational coordinates.
inline Rational norm_exact_real(const Algebra& alg, const Element<CQ>& a) {
    Rational s = 0;
    for (const CQ& z : a) {
        if (z.im != 0) throw std::invalid_argument("norm_exact_real needs real coordinates");
        s += rational_abs(z.re);
    }
    return alg.norm_scale * s;
}

// ||x||_inf = max |x_i|
inline double module_norm(const Element<CD>& x) {
    double m = 0;
    for (const CD& z : x) m = std::max(m, modulus(z));
    return m;
}

inline double module_norm(const Element<CQ>& x) { return module_norm(element_to_double(x)); }

inline Rational module_norm_exact_real(const Element<CQ>& x) {
    Rational m = 0;
    for (const CQ& z : x) {
        if (z.im != 0) throw std::invalid_argument("module_norm_exact_real needs real coordinates");
        m = std::max(m, rational_abs(z.re), [](const Rational& p, const Rational& q) { return p < q; });
    }
    return m;
}

// Smallest M with ||a.x|| <= M nu(a) ||x|| (and symmetrically): the extreme
// points of the nu-ball are (phase/kappa) e_i, so M is the largest inf-operator
// norm of an action matrix divided by kappa.
inline double action_norm_constant(const Algebra& alg, const Bimodule& mod) {
    double best = 0;
    auto row_sup = [&](const std::vector<CQ>& m) {
        for (int r = 0; r < mod.dim; ++r) {
            double s = 0;
            for (int c = 0; c < mod.dim; ++c) s += modulus(m[std::size_t(r * mod.dim + c)]);
            best = std::max(best, s);
        }
    };
    for (int i = 0; i < alg.dim; ++i) { row_sup(mod.left[std::size_t(i)]); row_sup(mod.right[std::size_t(i)]); }
    return best / to_double(alg.norm_scale);
}

// --------------------------------------------------------------------------
// Axiom certificates.

struct AssociativityCertificate {
    bool ok = true;
    int i = -1, j = -1, l = -1; // first violating triple when !ok
};

inline AssociativityCertificate check_associativity(const Algebra& alg) {
    const std::size_t want = std::size_t(alg.dim) * alg.dim * alg.dim;
    if (alg.structure.size() != want) throw std::invalid_argument("structure tensor shape mismatch");
    for (int i = 0; i < alg.dim; ++i) {
        Element<CQ> ei = basis_element<CQ>(alg.dim, i);
        for (int j = 0; j < alg.dim; ++j) {
            Element<CQ> ej = basis_element<CQ>(alg.dim, j);
            Element<CQ> eij = mul(alg, ei, ej);
            for (int l = 0; l < alg.dim; ++l) {
                Element<CQ> el = basis_element<CQ>(alg.dim, l);
                Element<CQ> lhs = mul(alg, eij, el);
                Element<CQ> rhs = mul(alg, ei, mul(alg, ej, el));
                if (lhs != rhs) return {false, i, j, l};
            }
        }
    }
    return {};
}

struct BimoduleCertificate {
    bool ok = true;
    std::string axiom; // "left", "right" or "commute" when !ok
    int i = -1, j = -1;
};

inline BimoduleCertificate check_bimodule(const Algebra& alg, const Bimodule& mod) {
    if (int(mod.left.size()) != alg.dim || int(mod.right.size()) != alg.dim)
        throw std::invalid_argument("bimodule action count must equal algebra dimension");
    const std::size_t cell = std::size_t(mod.dim) * mod.dim;
    for (int i = 0; i < alg.dim; ++i)
        if (mod.left[std::size_t(i)].size() != cell || mod.right[std::size_t(i)].size() != cell)
            throw std::invalid_argument("bimodule action matrix shape mismatch");

    auto mat_mul = [&](const std::vector<CQ>& a, const std::vector<CQ>& b) {
        std::vector<CQ> r(cell);
        for (int x = 0; x < mod.dim; ++x)
            for (int k = 0; k < mod.dim; ++k) {
                const CQ& av = a[std::size_t(x * mod.dim + k)];
                if (av.is_zero()) continue;
                for (int y = 0; y < mod.dim; ++y) {
                    const CQ& bv = b[std::size_t(k * mod.dim + y)];
                    if (!bv.is_zero()) r[std::size_t(x * mod.dim + y)] += av * bv;
                }
            }
        return r;
    };
    auto action_of_product = [&](const std::vector<std::vector<CQ>>& mats, int i, int j) {
        std::vector<CQ> r(cell);
        for (int k = 0; k < alg.dim; ++k) {
            const CQ& w = alg.c(i, j, k);
            if (w.is_zero()) continue;
            for (std::size_t t = 0; t < cell; ++t) r[t] += w * mats[std::size_t(k)][t];
        }
        return r;
    };

    for (int i = 0; i < alg.dim; ++i)
        for (int j = 0; j < alg.dim; ++j) {
            if (action_of_product(mod.left, i, j) != mat_mul(mod.left[std::size_t(i)], mod.left[std::size_t(j)]))
                return {false, "left", i, j};
            if (action_of_product(mod.right, i, j) != mat_mul(mod.right[std::size_t(j)], mod.right[std::size_t(i)]))
                return {false, "right", i, j};
            if (mat_mul(mod.left[std::size_t(i)], mod.right[std::size_t(j)]) !=
                mat_mul(mod.right[std::size_t(j)], mod.left[std::size_t(i)]))
                return {false, "commute", i, j};
        }
    return {};
}

// --------------------------------------------------------------------------
// Construction.

// kappa = max(1, max_ij ||e_i e_j||_1), with the rational-safe bound
// |z| <= |Re z| + |Im z| per entry so kappa stays an exact rational.
inline Rational compute_norm_scale(int dim, const std::vector<CQ>& structure) {
    Rational kappa = 1;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Rational s = 0;
            for (int k = 0; k < dim; ++k) {
                const CQ& z = structure[std::size_t((i * dim + j) * dim + k)];
                s += rational_abs(z.re) + rational_abs(z.im);
            }
            if (s > kappa) kappa = s;
        }
    return kappa;
}

inline Algebra make_algebra(int dim, std::vector<std::string> labels, std::vector<CQ> structure) {
    if (dim < 1) throw std::invalid_argument("algebra dimension must be positive");
    if (structure.size() != std::size_t(dim) * dim * dim)
        throw std::invalid_argument("structure tensor shape mismatch");
    if (labels.empty())
        for (int i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i + 1));
    if (int(labels.size()) != dim) throw std::invalid_argument("basis label count mismatch");
    Algebra alg;
    alg.dim = dim;
    alg.basis_labels = std::move(labels);
    alg.structure = std::move(structure);
    alg.norm_scale = compute_norm_scale(dim, alg.structure);
    alg.structure_d.reserve(alg.structure.size());
    for (const CQ& z : alg.structure) alg.structure_d.push_back(to_double(z));
    return alg;
}

inline Bimodule make_bimodule(std::vector<std::vector<CQ>> left, std::vector<std::vector<CQ>> right, int dim) {
    Bimodule mod;
    mod.dim = dim;
    mod.left = std::move(left);
    mod.right = std::move(right);
    auto mirror = [](const std::vector<std::vector<CQ>>& src) {
        std::vector<std::vector<CD>> out;
        out.reserve(src.size());
        for (const auto& m : src) {
            std::vector<CD> d(m.size());
            for (std::size_t t = 0; t < m.size(); ++t) d[t] = to_double(m[t]);
            out.push_back(std::move(d));
        }
        return out;
    };
    mod.left_d = mirror(mod.left);
    mod.right_d = mirror(mod.right);
    return mod;
}

// X = A with both actions given by multiplication.
inline Bimodule regular_bimodule(const Algebra& alg) {
    std::vector<std::vector<CQ>> left(std::size_t(alg.dim)), right(std::size_t(alg.dim));
    for (int i = 0; i < alg.dim; ++i) {
        std::vector<CQ> l(std::size_t(alg.dim) * alg.dim), r(std::size_t(alg.dim) * alg.dim);
        for (int j = 0; j < alg.dim; ++j)
            for (int k = 0; k < alg.dim; ++k) {
                l[std::size_t(k * alg.dim + j)] = alg.c(i, j, k); // e_i e_j
                r[std::size_t(k * alg.dim + j)] = alg.c(j, i, k); // e_j e_i
            }
        left[std::size_t(i)] = std::move(l);
        right[std::size_t(i)] = std::move(r);
    }
    return make_bimodule(std::move(left), std::move(right), alg.dim);
}

inline Bimodule zero_bimodule(const Algebra& alg, int dim = 1) {
    std::vector<std::vector<CQ>> zero(std::size_t(alg.dim), std::vector<CQ>(std::size_t(dim) * dim));
    return make_bimodule(zero, zero, dim);
}

// Dual module X* under the bilinear pairing <phi, x> = sum phi_i x_i:
// (a.phi) = R(a)^T phi and (phi.a) = L(a)^T phi.
inline Bimodule build_dual_module(const Bimodule& mod) {
    auto transpose_all = [&](const std::vector<std::vector<CQ>>& src) {
        std::vector<std::vector<CQ>> out(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
            std::vector<CQ> t(std::size_t(mod.dim) * mod.dim);
            for (int r = 0; r < mod.dim; ++r)
                for (int c = 0; c < mod.dim; ++c)
                    t[std::size_t(c * mod.dim + r)] = src[i][std::size_t(r * mod.dim + c)];
            out[i] = std::move(t);
        }
        return out;
    };
    return make_bimodule(transpose_all(mod.right), transpose_all(mod.left), mod.dim);
}

// --------------------------------------------------------------------------
// Builtin algebras.

// Full matrix algebra M_k, basis e_pq flattened as p*k + q.
inline Algebra build_matrix_algebra(int k) {
    if (k < 1) throw std::invalid_argument("matrix algebra needs k >= 1");
    int d = k * k;
    std::vector<CQ> c(std::size_t(d) * d * d);
    std::vector<std::string> labels;
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
            labels.push_back("e" + std::to_string(p + 1) + std::to_string(q + 1));
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
            for (int r = 0; r < k; ++r)
                for (int s = 0; s < k; ++s)
                    if (q == r) {
                        int i = p * k + q, j = r * k + s, out = p * k + s;
                        c[std::size_t((i * d + j) * d + out)] = CQ(Rational(1));
                    }
    return make_algebra(d, std::move(labels), std::move(c));
}

// C[t]/(t^2), basis {1, t}.
inline Algebra build_dual_numbers() {
    std::vector<CQ> c(8);
    auto set = [&](int i, int j, int k) { c[std::size_t((i * 2 + j) * 2 + k)] = CQ(Rational(1)); };
    set(0, 0, 0); // 1*1 = 1
    set(0, 1, 1); // 1*t = t
    set(1, 0, 1); // t*1 = t
    return make_algebra(2, {"1", "t"}, std::move(c));
}

// Upper-triangular k x k matrices, basis e_pq for p <= q.
inline Algebra build_upper_triangular(int k) {
    if (k < 1) throw std::invalid_argument("upper-triangular algebra needs k >= 1");
    std::vector<std::pair<int, int>> basis;
    for (int p = 0; p < k; ++p)
        for (int q = p; q < k; ++q) basis.emplace_back(p, q);
    int d = int(basis.size());
    auto index_of = [&](int p, int q) {
        for (int t = 0; t < d; ++t)
            if (basis[std::size_t(t)] == std::pair<int, int>{p, q}) return t;
        return -1;
    };
    std::vector<CQ> c(std::size_t(d) * d * d);
    std::vector<std::string> labels;
    for (auto [p, q] : basis) labels.push_back("e" + std::to_string(p + 1) + std::to_string(q + 1));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto [p, q] = basis[std::size_t(i)];
            auto [r, s] = basis[std::size_t(j)];
            if (q == r) c[std::size_t((i * d + j) * d + index_of(p, s))] = CQ(Rational(1));
        }
    return make_algebra(d, std::move(labels), std::move(c));
}

inline Algebra build_direct_sum(const Algebra& a, const Algebra& b) {
    int d = a.dim + b.dim;
    std::vector<CQ> c(std::size_t(d) * d * d);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
            for (int k = 0; k < a.dim; ++k)
                c[std::size_t((i * d + j) * d + k)] = a.c(i, j, k);
    for (int i = 0; i < b.dim; ++i)
        for (int j = 0; j < b.dim; ++j)
            for (int k = 0; k < b.dim; ++k)
                c[std::size_t(((i + a.dim) * d + (j + a.dim)) * d + (k + a.dim))] = b.c(i, j, k);
    std::vector<std::string> labels;
    for (const auto& l : a.basis_labels) labels.push_back("A." + l);
    for (const auto& l : b.basis_labels) labels.push_back("B." + l);
    return make_algebra(d, std::move(labels), std::move(c));
}

} // namespace coholab
