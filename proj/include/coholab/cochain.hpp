#pragma once

// n-cochains as coordinate tensors: the value tensor over basis multi-indices
// determines the unique multilinear extension. Degree 0 is a single module
// element. Flattening is row-major over (i_1,...,i_n), then the module
// coordinate.

#include <coholab/algebra.hpp>

#include <functional>
#include <span>

namespace coholab {

inline std::size_t power(int base, int exp) {
    std::size_t p = 1;
    for (int i = 0; i < exp; ++i) p *= std::size_t(base);
    return p;
}

template <typename K>
struct Cochain {
    int degree = 0;
    int alg_dim = 0;
    int mod_dim = 0;
    std::vector<K> values; // alg_dim^degree * mod_dim

    static Cochain zero(int degree, int alg_dim, int mod_dim) {
        Cochain f;
        f.degree = degree;
        f.alg_dim = alg_dim;
        f.mod_dim = mod_dim;
        f.values.assign(power(alg_dim, degree) * std::size_t(mod_dim), K{});
        return f;
    }

    std::size_t tuple_count() const { return power(alg_dim, degree); }

    std::size_t flat(std::span<const int> tuple) const {
        std::size_t t = 0;
        for (int i : tuple) t = t * std::size_t(alg_dim) + std::size_t(i);
        return t;
    }

    Element<K> value_at(std::size_t flat_tuple) const {
        auto x = Element<K>(std::size_t(mod_dim));
        for (int c = 0; c < mod_dim; ++c) x[std::size_t(c)] = values[flat_tuple * std::size_t(mod_dim) + std::size_t(c)];
        return x;
    }

    void set_value(std::size_t flat_tuple, const Element<K>& x) {
        for (int c = 0; c < mod_dim; ++c) values[flat_tuple * std::size_t(mod_dim) + std::size_t(c)] = x[std::size_t(c)];
    }
};

template <typename K>
Cochain<K> add(const Cochain<K>& a, const Cochain<K>& b) {
    Cochain<K> r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
    return r;
}

template <typename K>
Cochain<K> sub(const Cochain<K>& a, const Cochain<K>& b) {
    Cochain<K> r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
    return r;
}

template <typename K>
Cochain<K> scaled(const Cochain<K>& a, const K& s) {
    Cochain<K> r = a;
    for (auto& v : r.values) v = v * s;
    return r;
}

inline Cochain<CD> cochain_to_double(const Cochain<CQ>& f) {
    Cochain<CD> r;
    r.degree = f.degree;
    r.alg_dim = f.alg_dim;
    r.mod_dim = f.mod_dim;
    r.values.reserve(f.values.size());
    for (const CQ& v : f.values) r.values.push_back(to_double(v));
    return r;
}

// Multilinear evaluation at arbitrary coordinate tuples. Walks only the
// combinations of nonzero argument coordinates, so evaluation at (scaled)
// basis tuples costs O(mod_dim).
template <typename K>
Element<K> evaluate(const Cochain<K>& f, std::span<const Element<K>> args) {
    if (int(args.size()) != f.degree) throw std::invalid_argument("cochain arity mismatch");
    Element<K> out(std::size_t(f.mod_dim));
    if (f.degree == 0) return f.value_at(0);

    std::vector<std::vector<std::pair<int, K>>> support(args.size());
    for (std::size_t j = 0; j < args.size(); ++j) {
        for (int i = 0; i < f.alg_dim; ++i)
            if (!args[j][std::size_t(i)].is_zero()) support[j].emplace_back(i, args[j][std::size_t(i)]);
        if (support[j].empty()) return out;
    }

    std::vector<std::size_t> pick(args.size(), 0);
    while (true) {
        K coeff = support[0][pick[0]].second;
        std::size_t flat = std::size_t(support[0][pick[0]].first);
        for (std::size_t j = 1; j < args.size(); ++j) {
            coeff = coeff * support[j][pick[j]].second;
            flat = flat * std::size_t(f.alg_dim) + std::size_t(support[j][pick[j]].first);
        }
        const std::size_t base = flat * std::size_t(f.mod_dim);
        for (int c = 0; c < f.mod_dim; ++c) {
            const K& v = f.values[base + std::size_t(c)];
            if (!v.is_zero()) out[std::size_t(c)] += coeff * v;
        }
        std::size_t j = args.size();
        while (j > 0) {
            --j;
            if (++pick[j] < support[j].size()) break;
            pick[j] = 0;
            if (j == 0) return out;
        }
    }
}

// --------------------------------------------------------------------------
// Coboundary operator. For f of degree n:
//   (d f)(a_1..a_{n+1}) = a_1 f(a_2..a_{n+1})
//                        + sum_j (-1)^j f(a_1,..., a_j a_{j+1}, ..., a_{n+1})
//                        + (-1)^{n+1} f(a_1..a_n) a_{n+1}
// with d x (a) = a x - x a at degree 0.

template <typename K>
Cochain<K> coboundary(const Algebra& alg, const Bimodule& mod, const Cochain<K>& f) {
    const int n = f.degree;
    Cochain<K> out = Cochain<K>::zero(n + 1, alg.dim, mod.dim);
    std::vector<int> tuple(std::size_t(n + 1), 0);

    const bool last_positive = ((n + 1) % 2) == 0;
    for (std::size_t t = 0; t < out.tuple_count(); ++t) {
        // decode flat index
        std::size_t rem = t;
        for (int j = n; j >= 0; --j) {
            tuple[std::size_t(j)] = int(rem % std::size_t(alg.dim));
            rem /= std::size_t(alg.dim);
        }
        Element<K> acc(std::size_t(mod.dim));

        // a_1 f(a_2..a_{n+1})
        {
            std::size_t flat = 0;
            for (int j = 1; j <= n; ++j) flat = flat * std::size_t(alg.dim) + std::size_t(tuple[std::size_t(j)]);
            Element<K> v = f.value_at(flat);
            Element<K> a1 = basis_element<K>(alg.dim, tuple[0]);
            acc = add(acc, act_left(mod, a1, v));
        }
        // middle terms: expand the product slot through the structure tensor
        for (int j = 1; j <= n; ++j) {
            const int ij = tuple[std::size_t(j - 1)], ij1 = tuple[std::size_t(j)];
            Element<K> term(std::size_t(mod.dim));
            for (int k = 0; k < alg.dim; ++k) {
                K w;
                if constexpr (std::is_same_v<K, CQ>) w = alg.c(ij, ij1, k);
                else w = alg.c_d(ij, ij1, k);
                if (w.is_zero()) continue;
                std::size_t flat = 0;
                for (int s = 0; s < n; ++s) {
                    int idx;
                    if (s < j - 1) idx = tuple[std::size_t(s)];
                    else if (s == j - 1) idx = k;
                    else idx = tuple[std::size_t(s + 1)];
                    flat = flat * std::size_t(alg.dim) + std::size_t(idx);
                }
                const std::size_t base = flat * std::size_t(mod.dim);
                for (int c = 0; c < mod.dim; ++c) {
                    const K& v = f.values[base + std::size_t(c)];
                    if (!v.is_zero()) term[std::size_t(c)] += w * v;
                }
            }
            acc = (j % 2 == 0) ? add(acc, term) : sub(acc, term);
        }
        // (-1)^{n+1} f(a_1..a_n) a_{n+1}
        {
            std::size_t flat = 0;
            for (int j = 0; j < n; ++j) flat = flat * std::size_t(alg.dim) + std::size_t(tuple[std::size_t(j)]);
            Element<K> v = f.value_at(flat);
            Element<K> an1 = basis_element<K>(alg.dim, tuple[std::size_t(n)]);
            Element<K> term = act_right(mod, v, an1);
            acc = last_positive ? add(acc, term) : sub(acc, term);
        }
        out.set_value(t, acc);
    }
    return out;
}

// --------------------------------------------------------------------------
// A degree-tagged evaluator, the common shape of exact cochains, floating
// cochains and black-box pointwise maps.

template <typename K>
struct MultiMap {
    int degree = 0;
    std::function<Element<K>(std::span<const Element<K>>)> eval;
};

template <typename K>
MultiMap<K> cochain_map(const Cochain<K>& f) {
    return {f.degree, [f](std::span<const Element<K>> args) { return evaluate(f, args); }};
}

// The split-function coboundary at a point: occurrences of the unknown are
// distributed over three maps of equal degree n, evaluated at n+1 arguments.
// The product slot feeds the literal product a_j a_{j+1} to f2 (the maps may
// be nonlinear, so no multilinear expansion happens here).
template <typename K>
Element<K> pexider_coboundary(const Algebra& alg, const Bimodule& mod,
                              const MultiMap<K>& f1, const MultiMap<K>& f2, const MultiMap<K>& f3,
                              std::span<const Element<K>> args) {
    const int n = f1.degree;
    if (f2.degree != n || f3.degree != n) throw std::invalid_argument("pexider triple degree mismatch");
    if (int(args.size()) != n + 1) throw std::invalid_argument("pexider arity mismatch");

    Element<K> acc = act_left(mod, args[0], f1.eval(args.subspan(1)));

    std::vector<Element<K>> inner(args.begin(), args.end() - 1);
    for (int j = 1; j <= n; ++j) {
        // tuple (a_1,...,a_{j-1}, a_j a_{j+1}, a_{j+2},...,a_{n+1})
        std::vector<Element<K>> t;
        t.reserve(std::size_t(n));
        for (int s = 0; s < j - 1; ++s) t.push_back(args[std::size_t(s)]);
        t.push_back(mul(alg, args[std::size_t(j - 1)], args[std::size_t(j)]));
        for (int s = j + 1; s <= n; ++s) t.push_back(args[std::size_t(s)]);
        Element<K> term = f2.eval(t);
        acc = (j % 2 == 0) ? add(acc, term) : sub(acc, term);
    }

    Element<K> tail = act_right(mod, f3.eval(args.first(std::size_t(n))), args[std::size_t(n)]);
    return ((n + 1) % 2 == 0) ? add(acc, tail) : sub(acc, tail);
}

} // namespace coholab
