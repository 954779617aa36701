#pragma once

// Defect measurement: the multilinearity defect of a split triple over a
// configurable scalar set, the cocycle defect over samples or an exhaustive
// finite spanning set, exact multilinear operator norms, and the bounded
// perturbation families used to instantiate every repair experiment.

#include <coholab/cochain.hpp>
#include <coholab/cohomology.hpp>

#include <memory>
#include <optional>
#include <string>

namespace coholab {

// --------------------------------------------------------------------------
// Black-box (possibly nonlinear) maps A^n -> X over floating coordinates.

struct PointwiseMap {
    int degree = 0;
    std::function<Element<CD>(std::span<const Element<CD>>)> eval;
    bool vanishes_on_zero_slices = false;
    std::string descriptor;

    MultiMap<CD> as_multimap() const { return {degree, eval}; }
};

inline PointwiseMap map_from_cochain(const Cochain<CD>& f, std::string descriptor = "cochain") {
    return {f.degree,
            [f](std::span<const Element<CD>> args) { return evaluate(f, args); },
            true, std::move(descriptor)};
}

inline PointwiseMap map_from_cochain(const Cochain<CQ>& f, std::string descriptor = "cochain") {
    return map_from_cochain(cochain_to_double(f), std::move(descriptor));
}

inline PointwiseMap zero_map(int degree, int mod_dim) {
    return {degree,
            [mod_dim](std::span<const Element<CD>>) { return Element<CD>(std::size_t(mod_dim)); },
            true, "zero"};
}

inline PointwiseMap map_sum(const PointwiseMap& a, const PointwiseMap& b) {
    if (a.degree != b.degree) throw std::invalid_argument("map degree mismatch");
    return {a.degree,
            [ea = a.eval, eb = b.eval](std::span<const Element<CD>> args) {
                return add(ea(args), eb(args));
            },
            a.vanishes_on_zero_slices && b.vanishes_on_zero_slices,
            a.descriptor + " + " + b.descriptor};
}

inline PointwiseMap map_scaled(const PointwiseMap& a, double s) {
    return {a.degree,
            [e = a.eval, s](std::span<const Element<CD>> args) {
                Element<CD> v = e(args);
                for (CD& z : v) z = scale(z, s);
                return v;
            },
            a.vanishes_on_zero_slices, std::to_string(s) + " * (" + a.descriptor + ")"};
}

// --------------------------------------------------------------------------
// Sampling.

struct SamplePlan {
    int count = 2048;
    std::uint64_t seed = 0;
};

inline Element<CD> random_element(SplitMix64& rng, int dim) {
    auto a = Element<CD>(std::size_t(dim));
    for (int i = 0; i < dim; ++i) a[std::size_t(i)] = {rng.next_symmetric(), rng.next_symmetric()};
    return a;
}

inline std::vector<Element<CD>> random_tuple(SplitMix64& rng, int n, int dim) {
    std::vector<Element<CD>> t;
    t.reserve(std::size_t(n));
    for (int j = 0; j < n; ++j) t.push_back(random_element(rng, dim));
    return t;
}

// Scalar sets for the multilinearity defect.
struct LambdaSet {
    enum class Kind { one, tcircle, one_i, ball };
    Kind kind = Kind::one;
    int count = 1;       // grid size for tcircle / ball
    double radius = 1.0; // ball only

    static LambdaSet one() { return {}; }
    static LambdaSet unit_circle(int count) { return {Kind::tcircle, count, 1.0}; }
    static LambdaSet one_and_i() { return {Kind::one_i, 2, 1.0}; }
    static LambdaSet complex_ball(int count, double radius) { return {Kind::ball, count, radius}; }

    double max_modulus() const { return kind == Kind::ball ? radius : 1.0; }

    CD sample(SplitMix64& rng) const {
        switch (kind) {
            case Kind::one: return {1.0, 0.0};
            case Kind::tcircle: {
                double theta = 2.0 * M_PI * double(rng.next_below(std::uint64_t(count))) / double(count);
                return {std::cos(theta), std::sin(theta)};
            }
            case Kind::one_i:
                return rng.next_below(2) == 0 ? CD{1.0, 0.0} : CD{0.0, 1.0};
            case Kind::ball: {
                // deterministic spiral grid scaled by the radius, so samples at
                // radius 2r are exactly twice the samples at radius r
                std::uint64_t k = rng.next_below(std::uint64_t(count));
                double r = radius * std::sqrt((double(k) + 0.5) / double(count));
                double theta = 2.0 * M_PI * std::fmod(double(k) * 0.61803398874989485, 1.0);
                return {r * std::cos(theta), r * std::sin(theta)};
            }
        }
        return {1.0, 0.0};
    }
};

struct DefectWitness {
    std::size_t sample_index = 0;
    std::vector<Element<CD>> a_tuple;
    std::vector<Element<CD>> b_tuple; // empty for cocycle defects
    std::vector<CD> lambdas;          // empty for cocycle defects
};

struct DefectReport {
    double sup_observed = 0;   // max over the evaluated set (a lower bound of the sup)
    std::size_t samples = 0;
    bool exact_zero = false;   // set by the exact spanning-set path
    DefectWitness witness;
};

// --------------------------------------------------------------------------
// Multilinearity defect
//   sum_j [ f1(..., l_j a_j + l_j b_j, ...) - l_j f2(..., a_j, ...)
//                                           - l_j f3(..., b_j, ...) ]
// evaluated at one point; slots other than j carry the a-tuple.

inline Element<CD> d_defect_value(const PointwiseMap& f1, const PointwiseMap& f2, const PointwiseMap& f3,
                                  std::span<const CD> lambdas,
                                  std::span<const Element<CD>> a, std::span<const Element<CD>> b,
                                  int mod_dim) {
    const int n = f1.degree;
    auto acc = Element<CD>(std::size_t(mod_dim));
    std::vector<Element<CD>> args(a.begin(), a.end());
    const Element<CD> f2_at_a = f2.eval(a);
    for (int j = 0; j < n; ++j) {
        const CD& l = lambdas[std::size_t(j)];
        args[std::size_t(j)] = scaled(add(a[std::size_t(j)], b[std::size_t(j)]), l);
        Element<CD> term = f1.eval(args);
        args[std::size_t(j)] = b[std::size_t(j)];
        Element<CD> f3_term = f3.eval(args);
        args[std::size_t(j)] = a[std::size_t(j)];
        for (int c = 0; c < mod_dim; ++c)
            acc[std::size_t(c)] += term[std::size_t(c)] - l * f2_at_a[std::size_t(c)] - l * f3_term[std::size_t(c)];
    }
    return acc;
}

inline DefectReport d_defect(const Algebra& alg, const Bimodule& mod,
                             const PointwiseMap& f1, const PointwiseMap& f2, const PointwiseMap& f3,
                             const LambdaSet& lambdas, const SamplePlan& plan) {
    if (f1.degree != f2.degree || f1.degree != f3.degree)
        throw std::invalid_argument("defect triple degree mismatch");
    if (plan.count <= 0) throw std::invalid_argument("empty sampling plan");
    const int n = f1.degree;
    DefectReport rep;
    rep.samples = std::size_t(plan.count);
    for (int s = 0; s < plan.count; ++s) {
        SplitMix64 rng(plan.seed, std::uint64_t(s));
        auto a = random_tuple(rng, n, alg.dim);
        auto b = random_tuple(rng, n, alg.dim);
        auto ls = std::vector<CD>(std::size_t(n));
        for (int j = 0; j < n; ++j) ls[std::size_t(j)] = lambdas.sample(rng);
        double v = module_norm(d_defect_value(f1, f2, f3, ls, a, b, mod.dim));
        if (v > rep.sup_observed) {
            rep.sup_observed = v;
            rep.witness = {std::size_t(s), a, b, ls};
        }
    }
    return rep;
}

// --------------------------------------------------------------------------
// Cocycle defect: sup of || d[f1,f2,f3](a_1..a_{n+1}) ||.

struct SpanningSet {
    std::vector<Element<CQ>> elements;

    static SpanningSet basis(const Algebra& alg) {
        SpanningSet s;
        for (int i = 0; i < alg.dim; ++i) s.elements.push_back(basis_element<CQ>(alg.dim, i));
        return s;
    }

    static SpanningSet from_basis_indices(const Algebra& alg, const std::vector<int>& indices) {
        SpanningSet s;
        for (int i : indices) {
            if (i < 0 || i >= alg.dim) throw std::invalid_argument("spanning-set index out of range");
            s.elements.push_back(basis_element<CQ>(alg.dim, i));
        }
        return s;
    }

    bool spans(const Algebra& alg) const {
        if (elements.empty()) return false;
        MatQ m(alg.dim, int(elements.size()));
        for (int c = 0; c < int(elements.size()); ++c)
            for (int r = 0; r < alg.dim; ++r) m.at(r, c) = elements[std::size_t(c)][std::size_t(r)];
        return rank(m) == alg.dim;
    }
};

namespace detail {

// Exhaustive walk over |S|^(n+1) index tuples.
template <typename Visit>
void for_each_tuple(std::size_t set_size, int len, Visit&& visit) {
    std::vector<std::size_t> idx(std::size_t(len), 0);
    while (true) {
        visit(idx);
        int j = len;
        while (j > 0) {
            --j;
            if (++idx[std::size_t(j)] < set_size) break;
            idx[std::size_t(j)] = 0;
            if (j == 0) return;
        }
    }
}

} // namespace detail

inline DefectReport cocycle_defect(const Algebra& alg, const Bimodule& mod,
                                   const PointwiseMap& f1, const PointwiseMap& f2, const PointwiseMap& f3,
                                   const SpanningSet& span_set) {
    if (!span_set.spans(alg)) throw std::invalid_argument("set does not span the algebra");
    const int n = f1.degree;
    std::vector<Element<CD>> elems;
    for (const auto& e : span_set.elements) elems.push_back(element_to_double(e));

    DefectReport rep;
    rep.exact_zero = true;
    MultiMap<CD> m1 = f1.as_multimap(), m2 = f2.as_multimap(), m3 = f3.as_multimap();
    detail::for_each_tuple(elems.size(), n + 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<Element<CD>> args;
        args.reserve(idx.size());
        for (std::size_t k : idx) args.push_back(elems[k]);
        double v = module_norm(pexider_coboundary<CD>(alg, mod, m1, m2, m3, args));
        if (v != 0) rep.exact_zero = false;
        if (rep.samples == 0 || v > rep.sup_observed) {
            rep.sup_observed = v;
            rep.witness = {rep.samples, args, {}, {}};
        }
        ++rep.samples;
    });
    return rep;
}

inline DefectReport cocycle_defect(const Algebra& alg, const Bimodule& mod,
                                   const PointwiseMap& f1, const PointwiseMap& f2, const PointwiseMap& f3,
                                   const SamplePlan& plan) {
    if (plan.count <= 0) throw std::invalid_argument("empty sampling plan");
    const int n = f1.degree;
    DefectReport rep;
    rep.samples = std::size_t(plan.count);
    MultiMap<CD> m1 = f1.as_multimap(), m2 = f2.as_multimap(), m3 = f3.as_multimap();
    for (int s = 0; s < plan.count; ++s) {
        SplitMix64 rng(plan.seed ^ 0x5c0c1eULL, std::uint64_t(s));
        auto args = random_tuple(rng, n + 1, alg.dim);
        double v = module_norm(pexider_coboundary<CD>(alg, mod, m1, m2, m3, args));
        if (v > rep.sup_observed) {
            rep.sup_observed = v;
            rep.witness = {std::size_t(s), args, {}, {}};
        }
    }
    return rep;
}

// Exact path: rational triple on a spanning set, exact zero decided without
// tolerances.
struct ExactDefect {
    bool exactly_zero = true;
    double sup_observed = 0;
};

inline ExactDefect cocycle_defect_exact(const Algebra& alg, const Bimodule& mod,
                                        const Cochain<CQ>& f1, const Cochain<CQ>& f2, const Cochain<CQ>& f3,
                                        const SpanningSet& span_set) {
    if (!span_set.spans(alg)) throw std::invalid_argument("set does not span the algebra");
    const int n = f1.degree;
    MultiMap<CQ> m1 = cochain_map(f1), m2 = cochain_map(f2), m3 = cochain_map(f3);
    ExactDefect out;
    detail::for_each_tuple(span_set.elements.size(), n + 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<Element<CQ>> args;
        args.reserve(idx.size());
        for (std::size_t k : idx) args.push_back(span_set.elements[k]);
        Element<CQ> v = pexider_coboundary<CQ>(alg, mod, m1, m2, m3, args);
        if (!is_zero(v)) out.exactly_zero = false;
        out.sup_observed = std::max(out.sup_observed, module_norm(v));
    });
    return out;
}

// --------------------------------------------------------------------------
// Multilinear operator norm ||f|| = sup { ||f(a_1..a_n)|| : nu(a_i) <= 1 }.
// The nu-ball is the kappa-scaled l1 ball, so the sup is attained at basis
// vertices: max over basis tuples of ||f(e_..)|| / kappa^n.

template <typename K>
double multilinear_norm(const Algebra& alg, const Cochain<K>& f) {
    double best = 0;
    for (std::size_t t = 0; t < f.tuple_count(); ++t) best = std::max(best, module_norm(f.value_at(t)));
    double kappa = to_double(alg.norm_scale);
    return best / std::pow(kappa, f.degree);
}

template <typename K>
double multilinear_distance(const Algebra& alg, const Cochain<K>& f, const Cochain<K>& g) {
    return multilinear_norm(alg, sub(f, g));
}

// --------------------------------------------------------------------------
// Perturbation families. p(a_1..a_n) = eps * prod_j min(1, nu(a_j)) *
// u(a_1/nu(a_1), ..., a_n/nu(a_n)) with ||u||_inf <= 1 pointwise, so
//   - ||p|| <= eps everywhere (the analytic cap),
//   - p vanishes whenever a slot is zero,
//   - p is invariant under doubling above the unit sphere, which makes the
//     repair iteration's per-step deltas decay by exactly 2^-n.

enum class PerturbationKind { bounded_smooth, oscillatory, coordinate_clip };

inline PerturbationKind parse_perturbation_kind(const std::string& s) {
    if (s == "bounded-smooth") return PerturbationKind::bounded_smooth;
    if (s == "oscillatory") return PerturbationKind::oscillatory;
    if (s == "coordinate-clip") return PerturbationKind::coordinate_clip;
    throw std::invalid_argument("unknown perturbation kind: '" + s + "'");
}

inline std::string perturbation_kind_name(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::bounded_smooth: return "bounded-smooth";
        case PerturbationKind::oscillatory: return "oscillatory";
        case PerturbationKind::coordinate_clip: return "coordinate-clip";
    }
    return "?";
}

inline PointwiseMap perturbation_family(const Algebra& alg, const Bimodule& mod, int degree,
                                        PerturbationKind kind, double eps, std::uint64_t seed) {
    if (eps < 0) throw std::invalid_argument("perturbation size must be nonnegative");
    if (degree < 1) throw std::invalid_argument("perturbation degree must be >= 1");

    struct Field {
        PerturbationKind kind;
        int degree, alg_dim, mod_dim;
        double eps, kappa;
        std::vector<double> w; // frozen weights: per output coord, 2*degree*alg_dim + 2
    };
    auto field = std::make_shared<Field>();
    field->kind = kind;
    field->degree = degree;
    field->alg_dim = alg.dim;
    field->mod_dim = mod.dim;
    field->eps = eps;
    field->kappa = to_double(alg.norm_scale);
    const std::size_t per_coord = std::size_t(2 * degree * alg.dim + 2);
    SplitMix64 rng(seed, 0x9e7);
    field->w.resize(per_coord * std::size_t(mod.dim));
    for (double& x : field->w) x = 3.0 * rng.next_symmetric();

    auto eval = [field](std::span<const Element<CD>> args) {
        Element<CD> out(std::size_t(field->mod_dim));
        if (field->eps == 0) return out;
        double envelope = 1.0;
        std::vector<double> flat; // normalized coordinates, re/im interleaved
        flat.reserve(std::size_t(2 * field->degree * field->alg_dim));
        for (const auto& a : args) {
            double nu = 0;
            for (const CD& z : a) nu += modulus(z);
            nu *= field->kappa;
            if (nu == 0) return out; // zero slice
            envelope *= std::min(1.0, nu);
            for (const CD& z : a) {
                flat.push_back(z.re / nu);
                flat.push_back(z.im / nu);
            }
        }
        const double amp = field->eps * envelope;
        const std::size_t per_coord = std::size_t(2 * field->degree * field->alg_dim + 2);
        for (int c = 0; c < field->mod_dim; ++c) {
            const double* w = field->w.data() + per_coord * std::size_t(c);
            double phase1 = w[per_coord - 2], phase2 = w[per_coord - 1];
            for (std::size_t i = 0; i < flat.size(); ++i) {
                phase1 += w[i] * flat[i];
                phase2 += w[flat.size() - 1 - i] * flat[i];
            }
            CD u;
            switch (field->kind) {
                case PerturbationKind::oscillatory:
                    u = {std::cos(phase1), std::sin(phase1)};
                    break;
                case PerturbationKind::bounded_smooth:
                    u = {std::sin(phase1) * M_SQRT1_2, std::sin(phase2) * M_SQRT1_2};
                    break;
                case PerturbationKind::coordinate_clip: {
                    CD z{phase1 / 3.0, phase2 / 3.0};
                    double m = modulus(z);
                    u = m > 1.0 ? scale(z, 1.0 / m) : z;
                    break;
                }
            }
            out[std::size_t(c)] = scale(u, amp);
        }
        return out;
    };

    std::string desc = "perturbation(kind=" + perturbation_kind_name(kind) +
                       ", eps=" + std::to_string(eps) + ", seed=" + std::to_string(seed) + ")";
    return {degree, std::move(eval), true, std::move(desc)};
}

// Spot-check of the zero-slice claim at seeded tuples with one zeroed slot.
inline bool spot_check_zero_slices(const Algebra& alg, const PointwiseMap& f,
                                   std::uint64_t seed, int count = 50, double tol = 0.0) {
    for (int s = 0; s < count; ++s) {
        SplitMix64 rng(seed ^ 0x25ull, std::uint64_t(s));
        auto args = random_tuple(rng, f.degree, alg.dim);
        args[rng.next_below(std::uint64_t(f.degree))] = Element<CD>(std::size_t(alg.dim));
        if (module_norm(f.eval(args)) > tol) return false;
    }
    return true;
}

// Certificate comparison with a floating-rounding allowance. Genuine
// violations of the verified inequalities show up at the scale of the caps
// (>= 1e-3 in every experiment); the allowance only absorbs last-ulp noise,
// including the exact-input case where both sides are mathematically zero.
inline bool holds_leq(double lhs, double rhs) {
    return lhs <= rhs + 1e-11 * (1.0 + rhs);
}

// --------------------------------------------------------------------------
// Analytic caps for planted triples F + eps_k p_k (p_k pointwise-bounded by
// eps_k, F multilinear; the multilinear part cancels in every defect term).

inline double alpha_cap(int n, double eps1, double eps2, double eps3, double lambda_max = 1.0) {
    return double(n) * (eps1 + lambda_max * (eps2 + eps3));
}

// Cocycle defect over tuples with nu(a_i) <= r (basis tuples have r = kappa).
inline double beta_cap(const Algebra& alg, const Bimodule& mod, int n,
                       double eps1, double eps2, double eps3) {
    double m = action_norm_constant(alg, mod);
    double r = to_double(alg.norm_scale);
    return m * r * (eps1 + eps3) + double(n) * eps2;
}

inline double eta_cap(const Algebra& alg, const Bimodule& mod, int n,
                      double gamma1, double gamma2, double gamma3, double eps1) {
    double m = action_norm_constant(alg, mod);
    double r = to_double(alg.norm_scale);
    return m * r * (gamma1 + gamma3) + double(n - 1) * gamma2 + eps1;
}

} // namespace coholab
