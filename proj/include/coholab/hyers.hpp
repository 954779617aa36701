#pragma once

// Repair engine. The limit construction rescales a map along doubled
// arguments, F_m = 2^{-mn} f(2^m e_i1, ..., 2^m e_in), and the limit of the
// basis tensors is the multilinear repair candidate. On top of it:
// split-triple repair with the three explicit distance bounds, recovery of
// inner derivations, the functional-equation presets, repair of approximate
// coboundaries, and a ledger re-checking every intermediate inequality of
// the construction from raw evaluations.

#include <coholab/defect.hpp>

#include <array>
#include <cmath>

namespace coholab {

struct HyersTrace {
    int degree = 0;
    std::vector<Cochain<CD>> iterates; // F_0 .. F_{m_used}
    std::vector<double> deltas;        // ||F_{m+1} - F_m||, multilinear norm
    int m_used = 0;
    bool tol_met = false;
    enum class Stop { tol, m_max } stop_reason = Stop::m_max;

    const Cochain<CD>& final() const { return iterates.back(); }
    double last_delta() const { return deltas.empty() ? 0.0 : deltas.back(); }

    // Remaining distance to the limit, assuming the geometric decay that the
    // trace itself exhibits: sum_{j>=1} last_delta * 2^{-nj}.
    double tail_bound() const {
        return last_delta() / (std::pow(2.0, degree) - 1.0);
    }

    // delta_{m+1} <= delta_m * 2^-n * (1 + slack) from the given step on.
    bool decay_ok(double slack = 0.01, std::size_t from = 2) const {
        const double factor = std::pow(2.0, -degree) * (1.0 + slack);
        for (std::size_t m = from; m < deltas.size(); ++m) {
            if (deltas[m - 1] == 0.0) {
                if (deltas[m] != 0.0) return false;
            } else if (deltas[m] > deltas[m - 1] * factor) {
                return false;
            }
        }
        return true;
    }
};

inline Cochain<CD> scaled_basis_tensor(const Algebra& alg, const Bimodule& mod,
                                       const PointwiseMap& f, int m) {
    const int n = f.degree;
    Cochain<CD> out = Cochain<CD>::zero(n, alg.dim, mod.dim);
    const double s = std::ldexp(1.0, m);
    std::vector<int> tuple(std::size_t(n), 0);
    for (std::size_t t = 0; t < out.tuple_count(); ++t) {
        std::size_t rem = t;
        for (int j = n - 1; j >= 0; --j) {
            tuple[std::size_t(j)] = int(rem % std::size_t(alg.dim));
            rem /= std::size_t(alg.dim);
        }
        std::vector<Element<CD>> args;
        args.reserve(std::size_t(n));
        for (int j = 0; j < n; ++j) args.push_back(basis_element<CD>(alg.dim, tuple[std::size_t(j)], CD{s, 0.0}));
        Element<CD> v = f.eval(args);
        for (CD& z : v) z = {std::ldexp(z.re, -m * n), std::ldexp(z.im, -m * n)};
        for (const CD& z : v)
            if (!std::isfinite(z.re) || !std::isfinite(z.im))
                throw std::runtime_error("non-finite evaluation in repair iteration (argument scaling overflow)");
        out.set_value(t, v);
    }
    return out;
}

inline HyersTrace hyers_limit(const Algebra& alg, const Bimodule& mod, const PointwiseMap& f1,
                              int m_max = 30, double tol = 1e-12) {
    if (f1.degree < 1) throw std::invalid_argument("repair limit needs degree >= 1");
    if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
    if (!(tol > 0)) throw std::invalid_argument("tol must be positive");

    HyersTrace trace;
    trace.degree = f1.degree;
    trace.iterates.push_back(scaled_basis_tensor(alg, mod, f1, 0));
    for (int m = 1; m <= m_max; ++m) {
        trace.iterates.push_back(scaled_basis_tensor(alg, mod, f1, m));
        const auto& prev = trace.iterates[std::size_t(m - 1)];
        const auto& cur = trace.iterates[std::size_t(m)];
        trace.deltas.push_back(multilinear_distance(alg, cur, prev));
        trace.m_used = m;
        if (trace.deltas.back() < tol) {
            trace.tol_met = true;
            trace.stop_reason = HyersTrace::Stop::tol;
            break;
        }
    }
    return trace;
}

// --------------------------------------------------------------------------
// Ledger of the construction's intermediate inequalities, re-evaluated at
// seeded sample tuples and at every trace step. A violation is recorded, not
// thrown.

struct BoundRecord {
    std::string id;
    double lhs = 0; // worst observed instance
    double rhs = 0; // its bound
    bool holds = true;
    std::size_t witness_sample = 0;
};

struct BoundLedger {
    std::vector<BoundRecord> records;

    bool all_hold() const {
        for (const auto& r : records)
            if (!r.holds) return false;
        return true;
    }
};

namespace detail {

struct WorstCase {
    double lhs = 0, rhs = std::numeric_limits<double>::infinity();
    bool holds = true;
    std::size_t witness = 0;
    bool seen = false;

    void offer(double l, double r, std::size_t sample) {
        if (!holds_leq(l, r)) holds = false;
        // track the tightest instance (largest lhs relative to its bound)
        const bool worse = !seen || l * rhs > lhs * r || (lhs == 0 && l > 0);
        if (worse) { lhs = l; rhs = r; witness = sample; seen = true; }
    }

    BoundRecord record(std::string id) const { return {std::move(id), lhs, seen ? rhs : 0.0, holds, witness}; }
};

inline Element<CD> eval_scaled(const PointwiseMap& f, const std::vector<Element<CD>>& a,
                               int m, int scale_slot = -1) {
    const double s = std::ldexp(1.0, m);
    std::vector<Element<CD>> args = a;
    for (std::size_t j = 0; j < args.size(); ++j)
        if (scale_slot < 0 || int(j) == scale_slot)
            for (CD& z : args[j]) z = scale(z, s);
    return f.eval(args);
}

} // namespace detail

inline BoundLedger verify_intermediate_bounds(const Algebra& alg, const Bimodule& mod,
                                              const PointwiseMap& f1, const PointwiseMap& f2,
                                              const PointwiseMap& f3, const HyersTrace& trace,
                                              double alpha, std::uint64_t seed, int samples = 512) {
    const int n = f1.degree;
    const double two_n = std::pow(2.0, n);
    const Cochain<CD>& F = trace.final();

    detail::WorstCase eq3, eq4, eq5, eq7, eq8, eq11, eq13, fin1, fin2, fin3;
    const std::array<std::pair<int, int>, 4> cauchy_pairs{{{0, 1}, {1, 3}, {2, 5}, {0, 6}}};

    for (int s = 0; s < samples; ++s) {
        SplitMix64 rng(seed ^ 0xb0c2dULL, std::uint64_t(s));
        const auto a = random_tuple(rng, n, alg.dim);
        const std::size_t sid = std::size_t(s);

        const Element<CD> f1a = f1.eval(a), f2a = f2.eval(a), f3a = f3.eval(a);
        const Element<CD> Fa = evaluate(F, std::span<const Element<CD>>(a));

        eq3.offer(module_norm(sub(f1a, f2a)), alpha / n, sid);
        eq4.offer(module_norm(sub(f1a, f3a)), alpha, sid);
        fin1.offer(module_norm(sub(f1a, Fa)), 3.0 * two_n * alpha, sid);
        fin2.offer(module_norm(sub(f2a, Fa)), 3.0 * (1.0 + 1.0 / n) * two_n * alpha, sid);
        fin3.offer(module_norm(sub(f3a, Fa)), 6.0 * two_n * alpha, sid);

        for (int i = 0; i < n; ++i) {
            std::vector<Element<CD>> doubled = a;
            for (CD& z : doubled[std::size_t(i)]) z = scale(z, 2.0);
            eq5.offer(module_norm(sub(f1.eval(doubled), scaled(f1a, CD{2.0, 0.0}))), 3.0 * alpha, sid);
            eq11.offer(module_norm(sub(f2.eval(doubled), scaled(f2a, CD{2.0, 0.0}))),
                       3.0 * (1.0 + 1.0 / n) * alpha, sid);
        }

        // argument-doubling telescopes, checked at every trace step
        for (int m = 1; m <= trace.m_used; ++m) {
            Element<CD> fm = detail::eval_scaled(f1, a, m);
            for (CD& z : fm) z = {std::ldexp(z.re, -m * n), std::ldexp(z.im, -m * n)};
            eq7.offer(module_norm(sub(f1a, fm)), 3.0 * (1.0 - std::ldexp(1.0, -m * n)) * two_n * alpha, sid);
        }
        for (auto [m1, m2] : cauchy_pairs) {
            if (m2 > trace.m_used) continue;
            Element<CD> v1 = detail::eval_scaled(f1, a, m1), v2 = detail::eval_scaled(f1, a, m2);
            for (CD& z : v1) z = {std::ldexp(z.re, -m1 * n), std::ldexp(z.im, -m1 * n)};
            for (CD& z : v2) z = {std::ldexp(z.re, -m2 * n), std::ldexp(z.im, -m2 * n)};
            double geo = 0;
            for (int j = m1; j < m2; ++j) geo += std::ldexp(1.0, -n * j);
            eq8.offer(module_norm(sub(v1, v2)), 1.5 * (two_n - 1.0) * alpha * geo, sid);
        }
        // single-slot scaling of f2
        const int m13 = std::min(trace.m_used, 12);
        for (int i = 0; i < n; ++i)
            for (int m = 1; m <= m13; ++m) {
                Element<CD> v = detail::eval_scaled(f2, a, m, i);
                for (CD& z : v) z = {std::ldexp(z.re, -m), std::ldexp(z.im, -m)};
                eq13.offer(module_norm(sub(v, f2a)),
                           3.0 * (1.0 - std::ldexp(1.0, -m)) * (1.0 + 1.0 / n) * alpha, sid);
            }
    }

    BoundLedger ledger;
    ledger.records.push_back(eq3.record("first-second-gap alpha/n"));
    ledger.records.push_back(eq4.record("first-third-gap alpha"));
    ledger.records.push_back(eq5.record("doubling-defect 3*alpha"));
    ledger.records.push_back(eq7.record("scaling-gap 3*(1-2^-mn)*2^n*alpha"));
    ledger.records.push_back(eq8.record("cauchy-gap geometric"));
    ledger.records.push_back(eq11.record("doubling-defect-f2 3*(1+1/n)*alpha"));
    ledger.records.push_back(eq13.record("single-slot-scaling-f2 3*(1-2^-m)*(1+1/n)*alpha"));
    ledger.records.push_back(fin1.record("f1-distance 3*2^n*alpha"));
    ledger.records.push_back(fin2.record("f2-distance 3*(1+1/n)*2^n*alpha"));
    ledger.records.push_back(fin3.record("f3-distance 6*2^n*alpha"));
    return ledger;
}

// --------------------------------------------------------------------------
// Split-triple repair.

struct AgreementRecord {
    std::string id;
    double gap = 0;
    double bound = 0;
    bool holds = true;
};

struct RepairOptions {
    int m_max = 30;
    double tol = 1e-12;
    std::uint64_t seed = 0;
    int ledger_samples = 512;
    int distance_samples = 256;
    LambdaSet lambdas = LambdaSet::unit_circle(64);
    std::optional<SpanningSet> span_set; // defaults to the basis
    SamplePlan defect_plan{2048, 0};
    double alpha_cap = 0; // analytic cap for the multilinearity defect
    std::optional<double> beta_cap;
    bool run_ledger = true;
};

struct RepairResult {
    int degree = 0;
    Cochain<CD> repaired; // F
    HyersTrace trace_f1, trace_f2, trace_f3;

    std::array<double, 3> distances{};    // observed sup ||f_k - F||
    std::array<double, 3> bounds{};       // 3*2^n*a, 3*(1+1/n)*2^n*a, 6*2^n*a
    std::array<bool, 3> bounds_hold{true, true, true};

    std::vector<AgreementRecord> agreements; // limit coincidences + uniqueness restart

    double cocycle_residual = 0;
    double residual_cap = 0;
    bool residual_ok = true;

    DefectReport alpha_report, beta_report;
    double alpha_cap_used = 0;
    BoundLedger ledger;

    // coboundary repair extras
    std::optional<Cochain<CD>> potential; // G
    HyersTrace trace_g1, trace_g2, trace_g3;
    std::array<double, 3> g_distances{};
    std::array<double, 3> g_bounds{};
    std::array<bool, 3> g_bounds_hold{true, true, true};
    double coboundary_residual = 0;
    double coboundary_residual_cap = 0;
    bool coboundary_ok = true;
    double eta_observed = 0;
    std::optional<double> eta_cap_used;
    bool eta_ok = true;
    BoundLedger g_ledger;

    // derivation extras
    std::optional<double> inner_distance;
    double inner_distance_cap = 0;
    bool inner_ok = true;
    double gamma_observed = 0;
    std::optional<double> gamma_cap_used;
    bool gamma_ok = true;

    bool all_hold() const {
        bool ok = bounds_hold[0] && bounds_hold[1] && bounds_hold[2] && residual_ok &&
                  ledger.all_hold() && g_ledger.all_hold() && coboundary_ok && eta_ok &&
                  g_bounds_hold[0] && g_bounds_hold[1] && g_bounds_hold[2] && inner_ok && gamma_ok;
        for (const auto& a : agreements) ok = ok && a.holds;
        return ok;
    }
};

namespace detail {

// Observed sup of ||f(a) - F(a)|| over basis tuples and seeded samples.
inline double observed_distance(const Algebra& alg, const PointwiseMap& f, const Cochain<CD>& F,
                                std::uint64_t seed, int samples) {
    const int n = f.degree;
    double best = 0;
    std::vector<int> tuple(std::size_t(n), 0);
    for (std::size_t t = 0; t < F.tuple_count(); ++t) {
        std::size_t rem = t;
        for (int j = n - 1; j >= 0; --j) {
            tuple[std::size_t(j)] = int(rem % std::size_t(alg.dim));
            rem /= std::size_t(alg.dim);
        }
        std::vector<Element<CD>> args;
        for (int j = 0; j < n; ++j) args.push_back(basis_element<CD>(alg.dim, tuple[std::size_t(j)]));
        best = std::max(best, module_norm(sub(f.eval(args), F.value_at(t))));
    }
    for (int s = 0; s < samples; ++s) {
        SplitMix64 rng(seed ^ 0xd15ULL, std::uint64_t(s));
        auto args = random_tuple(rng, n, alg.dim);
        best = std::max(best, module_norm(sub(f.eval(args), evaluate(F, std::span<const Element<CD>>(args)))));
    }
    return best;
}

inline PointwiseMap shifted_start(const PointwiseMap& f, int shift) {
    const double s = std::ldexp(1.0, shift);
    return {f.degree,
            [e = f.eval, s, n = f.degree, shift](std::span<const Element<CD>> args) {
                std::vector<Element<CD>> scaled_args(args.begin(), args.end());
                for (auto& a : scaled_args)
                    for (CD& z : a) z = scale(z, s);
                Element<CD> v = e(scaled_args);
                for (CD& z : v) z = {std::ldexp(z.re, -shift * n), std::ldexp(z.im, -shift * n)};
                return v;
            },
            f.vanishes_on_zero_slices, f.descriptor + " @2^" + std::to_string(shift)};
}

} // namespace detail

inline RepairResult repair_pexider_triple(const Algebra& alg, const Bimodule& mod,
                                          const PointwiseMap& f1, const PointwiseMap& f2,
                                          const PointwiseMap& f3, const RepairOptions& opt) {
    const int n = f1.degree;
    if (f2.degree != n || f3.degree != n) throw std::invalid_argument("triple degree mismatch");
    for (const PointwiseMap* f : {&f1, &f2, &f3})
        if (!f->vanishes_on_zero_slices || !spot_check_zero_slices(alg, *f, opt.seed))
            throw std::invalid_argument("triple member does not vanish on zero slices: " + f->descriptor);

    RepairResult res;
    res.degree = n;
    res.alpha_cap_used = opt.alpha_cap;

    res.trace_f1 = hyers_limit(alg, mod, f1, opt.m_max, opt.tol);
    res.trace_f2 = hyers_limit(alg, mod, f2, opt.m_max, opt.tol);
    res.trace_f3 = hyers_limit(alg, mod, f3, opt.m_max, opt.tol);
    res.repaired = res.trace_f1.final();
    const Cochain<CD>& F = res.repaired;

    const double two_n = std::pow(2.0, n);
    const double alpha = opt.alpha_cap;
    res.bounds = {3.0 * two_n * alpha, 3.0 * (1.0 + 1.0 / n) * two_n * alpha, 6.0 * two_n * alpha};
    res.distances = {detail::observed_distance(alg, f1, F, opt.seed, opt.distance_samples),
                     detail::observed_distance(alg, f2, F, opt.seed + 1, opt.distance_samples),
                     detail::observed_distance(alg, f3, F, opt.seed + 2, opt.distance_samples)};
    for (int k = 0; k < 3; ++k)
        res.bounds_hold[std::size_t(k)] = holds_leq(res.distances[std::size_t(k)], res.bounds[std::size_t(k)]);

    // The three limits coincide; gaps are bounded by the geometric tails.
    auto agree = [&](const char* id, const HyersTrace& other) {
        double gap = multilinear_distance(alg, other.final(), F);
        double bound = std::max(opt.tol, 4.0 * (res.trace_f1.tail_bound() + other.tail_bound()));
        res.agreements.push_back({id, gap, bound, holds_leq(gap, bound)});
    };
    agree("f2-limit-coincides", res.trace_f2);
    agree("f3-limit-coincides", res.trace_f3);

    // Double-speed scaling of the product slot of f2, checked at a fixed step.
    {
        const int mstar = std::min(8, res.trace_f2.m_used);
        double worst = 0;
        std::vector<int> tuple(std::size_t(n), 0);
        for (int i = 0; i < n; ++i) {
            for (std::size_t t = 0; t < F.tuple_count(); ++t) {
                std::size_t rem = t;
                for (int j = n - 1; j >= 0; --j) {
                    tuple[std::size_t(j)] = int(rem % std::size_t(alg.dim));
                    rem /= std::size_t(alg.dim);
                }
                std::vector<Element<CD>> args;
                for (int j = 0; j < n; ++j) {
                    const double s = std::ldexp(1.0, j == i ? 2 * mstar : mstar);
                    args.push_back(basis_element<CD>(alg.dim, tuple[std::size_t(j)], CD{s, 0.0}));
                }
                Element<CD> v = f2.eval(args);
                for (CD& z : v) z = {std::ldexp(z.re, -mstar * (n + 1)), std::ldexp(z.im, -mstar * (n + 1))};
                worst = std::max(worst, module_norm(sub(v, F.value_at(t))));
            }
        }
        const double bound = std::ldexp(1.0, -mstar * n) * 3.0 * (1.0 + 1.0 / n) * (1.0 + two_n) * alpha +
                             std::max(opt.tol, 4.0 * res.trace_f1.tail_bound());
        res.agreements.push_back({"f2-double-slot-limit", worst, bound, holds_leq(worst, bound)});
    }

    // Uniqueness, tested operationally: a restart of the iteration two scales
    // up converges to the same tensor.
    {
        HyersTrace restart = hyers_limit(alg, mod, detail::shifted_start(f1, 2), opt.m_max, opt.tol);
        double gap = multilinear_distance(alg, restart.final(), F);
        double bound = std::max(opt.tol, 4.0 * (res.trace_f1.tail_bound() + restart.tail_bound()));
        res.agreements.push_back({"restart-converges-to-same-limit", gap, bound, holds_leq(gap, bound)});
    }

    // Repaired tensor is a cocycle up to the iteration's remaining drift.
    {
        res.cocycle_residual = multilinear_norm(alg, coboundary(alg, mod, F));
        const double cdelta = 2.0 * action_norm_constant(alg, mod) + n;
        res.residual_cap = std::max(opt.tol, 4.0 * cdelta * res.trace_f1.tail_bound());
        res.residual_ok = holds_leq(res.cocycle_residual, res.residual_cap);
    }

    SamplePlan plan = opt.defect_plan;
    plan.seed = plan.seed == 0 ? opt.seed : plan.seed;
    res.alpha_report = d_defect(alg, mod, f1, f2, f3, opt.lambdas, plan);
    res.beta_report = cocycle_defect(alg, mod, f1, f2, f3,
                                     opt.span_set ? *opt.span_set : SpanningSet::basis(alg));

    if (opt.run_ledger)
        res.ledger = verify_intermediate_bounds(alg, mod, f1, f2, f3, res.trace_f1, alpha,
                                                opt.seed, opt.ledger_samples);
    return res;
}

// --------------------------------------------------------------------------
// Degree-1 repair against a prescribed commutator a x - x a.

inline RepairResult repair_derivation(const Algebra& alg, const Bimodule& mod,
                                      const PointwiseMap& f1, const PointwiseMap& f2,
                                      const PointwiseMap& f3, const Element<CD>& x,
                                      const RepairOptions& opt, double gamma_cap) {
    if (f1.degree != 1) throw std::invalid_argument("derivation repair needs degree 1");
    RepairResult res = repair_pexider_triple(alg, mod, f1, f2, f3, opt);

    Cochain<CD> x0 = Cochain<CD>::zero(0, alg.dim, mod.dim);
    x0.set_value(0, x);
    Cochain<CD> inner = coboundary(alg, mod, x0);

    res.gamma_cap_used = gamma_cap;
    double gamma_hat = 0;
    for (int s = 0; s < opt.distance_samples; ++s) {
        SplitMix64 rng(opt.seed ^ 0x6aULL, std::uint64_t(s));
        auto a = random_tuple(rng, 1, alg.dim);
        Element<CD> comm = sub(act_left(mod, a[0], x), act_right(mod, x, a[0]));
        gamma_hat = std::max(gamma_hat, module_norm(sub(comm, f1.eval(a))));
    }
    res.gamma_observed = gamma_hat;
    res.gamma_ok = holds_leq(gamma_hat, gamma_cap);

    res.inner_distance = multilinear_distance(alg, res.repaired, inner);
    res.inner_distance_cap = std::max(opt.tol, gamma_cap * std::ldexp(1.0, -res.trace_f1.m_used) +
                                                   4.0 * res.trace_f1.tail_bound());
    res.inner_ok = holds_leq(*res.inner_distance, res.inner_distance_cap);
    return res;
}

// --------------------------------------------------------------------------
// Functional-equation presets: wirings of one base map into a triple.

enum class RemarkEquation { i, ii, iii, iv };

inline RemarkEquation parse_remark_equation(const std::string& s) {
    if (s == "i") return RemarkEquation::i;
    if (s == "ii") return RemarkEquation::ii;
    if (s == "iii") return RemarkEquation::iii;
    if (s == "iv") return RemarkEquation::iv;
    throw std::invalid_argument("unknown preset equation tag: '" + s + "'");
}

struct PresetTriple {
    PointwiseMap f1, f2, f3;
    std::string equation;
};

inline PresetTriple remark_presets(RemarkEquation eq, const PointwiseMap& base, int mod_dim) {
    if (base.degree != 1) throw std::invalid_argument("presets need a degree-1 base map");
    const PointwiseMap zero = zero_map(1, mod_dim);
    switch (eq) {
        case RemarkEquation::i:
            return {base, base, base, "f(ab) = a f(b) + f(a) b, with additivity"};
        case RemarkEquation::ii:
            return {base, zero, base, "a f(b) + f(a) b = 0, with additivity"};
        case RemarkEquation::iii:
            return {base, base, zero, "f(ab) = a f(b), with additivity"};
        case RemarkEquation::iv:
            return {zero, base, base, "f(ab) = f(a) b, with additivity"};
    }
    throw std::logic_error("unreachable");
}

// --------------------------------------------------------------------------
// Approximate-coboundary repair: an n-triple whose split coboundary defect
// against a (n-1)-triple is small repairs to a pair (F, G) with dG = F.

inline RepairResult repair_to_coboundary(const Algebra& alg, const Bimodule& mod,
                                         const PointwiseMap& f1, const PointwiseMap& f2, const PointwiseMap& f3,
                                         const PointwiseMap& g1, const PointwiseMap& g2, const PointwiseMap& g3,
                                         const RepairOptions& opt, double gamma_cap,
                                         std::optional<double> eta_cap_value = std::nullopt) {
    const int n = f1.degree;
    if (n < 2) throw std::invalid_argument("coboundary repair needs degree >= 2");
    if (g1.degree != n - 1 || g2.degree != n - 1 || g3.degree != n - 1)
        throw std::invalid_argument("potential triple must have degree n-1");
    for (const PointwiseMap* g : {&g1, &g2, &g3})
        if (!g->vanishes_on_zero_slices || !spot_check_zero_slices(alg, *g, opt.seed))
            throw std::invalid_argument("potential triple member does not vanish on zero slices: " + g->descriptor);

    RepairResult res = repair_pexider_triple(alg, mod, f1, f2, f3, opt);

    res.trace_g1 = hyers_limit(alg, mod, g1, opt.m_max, opt.tol);
    res.trace_g2 = hyers_limit(alg, mod, g2, opt.m_max, opt.tol);
    res.trace_g3 = hyers_limit(alg, mod, g3, opt.m_max, opt.tol);
    res.potential = res.trace_g1.final();
    const Cochain<CD>& G = *res.potential;

    const double two_n = std::pow(2.0, n);
    res.g_bounds = {3.0 * two_n * gamma_cap, 3.0 * (1.0 + 1.0 / n) * two_n * gamma_cap, 6.0 * two_n * gamma_cap};
    res.g_distances = {detail::observed_distance(alg, g1, G, opt.seed + 3, opt.distance_samples),
                       detail::observed_distance(alg, g2, G, opt.seed + 4, opt.distance_samples),
                       detail::observed_distance(alg, g3, G, opt.seed + 5, opt.distance_samples)};
    for (int k = 0; k < 3; ++k)
        res.g_bounds_hold[std::size_t(k)] = holds_leq(res.g_distances[std::size_t(k)], res.g_bounds[std::size_t(k)]);

    // observed sup of the coboundary gap over the basis spanning set
    {
        MultiMap<CD> m1 = g1.as_multimap(), m2 = g2.as_multimap(), m3 = g3.as_multimap();
        double worst = 0;
        auto offer = [&](const std::vector<Element<CD>>& args) {
            Element<CD> lhs = pexider_coboundary<CD>(alg, mod, m1, m2, m3, args);
            worst = std::max(worst, module_norm(sub(lhs, f1.eval(args))));
        };
        detail::for_each_tuple(std::size_t(alg.dim), n, [&](const std::vector<std::size_t>& idx) {
            std::vector<Element<CD>> args;
            for (std::size_t k : idx) args.push_back(basis_element<CD>(alg.dim, int(k)));
            offer(args);
        });
        res.eta_observed = worst;
        res.eta_cap_used = eta_cap_value;
        res.eta_ok = !eta_cap_value || holds_leq(worst, *eta_cap_value);
    }

    res.coboundary_residual = multilinear_distance(alg, coboundary(alg, mod, G), res.repaired);
    const double cdelta = 2.0 * action_norm_constant(alg, mod) + (n - 1);
    res.coboundary_residual_cap = std::max(opt.tol, 4.0 * (cdelta * res.trace_g1.tail_bound() +
                                                           res.trace_f1.tail_bound()));
    res.coboundary_ok = holds_leq(res.coboundary_residual, res.coboundary_residual_cap);

    if (opt.run_ledger)
        res.g_ledger = verify_intermediate_bounds(alg, mod, g1, g2, g3, res.trace_g1, gamma_cap,
                                                  opt.seed + 7, opt.ledger_samples);
    return res;
}

} // namespace coholab
