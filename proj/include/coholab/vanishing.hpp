#pragma once

// End-to-end vanishing experiments: exact H^n dimensions versus the
// approximate route (perturb a cocycle, repair it, project onto the
// coboundary space, check the explicit distance bound), plus probes over
// finite bimodule families.

#include <coholab/hyers.hpp>

#include <Eigen/Dense>

namespace coholab {

struct NearestCoboundary {
    Cochain<CD> potential;     // G minimizing the Euclidean surrogate
    double distance = 0;       // true multilinear norm of dG - F at the minimizer
    double euclidean_residual = 0;
    double surrogate_gap = 0;  // distance - euclidean_residual
};

// Least-squares projection of F onto im d_{n-1} in flattened coordinates
// (minimum-norm solution on rank-deficient systems), re-measured with the
// declared multilinear norm. For n = 1 the search space is exactly the inner
// derivations a -> a x - x a.
inline NearestCoboundary nearest_coboundary(const Algebra& alg, const Bimodule& mod, const Cochain<CD>& F) {
    if (F.degree < 1) throw std::invalid_argument("nearest_coboundary needs degree >= 1");
    const int n = F.degree;
    SparseQ op = linearize_coboundary(alg, mod, n - 1);

    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(op.rows, op.cols);
    for (int c = 0; c < op.cols; ++c)
        for (const auto& [r, v] : op.col[std::size_t(c)]) {
            CD z = to_double(v);
            B(r, c) = std::complex<double>(z.re, z.im);
        }
    Eigen::VectorXcd b(op.rows);
    for (int r = 0; r < op.rows; ++r) b(r) = std::complex<double>(F.values[std::size_t(r)].re, F.values[std::size_t(r)].im);

    Eigen::VectorXcd g;
    if (op.cols == 0) {
        g = Eigen::VectorXcd::Zero(0);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(B);
        g = cod.solve(b);
    }

    NearestCoboundary out;
    out.potential = Cochain<CD>::zero(n - 1, alg.dim, mod.dim);
    for (int c = 0; c < op.cols; ++c) out.potential.values[std::size_t(c)] = {g(c).real(), g(c).imag()};
    out.distance = multilinear_distance(alg, coboundary(alg, mod, out.potential), F);
    out.euclidean_residual = op.cols == 0 ? b.norm() : (B * g - b).norm();
    out.surrogate_gap = out.distance - out.euclidean_residual;
    return out;
}

// Exact membership F in B^n, by rational elimination.
inline bool in_coboundary_space(const Algebra& alg, const Bimodule& mod, const Cochain<CQ>& F) {
    if (F.degree < 1) throw std::invalid_argument("membership needs degree >= 1");
    MatQ B = linearize_coboundary(alg, mod, F.degree - 1).dense();
    return in_column_space(B, F.values);
}

// Seeded rational combination of an exact cocycle basis, scaled by a power of
// two into a unit-size window so exactness survives the normalization.
inline Cochain<CQ> random_cocycle(const Algebra& alg, const Bimodule& mod, int n,
                                  const std::vector<Cochain<CQ>>& basis, std::uint64_t seed) {
    Cochain<CQ> f = Cochain<CQ>::zero(n, alg.dim, mod.dim);
    if (basis.empty()) return f;
    SplitMix64 rng(seed, 0xc0cULL);
    bool nonzero = false;
    for (const auto& z : basis) {
        long c = long(rng.next_below(7)) - 3; // integer in [-3, 3]
        if (c == 0) continue;
        nonzero = true;
        f = add(f, scaled(z, CQ(Rational(c))));
    }
    if (!nonzero) f = basis[rng.next_below(basis.size())];
    double norm = multilinear_norm(alg, f);
    int k = int(std::lround(std::floor(std::log2(norm))));
    Rational s = 1;
    for (int i = 0; i < std::abs(k); ++i) s *= 2;
    f = scaled(f, CQ(k > 0 ? Rational(1) / s : s));
    return f;
}

struct VanishingTrial {
    std::uint64_t seed = 0;
    double eps = 0;
    double alpha_cap = 0;
    double repair_distance = 0; // observed sup || dG - f ||
    double bound = 0;           // 3 * 2^n * alpha_cap
    bool holds = true;
};

struct ObstructionWitness {
    Cochain<CQ> cocycle;
    double b_distance = 0;
};

struct VanishingVerdict {
    int n = 0;
    int exact_dim = 0;
    bool approx_vanishes = false;
    std::vector<VanishingTrial> trials;
    std::optional<ObstructionWitness> witness;
};

struct TrialPlan {
    int trials = 8;
    std::vector<double> eps{1e-2};
    std::uint64_t seed = 0;
    int m_max = 30;
    double tol = 1e-12;
    PerturbationKind kind = PerturbationKind::oscillatory;
    int distance_samples = 128;
    double witness_floor = 1e-8;
};

inline VanishingVerdict verify_vanishing_equivalence(const Algebra& alg, const Bimodule& mod,
                                                     int n, const TrialPlan& plan) {
    if (n < 1) throw std::invalid_argument("vanishing experiments need degree >= 1");
    VanishingVerdict verdict;
    verdict.n = n;
    CohomologyRanks ranks = cohomology_ranks(alg, mod, n);
    verdict.exact_dim = ranks.cohomology_dim;
    std::vector<Cochain<CQ>> zbasis = cocycle_space(alg, mod, n);

    if (verdict.exact_dim == 0) {
        bool all_hold = true;
        int t = 0;
        for (int trial = 0; trial < plan.trials; ++trial) {
            for (double eps : plan.eps) {
                std::uint64_t seed = SplitMix64::mix(plan.seed + 0x7a11ULL * std::uint64_t(++t));
                Cochain<CQ> f_true = random_cocycle(alg, mod, n, zbasis, seed);
                if (!in_coboundary_space(alg, mod, f_true))
                    throw std::logic_error("exact solve inconsistent: H^n = 0 but a cocycle escapes B^n");

                PointwiseMap f = map_sum(map_from_cochain(f_true, "planted cocycle"),
                                         perturbation_family(alg, mod, n, plan.kind, eps, seed));
                HyersTrace trace = hyers_limit(alg, mod, f, plan.m_max, plan.tol);
                NearestCoboundary nc = nearest_coboundary(alg, mod, trace.final());
                Cochain<CD> dg = coboundary(alg, mod, nc.potential);

                VanishingTrial rec;
                rec.seed = seed;
                rec.eps = eps;
                rec.alpha_cap = alpha_cap(n, eps, eps, eps);
                rec.bound = 3.0 * std::pow(2.0, n) * rec.alpha_cap;
                rec.repair_distance = detail::observed_distance(alg, f, dg, seed, plan.distance_samples);
                rec.holds = holds_leq(rec.repair_distance, rec.bound);
                all_hold = all_hold && rec.holds;
                verdict.trials.push_back(std::move(rec));
            }
        }
        verdict.approx_vanishes = all_hold;
    } else {
        // exhibit the cocycle farthest from the coboundary space
        double best = -1;
        std::optional<Cochain<CQ>> best_z;
        for (const auto& z : zbasis) {
            if (in_coboundary_space(alg, mod, z)) continue;
            double dist = nearest_coboundary(alg, mod, cochain_to_double(z)).distance;
            if (dist > best) { best = dist; best_z = z; }
        }
        if (!best_z)
            throw std::logic_error("exact solve inconsistent: H^n > 0 but every basis cocycle is a coboundary");
        verdict.witness = ObstructionWitness{*best_z, best};
        verdict.approx_vanishes = best <= plan.witness_floor * std::max(1.0, multilinear_norm(alg, *best_z));
    }
    return verdict;
}

// --------------------------------------------------------------------------
// Probes over finite bimodule families (witnesses, not proofs).

struct ProbeRow {
    std::string module_name;
    int exact_dim = 0;
    bool approx_vanishes = false;
    double witness_distance = 0; // 0 when vanishing
};

struct ProbeVerdict {
    std::vector<ProbeRow> rows;
    bool all_pass = true;
    std::string note;
};

inline ProbeVerdict contractibility_probe(const Algebra& alg,
                                          const std::vector<std::pair<std::string, Bimodule>>& modules,
                                          const TrialPlan& plan) {
    ProbeVerdict out;
    out.note = "finite module family: a passing probe witnesses the property, a failing row refutes it";
    for (const auto& [name, mod] : modules) {
        VanishingVerdict v = verify_vanishing_equivalence(alg, mod, 1, plan);
        out.rows.push_back({name, v.exact_dim, v.approx_vanishes,
                            v.witness ? v.witness->b_distance : 0.0});
        out.all_pass = out.all_pass && v.exact_dim == 0 && v.approx_vanishes;
    }
    return out;
}

inline ProbeVerdict amenability_probe(const Algebra& alg,
                                      const std::vector<std::pair<std::string, Bimodule>>& modules,
                                      const TrialPlan& plan) {
    std::vector<std::pair<std::string, Bimodule>> duals;
    duals.reserve(modules.size());
    for (const auto& [name, mod] : modules) duals.emplace_back(name + "*", build_dual_module(mod));
    ProbeVerdict out = contractibility_probe(alg, duals, plan);
    return out;
}

} // namespace coholab
