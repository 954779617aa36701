// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Tolerances and runtime caps are fixed
// here, not configurable.

#include <coholab/report.hpp>

#include "oracle_elimination.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace coholab;

namespace {

struct Harness {
    int failures = 0;

    void criterion(int id, const std::string& name, double runtime_cap_s,
                   const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= runtime_cap_s) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("runtime cap exceeded");
        }
        std::printf("[%s] criterion %d: %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs,
                    detail.empty() ? "" : "; ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

struct GridEntry {
    std::string algebra_name;
    Algebra algebra;
    std::string module_name;
    Bimodule module;
};

std::vector<GridEntry> builtin_grid() {
    std::vector<GridEntry> grid;
    std::vector<std::pair<std::string, Algebra>> algebras;
    algebras.emplace_back("m2", build_matrix_algebra(2));
    algebras.emplace_back("dual-numbers", build_dual_numbers());
    algebras.emplace_back("t2", build_upper_triangular(2));
    for (auto& [name, alg] : algebras) {
        Bimodule reg = regular_bimodule(alg);
        grid.push_back({name, alg, "regular", reg});
        grid.push_back({name, alg, "dual", build_dual_module(reg)});
        grid.push_back({name, alg, "zero", zero_bimodule(alg)});
    }
    return grid;
}

oracle::DenseQ to_oracle(const MatQ& m) {
    oracle::DenseQ o(m.rows, m.cols);
    o.a = m.a;
    return o;
}

Cochain<CQ> planted_cocycle(const Algebra& alg, const Bimodule& mod, int n, std::uint64_t seed) {
    return random_cocycle(alg, mod, n, cocycle_space(alg, mod, n), seed);
}

struct PlantedRun {
    Cochain<CQ> truth;
    RepairResult result;
};

PlantedRun planted_repair(const Algebra& alg, const Bimodule& mod, int n, double eps,
                          std::uint64_t seed, int ledger_samples) {
    PlantedRun run;
    run.truth = planted_cocycle(alg, mod, n, seed);
    PointwiseMap base = map_from_cochain(run.truth);
    PointwiseMap f1 = map_sum(base, perturbation_family(alg, mod, n, PerturbationKind::oscillatory, eps, seed + 1));
    PointwiseMap f2 = map_sum(base, perturbation_family(alg, mod, n, PerturbationKind::bounded_smooth, eps, seed + 2));
    PointwiseMap f3 = map_sum(base, perturbation_family(alg, mod, n, PerturbationKind::coordinate_clip, eps, seed + 3));
    RepairOptions opt;
    opt.seed = seed;
    opt.alpha_cap = alpha_cap(n, eps, eps, eps);
    opt.ledger_samples = ledger_samples;
    opt.defect_plan = {512, seed};
    run.result = repair_pexider_triple(alg, mod, f1, f2, f3, opt);
    return run;
}

} // namespace

int main() {
    Harness h;

    // Shared state between criteria 3 and 4 (one grid of repair runs).
    std::vector<BoundLedger> ledgers;

    h.criterion(1, "complex property: consecutive coboundaries compose to zero, n = 0..3, full builtin grid",
                10.0, [&](std::string& detail) {
        bool ok = true;
        for (const GridEntry& g : builtin_grid()) {
            if (std::size_t(g.algebra.dim) * std::size_t(g.module.dim) > 36) continue;
            for (int n = 0; n <= 3; ++n) {
                SparseQ upper = linearize_coboundary(g.algebra, g.module, n + 1);
                SparseQ lower = linearize_coboundary(g.algebra, g.module, n);
                if (!multiply(upper, lower).is_zero()) {
                    ok = false;
                    detail = g.algebra_name + "/" + g.module_name + " at n = " + std::to_string(n);
                }
            }
        }
        return ok;
    });

    h.criterion(2, "cohomology dimensions match the independent elimination oracle; pinned values hold",
                30.0, [&](std::string& detail) {
        bool ok = true;
        for (const GridEntry& g : builtin_grid())
            for (int n = 0; n <= 2; ++n) {
                MatQ dn = linearize_coboundary(g.algebra, g.module, n).dense();
                int z = int(power(g.algebra.dim, n)) * g.module.dim - oracle::oracle_rank(to_oracle(dn));
                int b = n == 0 ? 0 : oracle::oracle_rank(
                                         to_oracle(linearize_coboundary(g.algebra, g.module, n - 1).dense()));
                if (cohomology_dim(g.algebra, g.module, n) != z - b) {
                    ok = false;
                    detail = "oracle mismatch at " + g.algebra_name + "/" + g.module_name + " n=" + std::to_string(n);
                }
            }
        Algebra m2 = build_matrix_algebra(2);
        Bimodule m2reg = regular_bimodule(m2);
        Algebra dn = build_dual_numbers();
        Bimodule dnreg = regular_bimodule(dn);
        if (cohomology_dim(m2, m2reg, 0) != 1) { ok = false; detail = "H^0(m2) != 1"; }
        if (cohomology_dim(m2, m2reg, 1) != 0) { ok = false; detail = "H^1(m2) != 0"; }
        if (cohomology_dim(dn, dnreg, 1) != 1) { ok = false; detail = "H^1(dual-numbers) != 1"; }
        return ok;
    });

    h.criterion(3, "planted repair: 20 seeds x eps {1e-1,1e-2,1e-3} x n {1,2} on m2 regular, "
                   "recovery <= 1e-9, distance bounds, geometric decay",
                120.0, [&](std::string& detail) {
        Algebra m2 = build_matrix_algebra(2);
        Bimodule reg = regular_bimodule(m2);
        bool ok = true;
        for (int n = 1; n <= 2 && ok; ++n)
            for (double eps : {1e-1, 1e-2, 1e-3})
                for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                    PlantedRun run = planted_repair(m2, reg, n, eps, seed * 1000 + std::uint64_t(n), 512);
                    const RepairResult& r = run.result;
                    ledgers.push_back(r.ledger);
                    double err = multilinear_distance(m2, r.repaired, cochain_to_double(run.truth));
                    bool this_ok = err <= 1e-9 && r.bounds_hold[0] && r.bounds_hold[1] && r.bounds_hold[2] &&
                                   r.trace_f1.decay_ok(0.01, 2);
                    if (!this_ok) {
                        ok = false;
                        detail = "n=" + std::to_string(n) + " eps=" + std::to_string(eps) +
                                 " seed=" + std::to_string(seed) + " err=" + std::to_string(err);
                        break;
                    }
                }
        return ok;
    });

    h.criterion(4, "inequality ledger: every line holds at 512 sampled tuples across the repair grid",
                30.0, [&](std::string& detail) {
        bool ok = !ledgers.empty();
        if (!ok) detail = "no ledgers collected";
        for (const BoundLedger& l : ledgers)
            for (const BoundRecord& r : l.records)
                if (!r.holds) {
                    ok = false;
                    detail = "violated: " + r.id;
                }
        return ok;
    });

    h.criterion(5, "inner-derivation recovery: 20 seeds on m2, distance <= 1e-9, bounds 6a/12a/12a",
                30.0, [&](std::string& detail) {
        Algebra m2 = build_matrix_algebra(2);
        Bimodule reg = regular_bimodule(m2);
        const double eps = 1e-3;
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 20 && ok; ++seed) {
            SplitMix64 rng(seed, 0x1157ULL);
            Element<CD> x = random_element(rng, reg.dim);
            Cochain<CD> x0 = Cochain<CD>::zero(0, m2.dim, reg.dim);
            x0.set_value(0, x);
            Cochain<CD> inner = coboundary(m2, reg, x0);
            PointwiseMap base = map_from_cochain(inner);
            PointwiseMap f1 = map_sum(base, perturbation_family(m2, reg, 1, PerturbationKind::oscillatory, eps, seed + 1));
            PointwiseMap f2 = map_sum(base, perturbation_family(m2, reg, 1, PerturbationKind::bounded_smooth, eps, seed + 2));
            PointwiseMap f3 = map_sum(base, perturbation_family(m2, reg, 1, PerturbationKind::coordinate_clip, eps, seed + 3));
            RepairOptions opt;
            opt.seed = seed;
            opt.alpha_cap = alpha_cap(1, eps, eps, eps);
            opt.ledger_samples = 128;
            RepairResult r = repair_derivation(m2, reg, f1, f2, f3, x, opt, eps);
            const double a = opt.alpha_cap;
            bool bounds_as_stated = std::abs(r.bounds[0] - 6 * a) < 1e-15 &&
                                    std::abs(r.bounds[1] - 12 * a) < 1e-15 &&
                                    std::abs(r.bounds[2] - 12 * a) < 1e-15;
            if (!(r.inner_distance && *r.inner_distance <= 1e-9 && bounds_as_stated &&
                  r.bounds_hold[0] && r.bounds_hold[1] && r.bounds_hold[2])) {
                ok = false;
                detail = "seed " + std::to_string(seed);
            }
        }
        return ok;
    });

    h.criterion(6, "coboundary pair repair: planted potential on m2 at n = 2, 10 seeds, ||dG - F|| <= 1e-9",
                60.0, [&](std::string& detail) {
        Algebra m2 = build_matrix_algebra(2);
        Bimodule reg = regular_bimodule(m2);
        const int n = 2;
        const double eps = 1e-2, gamma = 1e-2;
        bool ok = true;
        for (std::uint64_t seed = 1; seed <= 10 && ok; ++seed) {
            Cochain<CQ> g_true = Cochain<CQ>::zero(n - 1, m2.dim, reg.dim);
            SplitMix64 rng(seed, 0x6bULL);
            for (CQ& v : g_true.values) v = CQ(Rational(long(rng.next_below(9)) - 4, 2));
            Cochain<CQ> f_true = coboundary(m2, reg, g_true);
            PointwiseMap gb = map_from_cochain(g_true), fb = map_from_cochain(f_true);
            auto pert = [&](const PointwiseMap& b, int deg, double e, std::uint64_t s) {
                return map_sum(b, perturbation_family(m2, reg, deg, PerturbationKind::oscillatory, e, seed * 100 + s));
            };
            RepairOptions opt;
            opt.seed = seed;
            opt.alpha_cap = alpha_cap(n, eps, eps, eps);
            opt.ledger_samples = 64;
            RepairResult r = repair_to_coboundary(m2, reg,
                                                  pert(fb, n, eps, 1), pert(fb, n, eps, 2), pert(fb, n, eps, 3),
                                                  pert(gb, n - 1, gamma, 4), pert(gb, n - 1, gamma, 5),
                                                  pert(gb, n - 1, gamma, 6),
                                                  opt, alpha_cap(n - 1, gamma, gamma, gamma),
                                                  eta_cap(m2, reg, n, gamma, gamma, gamma, eps));
            if (!(r.coboundary_residual <= 1e-9 && r.eta_ok && r.all_hold())) {
                ok = false;
                detail = "seed " + std::to_string(seed) +
                         " residual=" + std::to_string(r.coboundary_residual);
            }
        }
        return ok;
    });

    h.criterion(7, "vanishing equivalence across the grid at n = 1,2; forward bound; dual-numbers witness",
                120.0, [&](std::string& detail) {
        bool ok = true;
        TrialPlan plan;
        plan.trials = 5;
        plan.eps = {1e-2};
        plan.seed = 2718;
        for (const GridEntry& g : builtin_grid())
            for (int n = 1; n <= 2; ++n) {
                VanishingVerdict v = verify_vanishing_equivalence(g.algebra, g.module, n, plan);
                if (v.approx_vanishes != (v.exact_dim == 0)) {
                    ok = false;
                    detail = "equivalence broken at " + g.algebra_name + "/" + g.module_name +
                             " n=" + std::to_string(n);
                }
                for (const VanishingTrial& t : v.trials)
                    if (!t.holds) {
                        ok = false;
                        detail = "forward bound violated at " + g.algebra_name + "/" + g.module_name;
                    }
            }
        // pinned witness value: B^1 of dual numbers is zero, so the distance
        // equals the witness's own norm
        Algebra dn = build_dual_numbers();
        Bimodule dnreg = regular_bimodule(dn);
        VanishingVerdict v = verify_vanishing_equivalence(dn, dnreg, 1, plan);
        if (!v.witness) {
            ok = false;
            detail = "dual-numbers witness missing";
        } else {
            double expect = multilinear_norm(dn, v.witness->cocycle);
            if (std::abs(v.witness->b_distance - expect) > 1e-12) {
                ok = false;
                detail = "witness distance " + std::to_string(v.witness->b_distance) + " != norm " +
                         std::to_string(expect);
            }
        }
        return ok;
    });

    h.criterion(8, "negative control: defect under scalar balls of radius 1..16 grows monotonically by > 4x",
                30.0, [&](std::string& detail) {
        Algebra m2 = build_matrix_algebra(2);
        Bimodule reg = regular_bimodule(m2);
        const double eps = 1e-2;
        Cochain<CQ> truth = planted_cocycle(m2, reg, 1, 99);
        PointwiseMap f = map_sum(map_from_cochain(truth),
                                 perturbation_family(m2, reg, 1, PerturbationKind::oscillatory, eps, 12));
        double first = 0, prev = -1;
        bool ok = true;
        for (double radius : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            DefectReport r = d_defect(m2, reg, f, f, f, LambdaSet::complex_ball(256, radius), {1024, 33});
            if (prev >= 0 && r.sup_observed <= prev) {
                ok = false;
                detail = "not monotone at radius " + std::to_string(radius);
            }
            if (first == 0) first = r.sup_observed;
            prev = r.sup_observed;
        }
        if (ok && prev <= 4.0 * first) {
            ok = false;
            detail = "total growth " + std::to_string(prev / first) + "x <= 4x";
        }
        return ok;
    });

    h.criterion(9, "determinism: identical seeds give byte-identical reports apart from timing",
                60.0, [&](std::string& detail) {
        bool ok = true;
        for (const char* task : {"cohomology", "repair", "derivation", "coboundary-repair", "vanishing", "probe"}) {
            ExperimentConfig c;
            c.task = task;
            c.builtin = "m2";
            c.n = std::string(task) == "coboundary-repair" ? 2 : 1;
            c.eps = {1e-2};
            c.trials = 2;
            c.seed = 424242;
            StabilityReport a = run(c);
            StabilityReport b = run(c);
            if (a.deterministic_dump() != b.deterministic_dump()) {
                ok = false;
                detail = std::string("report differs for task ") + task;
            }
        }
        return ok;
    });

    if (h.failures == 0) {
        std::printf("acceptance: all 9 criteria hold\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", h.failures);
    return 1;
}
