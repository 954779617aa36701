#pragma once

// Experiment configuration, task dispatch and report assembly. A report is a
// single JSON document; every verdict in it can be recomputed from the
// recorded config and seed. Floating values are serialized with round-trip
// precision; exact rationals as "p/q" strings; the only nondeterministic
// field is "timing".

#include <coholab/io.hpp>
#include <coholab/vanishing.hpp>

#include <chrono>
#include <map>
#include <sstream>

namespace coholab {

constexpr const char* kReportSchema = "coholab-report/1";

struct ExperimentConfig {
    std::string task;                 // cohomology|repair|derivation|coboundary-repair|vanishing|probe
    std::string builtin;              // builtin algebra name, or empty
    std::string algebra_path;         // algebra file, or empty
    std::string module = "regular";   // regular|dual|zero|file
    int n = 1;
    std::vector<double> eps{1e-2};
    std::string perturb = "oscillatory";
    std::string lambda_set = "tcircle:64";
    std::string span = "basis";       // basis | indices:i,j,...
    int m_max = 30;
    double tol = 1e-12;
    std::optional<std::uint64_t> seed;
    int trials = 8;
    std::string format = "json";      // json|table
    bool strict = false;
    std::string out_path;

    std::uint64_t seed_or(std::uint64_t fallback = 0) const { return seed ? *seed : fallback; }
};

inline const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks{"cohomology", "repair", "derivation",
                                                "coboundary-repair", "vanishing", "probe"};
    return tasks;
}

inline void validate_config(const ExperimentConfig& c) {
    bool known = false;
    for (const auto& t : known_tasks()) known = known || t == c.task;
    if (!known) throw std::invalid_argument("unknown task: '" + c.task + "'");
    if (!(c.tol > 0)) throw std::invalid_argument("tol must be positive");
    if (c.m_max < 1) throw std::invalid_argument("m-max must be >= 1");
    if (c.n < 0) throw std::invalid_argument("n must be nonnegative");
    if (c.builtin.empty() && c.algebra_path.empty())
        throw std::invalid_argument("an algebra is required (--builtin NAME or --algebra PATH)");
    if (!c.builtin.empty() && !c.algebra_path.empty())
        throw std::invalid_argument("give either --builtin or --algebra, not both");
    if (c.task != "cohomology" && !c.seed)
        throw std::invalid_argument("stochastic task '" + c.task + "' requires --seed");
    for (double e : c.eps)
        if (e < 0) throw std::invalid_argument("eps values must be nonnegative");
    if (c.task == "coboundary-repair" && c.n < 2)
        throw std::invalid_argument("coboundary-repair needs n >= 2");
    if ((c.task == "repair" || c.task == "derivation" || c.task == "vanishing") && c.n < 1)
        throw std::invalid_argument("task '" + c.task + "' needs n >= 1");
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j[key].template get<std::decay_t<decltype(slot)>>();
    };
    get("task", c.task);
    get("builtin", c.builtin);
    get("algebra", c.algebra_path);
    get("module", c.module);
    get("n", c.n);
    get("eps", c.eps);
    get("perturb", c.perturb);
    get("lambda_set", c.lambda_set);
    get("span", c.span);
    get("m_max", c.m_max);
    get("tol", c.tol);
    get("trials", c.trials);
    get("format", c.format);
    get("strict", c.strict);
    get("out", c.out_path);
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    return c;
}

inline json config_to_json(const ExperimentConfig& c) {
    json j;
    j["task"] = c.task;
    if (!c.builtin.empty()) j["builtin"] = c.builtin;
    if (!c.algebra_path.empty()) j["algebra"] = c.algebra_path;
    j["module"] = c.module;
    j["n"] = c.n;
    j["eps"] = c.eps;
    j["perturb"] = c.perturb;
    j["lambda_set"] = c.lambda_set;
    j["span"] = c.span;
    j["m_max"] = c.m_max;
    j["tol"] = c.tol;
    if (c.seed) j["seed"] = *c.seed;
    j["trials"] = c.trials;
    return j;
}

// --------------------------------------------------------------------------
// Resolution of config references.

inline Algebra resolve_builtin(const std::string& name) {
    auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
    if (name == "m2") return build_matrix_algebra(2);
    if (name == "m3") return build_matrix_algebra(3);
    if (name == "dual-numbers" || name == "dual") return build_dual_numbers();
    if (name == "t2") return build_upper_triangular(2);
    if (name == "t3") return build_upper_triangular(3);
    if (starts("matrix:")) return build_matrix_algebra(std::stoi(name.substr(7)));
    if (starts("upper:")) return build_upper_triangular(std::stoi(name.substr(6)));
    if (starts("direct-sum:")) {
        std::string rest = name.substr(11);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("direct-sum needs two components");
        return build_direct_sum(resolve_builtin(rest.substr(0, colon)), resolve_builtin(rest.substr(colon + 1)));
    }
    throw std::invalid_argument("unknown builtin algebra: '" + name + "'");
}

struct ResolvedSpaces {
    Algebra algebra;
    Bimodule module;
    std::string algebra_name;
    std::string module_name;
};

inline ResolvedSpaces resolve_spaces(const ExperimentConfig& c) {
    ResolvedSpaces r;
    std::optional<Bimodule> file_mod;
    if (!c.builtin.empty()) {
        r.algebra = resolve_builtin(c.builtin);
        r.algebra_name = c.builtin;
    } else {
        ParsedAlgebra p = parse_algebra_file(c.algebra_path);
        r.algebra = std::move(p.algebra);
        file_mod = std::move(p.bimodule);
        r.algebra_name = c.algebra_path;
    }
    r.module_name = c.module;
    if (c.module == "regular") r.module = regular_bimodule(r.algebra);
    else if (c.module == "dual") r.module = build_dual_module(regular_bimodule(r.algebra));
    else if (c.module == "zero") r.module = zero_bimodule(r.algebra);
    else if (c.module == "file") {
        if (!file_mod) throw std::invalid_argument("--module file requires a bimodule block in the algebra file");
        r.module = std::move(*file_mod);
    } else {
        throw std::invalid_argument("unknown module: '" + c.module + "' (regular|dual|zero|file)");
    }
    return r;
}

inline LambdaSet parse_lambda_set(const std::string& s) {
    auto starts = [&](const char* p) { return s.rfind(p, 0) == 0; };
    if (s == "one") return LambdaSet::one();
    if (s == "one-i") return LambdaSet::one_and_i();
    if (starts("tcircle:")) return LambdaSet::unit_circle(std::stoi(s.substr(8)));
    if (starts("ball:")) {
        std::string rest = s.substr(5);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("ball set needs COUNT:RADIUS");
        return LambdaSet::complex_ball(std::stoi(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)));
    }
    throw std::invalid_argument("unknown lambda set: '" + s + "' (tcircle:COUNT|one-i|ball:COUNT:RADIUS|one)");
}

inline SpanningSet parse_spanning_set(const std::string& s, const Algebra& alg) {
    if (s == "basis") return SpanningSet::basis(alg);
    if (s.rfind("indices:", 0) == 0) {
        std::vector<int> idx;
        std::stringstream ss(s.substr(8));
        std::string tok;
        while (std::getline(ss, tok, ',')) idx.push_back(std::stoi(tok));
        SpanningSet set = SpanningSet::from_basis_indices(alg, idx);
        if (!set.spans(alg)) throw std::invalid_argument("spanning set does not span the algebra");
        return set;
    }
    throw std::invalid_argument("unknown spanning set option: '" + s + "' (basis|indices:i,j,...)");
}

// --------------------------------------------------------------------------
// JSON serialization of result structures.

inline json witness_to_json(const DefectWitness& w) {
    auto elems = [](const std::vector<Element<CD>>& tuple) {
        json out = json::array();
        for (const auto& e : tuple) {
            json v = json::array();
            for (const CD& z : e) v.push_back(json::array({z.re, z.im}));
            out.push_back(std::move(v));
        }
        return out;
    };
    json j;
    j["sample_index"] = w.sample_index;
    if (!w.a_tuple.empty()) j["a"] = elems(w.a_tuple);
    if (!w.b_tuple.empty()) j["b"] = elems(w.b_tuple);
    if (!w.lambdas.empty()) {
        json l = json::array();
        for (const CD& z : w.lambdas) l.push_back(json::array({z.re, z.im}));
        j["lambda"] = std::move(l);
    }
    return j;
}

inline json defect_to_json(const DefectReport& r) {
    json j;
    j["sup_observed"] = r.sup_observed;
    j["samples"] = r.samples;
    if (r.exact_zero) j["exact_zero"] = true;
    j["witness"] = witness_to_json(r.witness);
    return j;
}

inline json trace_to_json(const HyersTrace& t) {
    json j;
    j["degree"] = t.degree;
    j["m_used"] = t.m_used;
    j["stop_reason"] = t.stop_reason == HyersTrace::Stop::tol ? "tol" : "m_max";
    j["tol_met"] = t.tol_met;
    j["deltas"] = t.deltas;
    j["tail_bound"] = t.tail_bound();
    j["geometric_decay_ok"] = t.decay_ok();
    return j;
}

inline json ledger_to_json(const BoundLedger& l) {
    json arr = json::array();
    for (const auto& r : l.records) {
        json j;
        j["id"] = r.id;
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        j["holds"] = r.holds;
        j["witness_sample"] = r.witness_sample;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline json cochain_to_json(const Cochain<CQ>& f) {
    json vals = json::array();
    for (const CQ& v : f.values) vals.push_back(cq_to_entry(v));
    json j;
    j["degree"] = f.degree;
    j["values"] = std::move(vals);
    return j;
}

inline json repair_to_json(const RepairResult& r) {
    json j;
    j["degree"] = r.degree;
    j["alpha_cap"] = r.alpha_cap_used;
    j["alpha_observed"] = defect_to_json(r.alpha_report);
    j["beta_observed"] = defect_to_json(r.beta_report);
    j["trace_f1"] = trace_to_json(r.trace_f1);
    j["trace_f2"] = trace_to_json(r.trace_f2);
    j["trace_f3"] = trace_to_json(r.trace_f3);
    static const char* names[3] = {"f1-distance 3*2^n*alpha", "f2-distance 3*(1+1/n)*2^n*alpha",
                                   "f3-distance 6*2^n*alpha"};
    json bounds = json::array();
    for (int k = 0; k < 3; ++k) {
        json b;
        b["id"] = names[k];
        b["observed"] = r.distances[std::size_t(k)];
        b["bound"] = r.bounds[std::size_t(k)];
        b["holds"] = r.bounds_hold[std::size_t(k)];
        bounds.push_back(std::move(b));
    }
    j["distance_bounds"] = std::move(bounds);
    json agr = json::array();
    for (const auto& a : r.agreements) {
        json b;
        b["id"] = a.id;
        b["gap"] = a.gap;
        b["bound"] = a.bound;
        b["holds"] = a.holds;
        agr.push_back(std::move(b));
    }
    j["agreements"] = std::move(agr);
    j["cocycle_residual"] = r.cocycle_residual;
    j["cocycle_residual_cap"] = r.residual_cap;
    j["cocycle_residual_ok"] = r.residual_ok;
    j["ledger"] = ledger_to_json(r.ledger);

    if (r.potential) {
        j["eta_observed"] = r.eta_observed;
        if (r.eta_cap_used) j["eta_cap"] = *r.eta_cap_used;
        j["eta_ok"] = r.eta_ok;
        j["trace_g1"] = trace_to_json(r.trace_g1);
        static const char* gnames[3] = {"g1-distance 3*2^n*gamma", "g2-distance 3*(1+1/n)*2^n*gamma",
                                        "g3-distance 6*2^n*gamma"};
        json gb = json::array();
        for (int k = 0; k < 3; ++k) {
            json b;
            b["id"] = gnames[k];
            b["observed"] = r.g_distances[std::size_t(k)];
            b["bound"] = r.g_bounds[std::size_t(k)];
            b["holds"] = r.g_bounds_hold[std::size_t(k)];
            gb.push_back(std::move(b));
        }
        j["potential_distance_bounds"] = std::move(gb);
        j["coboundary_residual"] = r.coboundary_residual;
        j["coboundary_residual_cap"] = r.coboundary_residual_cap;
        j["coboundary_residual_ok"] = r.coboundary_ok;
        j["potential_ledger"] = ledger_to_json(r.g_ledger);
    }
    if (r.inner_distance) {
        j["gamma_observed"] = r.gamma_observed;
        if (r.gamma_cap_used) j["gamma_cap"] = *r.gamma_cap_used;
        j["gamma_ok"] = r.gamma_ok;
        j["inner_distance"] = *r.inner_distance;
        j["inner_distance_cap"] = r.inner_distance_cap;
        j["inner_distance_ok"] = r.inner_ok;
    }
    j["all_hold"] = r.all_hold();
    return j;
}

inline json vanishing_to_json(const VanishingVerdict& v) {
    json j;
    j["n"] = v.n;
    j["exact_dim"] = v.exact_dim;
    j["approx_vanishes"] = v.approx_vanishes;
    json trials = json::array();
    for (const auto& t : v.trials) {
        json r;
        r["seed"] = t.seed;
        r["eps"] = t.eps;
        r["alpha_cap"] = t.alpha_cap;
        r["repair_distance"] = t.repair_distance;
        r["bound 3*2^n*alpha"] = t.bound;
        r["holds"] = t.holds;
        trials.push_back(std::move(r));
    }
    j["trials"] = std::move(trials);
    if (v.witness) {
        json w;
        w["b_distance"] = v.witness->b_distance;
        w["cocycle"] = cochain_to_json(v.witness->cocycle);
        j["obstruction_witness"] = std::move(w);
    }
    return j;
}

inline json probe_to_json(const ProbeVerdict& p) {
    json j;
    json rows = json::array();
    for (const auto& r : p.rows) {
        json row;
        row["module"] = r.module_name;
        row["exact_dim"] = r.exact_dim;
        row["approx_vanishes"] = r.approx_vanishes;
        row["witness_distance"] = r.witness_distance;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["all_pass"] = p.all_pass;
    j["note"] = p.note;
    return j;
}

// --------------------------------------------------------------------------
// Planted-instance construction shared by the repair-style tasks.

struct PlantedTriple {
    Cochain<CQ> truth;
    PointwiseMap f1, f2, f3;
    double alpha_cap_value = 0;
};

inline PlantedTriple plant_cocycle_triple(const Algebra& alg, const Bimodule& mod, int n,
                                          double eps, PerturbationKind kind, std::uint64_t seed,
                                          double lambda_max = 1.0) {
    PlantedTriple p;
    auto zbasis = cocycle_space(alg, mod, n);
    p.truth = random_cocycle(alg, mod, n, zbasis, seed);
    PointwiseMap base = map_from_cochain(p.truth, "planted cocycle");
    p.f1 = map_sum(base, perturbation_family(alg, mod, n, kind, eps, seed + 1));
    p.f2 = map_sum(base, perturbation_family(alg, mod, n, kind, eps, seed + 2));
    p.f3 = map_sum(base, perturbation_family(alg, mod, n, kind, eps, seed + 3));
    p.alpha_cap_value = alpha_cap(n, eps, eps, eps, lambda_max);
    return p;
}

// --------------------------------------------------------------------------
// Task dispatch.

struct StabilityReport {
    json doc;
    bool all_hold = true;

    std::string to_json_string() const { return doc.dump(2) + "\n"; }

    // deterministic projection used by reproducibility checks
    std::string deterministic_dump() const {
        json copy = doc;
        copy.erase("timing");
        return copy.dump(2);
    }
};

// Structural check of an emitted report against the published schema version.
// Returns an empty string when valid, otherwise the first problem found.
inline std::string report_schema_errors(const json& doc) {
    if (!doc.contains("schema") || doc["schema"] != kReportSchema)
        return "missing or unknown schema tag";
    for (const char* key : {"config", "spaces", "verdicts", "timing"})
        if (!doc.contains(key)) return std::string("missing section: ") + key;
    if (!doc["config"].contains("task")) return "config echo lacks the task";
    if (!doc["verdicts"].contains("all_hold")) return "verdicts lack all_hold";
    const std::string task = doc["config"]["task"].get<std::string>();
    static const std::map<std::string, const char*> sections = {
        {"cohomology", "cohomology"},        {"repair", "repair"},
        {"derivation", "derivation"},        {"coboundary-repair", "coboundary_repair"},
        {"vanishing", "vanishing"},          {"probe", "contractibility_probe"},
    };
    auto it = sections.find(task);
    if (it != sections.end() && !doc.contains(it->second))
        return std::string("missing task section: ") + it->second;
    return "";
}

namespace detail {

inline RepairOptions options_from_config(const ExperimentConfig& c) {
    RepairOptions opt;
    opt.m_max = c.m_max;
    opt.tol = c.tol;
    opt.seed = c.seed_or();
    opt.lambdas = parse_lambda_set(c.lambda_set);
    opt.defect_plan = {2048, c.seed_or()};
    return opt;
}

} // namespace detail

inline StabilityReport run(const ExperimentConfig& config) {
    validate_config(config);
    const auto t0 = std::chrono::steady_clock::now();

    ResolvedSpaces spaces = resolve_spaces(config);
    const Algebra& alg = spaces.algebra;
    const Bimodule& mod = spaces.module;

    StabilityReport report;
    json& doc = report.doc;
    doc["schema"] = kReportSchema;
    doc["config"] = config_to_json(config);
    {
        json a;
        a["name"] = spaces.algebra_name;
        a["dim"] = alg.dim;
        a["norm_scale"] = rational_to_string(alg.norm_scale);
        a["module"] = spaces.module_name;
        a["module_dim"] = mod.dim;
        a["action_norm_constant"] = action_norm_constant(alg, mod);
        doc["spaces"] = std::move(a);
    }

    bool ok = true;
    const std::uint64_t seed = config.seed_or();

    if (config.task == "cohomology") {
        json table = json::array();
        for (int k = 0; k <= config.n; ++k) {
            CohomologyRanks r = cohomology_ranks(alg, mod, k);
            json row;
            row["n"] = k;
            row["cocycle_dim"] = r.cocycle_dim;
            row["coboundary_dim"] = r.coboundary_dim;
            row["cohomology_dim"] = r.cohomology_dim;
            table.push_back(std::move(row));
        }
        json block;
        block["table"] = std::move(table);
        json cp = json::array();
        for (int k = 0; k <= config.n; ++k) {
            bool zero = multiply(linearize_coboundary(alg, mod, k + 1), linearize_coboundary(alg, mod, k)).is_zero();
            cp.push_back(zero);
            ok = ok && zero;
        }
        block["complex_property"] = std::move(cp);
        doc["cohomology"] = std::move(block);
    } else if (config.task == "repair") {
        RepairOptions opt = detail::options_from_config(config);
        opt.span_set = parse_spanning_set(config.span, alg);
        PerturbationKind kind = parse_perturbation_kind(config.perturb);
        json runs = json::array();
        for (double eps : config.eps) {
            PlantedTriple p = plant_cocycle_triple(alg, mod, config.n, eps, kind, seed,
                                                   opt.lambdas.max_modulus());
            opt.alpha_cap = p.alpha_cap_value;
            RepairResult r = repair_pexider_triple(alg, mod, p.f1, p.f2, p.f3, opt);
            json run_j = repair_to_json(r);
            run_j["eps"] = eps;
            run_j["recovery_error"] = multilinear_distance(alg, r.repaired, cochain_to_double(p.truth));
            ok = ok && r.all_hold();
            runs.push_back(std::move(run_j));
        }
        doc["repair"] = std::move(runs);
    } else if (config.task == "derivation") {
        RepairOptions opt = detail::options_from_config(config);
        PerturbationKind kind = parse_perturbation_kind(config.perturb);
        json runs = json::array();
        for (double eps : config.eps) {
            SplitMix64 rng(seed, 0xdeULL);
            Element<CD> x = random_element(rng, mod.dim);
            Cochain<CD> x0 = Cochain<CD>::zero(0, alg.dim, mod.dim);
            x0.set_value(0, x);
            Cochain<CD> inner = coboundary(alg, mod, x0);
            PointwiseMap base = map_from_cochain(inner, "inner derivation");
            PointwiseMap f1 = map_sum(base, perturbation_family(alg, mod, 1, kind, eps, seed + 1));
            PointwiseMap f2 = map_sum(base, perturbation_family(alg, mod, 1, kind, eps, seed + 2));
            PointwiseMap f3 = map_sum(base, perturbation_family(alg, mod, 1, kind, eps, seed + 3));
            opt.alpha_cap = alpha_cap(1, eps, eps, eps, opt.lambdas.max_modulus());
            RepairResult r = repair_derivation(alg, mod, f1, f2, f3, x, opt, eps);
            json run_j = repair_to_json(r);
            run_j["eps"] = eps;
            run_j["recovery_error"] = multilinear_distance(alg, r.repaired, inner);
            ok = ok && r.all_hold();
            runs.push_back(std::move(run_j));
        }
        doc["derivation"] = std::move(runs);
    } else if (config.task == "coboundary-repair") {
        RepairOptions opt = detail::options_from_config(config);
        PerturbationKind kind = parse_perturbation_kind(config.perturb);
        const int n = config.n;
        json runs = json::array();
        for (double eps : config.eps) {
            // plant an arbitrary potential and its exact coboundary
            Cochain<CQ> g_true = Cochain<CQ>::zero(n - 1, alg.dim, mod.dim);
            SplitMix64 rng(seed, 0x6bULL);
            for (CQ& v : g_true.values)
                v = CQ(Rational(long(rng.next_below(9)) - 4, 2));
            Cochain<CQ> f_true = coboundary(alg, mod, g_true);
            PointwiseMap gbase = map_from_cochain(g_true, "planted potential");
            PointwiseMap fbase = map_from_cochain(f_true, "planted coboundary");
            const double gamma = eps;
            PointwiseMap g1 = map_sum(gbase, perturbation_family(alg, mod, n - 1, kind, gamma, seed + 11));
            PointwiseMap g2 = map_sum(gbase, perturbation_family(alg, mod, n - 1, kind, gamma, seed + 12));
            PointwiseMap g3 = map_sum(gbase, perturbation_family(alg, mod, n - 1, kind, gamma, seed + 13));
            PointwiseMap f1 = map_sum(fbase, perturbation_family(alg, mod, n, kind, eps, seed + 14));
            PointwiseMap f2 = map_sum(fbase, perturbation_family(alg, mod, n, kind, eps, seed + 15));
            PointwiseMap f3 = map_sum(fbase, perturbation_family(alg, mod, n, kind, eps, seed + 16));
            opt.alpha_cap = alpha_cap(n, eps, eps, eps, opt.lambdas.max_modulus());
            double gamma_cap_v = alpha_cap(n - 1, gamma, gamma, gamma, opt.lambdas.max_modulus());
            double eta_cap_v = eta_cap(alg, mod, n, gamma, gamma, gamma, eps);
            RepairResult r = repair_to_coboundary(alg, mod, f1, f2, f3, g1, g2, g3, opt, gamma_cap_v, eta_cap_v);
            json run_j = repair_to_json(r);
            run_j["eps"] = eps;
            run_j["recovery_error_f"] = multilinear_distance(alg, r.repaired, cochain_to_double(f_true));
            run_j["recovery_error_g"] = multilinear_distance(alg, *r.potential, cochain_to_double(g_true));
            ok = ok && r.all_hold();
            runs.push_back(std::move(run_j));
        }
        doc["coboundary_repair"] = std::move(runs);
    } else if (config.task == "vanishing") {
        TrialPlan plan;
        plan.trials = config.trials;
        plan.eps = config.eps;
        plan.seed = seed;
        plan.m_max = config.m_max;
        plan.tol = config.tol;
        plan.kind = parse_perturbation_kind(config.perturb);
        VanishingVerdict v = verify_vanishing_equivalence(alg, mod, config.n, plan);
        ok = ok && (v.approx_vanishes == (v.exact_dim == 0));
        for (const auto& t : v.trials) ok = ok && t.holds;
        doc["vanishing"] = vanishing_to_json(v);
    } else if (config.task == "probe") {
        TrialPlan plan;
        plan.trials = std::max(1, config.trials / 2);
        plan.eps = config.eps;
        plan.seed = seed;
        plan.m_max = config.m_max;
        plan.tol = config.tol;
        plan.kind = parse_perturbation_kind(config.perturb);
        std::vector<std::pair<std::string, Bimodule>> family;
        family.emplace_back("regular", regular_bimodule(alg));
        family.emplace_back("dual", build_dual_module(regular_bimodule(alg)));
        family.emplace_back("zero", zero_bimodule(alg));
        ProbeVerdict contract = contractibility_probe(alg, family, plan);
        ProbeVerdict amen = amenability_probe(alg, family, plan);
        // equivalence of exact and approximate routes holds row-wise even when
        // the probe itself fails, so the verdict checks consistency only
        for (const auto& row : contract.rows) ok = ok && (row.approx_vanishes == (row.exact_dim == 0));
        for (const auto& row : amen.rows) ok = ok && (row.approx_vanishes == (row.exact_dim == 0));
        doc["contractibility_probe"] = probe_to_json(contract);
        doc["amenability_probe"] = probe_to_json(amen);
    }

    report.all_hold = ok;
    json verdicts;
    verdicts["all_hold"] = ok;
    doc["verdicts"] = std::move(verdicts);
    const auto t1 = std::chrono::steady_clock::now();
    json timing;
    timing["seconds"] = std::chrono::duration<double>(t1 - t0).count();
    doc["timing"] = std::move(timing);
    std::string schema_problem = report_schema_errors(doc);
    if (!schema_problem.empty())
        throw std::logic_error("emitted report violates its schema: " + schema_problem);
    return report;
}

// --------------------------------------------------------------------------
// Human-readable rendering.

inline std::string render_table(const StabilityReport& report) {
    const json& d = report.doc;
    std::ostringstream os;
    auto line = [&] { os << "-------------------------------------------------------------\n"; };
    os << "coholab report (" << d["schema"].get<std::string>() << ")\n";
    line();
    os << "task: " << d["config"]["task"].get<std::string>()
       << "   algebra: " << d["spaces"]["name"].get<std::string>() << " (dim " << d["spaces"]["dim"]
       << ", kappa " << d["spaces"]["norm_scale"].get<std::string>() << ")"
       << "   module: " << d["spaces"]["module"].get<std::string>() << " (dim " << d["spaces"]["module_dim"] << ")\n";
    line();

    auto print_bound = [&](const json& b) {
        os << "  " << b["id"].get<std::string>() << ": " << b["observed"].dump() << " <= " << b["bound"].dump()
           << (b["holds"].get<bool>() ? "  [ok]" : "  [VIOLATED]") << "\n";
    };
    auto print_repair = [&](const json& r) {
        if (r.contains("eps")) os << " eps = " << r["eps"].dump() << "\n";
        os << "  iteration: m_used = " << r["trace_f1"]["m_used"] << ", stop = "
           << r["trace_f1"]["stop_reason"].get<std::string>() << ", geometric decay "
           << (r["trace_f1"]["geometric_decay_ok"].get<bool>() ? "ok" : "VIOLATED") << "\n";
        if (r.contains("recovery_error")) os << "  recovery error: " << r["recovery_error"].dump() << "\n";
        for (const auto& b : r["distance_bounds"]) print_bound(b);
        os << "  cocycle residual: " << r["cocycle_residual"].dump() << " <= " << r["cocycle_residual_cap"].dump()
           << (r["cocycle_residual_ok"].get<bool>() ? "  [ok]" : "  [VIOLATED]") << "\n";
        int holds = 0, total = 0;
        for (const auto& rec : r["ledger"]) { ++total; holds += rec["holds"].get<bool>() ? 1 : 0; }
        os << "  inequality ledger: " << holds << "/" << total << " hold\n";
        if (r.contains("potential_distance_bounds")) {
            for (const auto& b : r["potential_distance_bounds"]) print_bound(b);
            os << "  coboundary residual: " << r["coboundary_residual"].dump() << " <= "
               << r["coboundary_residual_cap"].dump()
               << (r["coboundary_residual_ok"].get<bool>() ? "  [ok]" : "  [VIOLATED]") << "\n";
        }
        if (r.contains("inner_distance"))
            os << "  distance to prescribed commutator: " << r["inner_distance"].dump() << " <= "
               << r["inner_distance_cap"].dump() << (r["inner_distance_ok"].get<bool>() ? "  [ok]" : "  [VIOLATED]")
               << "\n";
    };

    if (d.contains("cohomology")) {
        os << "  n   dim Z^n   dim B^n   dim H^n\n";
        for (const auto& row : d["cohomology"]["table"])
            os << "  " << row["n"] << "   " << row["cocycle_dim"] << "         " << row["coboundary_dim"]
               << "         " << row["cohomology_dim"] << "\n";
    }
    for (const char* key : {"repair", "derivation", "coboundary_repair"})
        if (d.contains(key))
            for (const auto& r : d[key]) print_repair(r);
    if (d.contains("vanishing")) {
        const json& v = d["vanishing"];
        os << "  exact dim H^" << v["n"] << " = " << v["exact_dim"] << ", approximately vanishes: "
           << (v["approx_vanishes"].get<bool>() ? "yes" : "no") << "\n";
        for (const auto& t : v["trials"])
            os << "  trial seed=" << t["seed"] << " eps=" << t["eps"].dump() << ": distance "
               << t["repair_distance"].dump() << " <= " << t["bound 3*2^n*alpha"].dump()
               << (t["holds"].get<bool>() ? "  [ok]" : "  [VIOLATED]") << "\n";
        if (v.contains("obstruction_witness"))
            os << "  obstruction witness at distance " << v["obstruction_witness"]["b_distance"].dump() << "\n";
    }
    for (const char* key : {"contractibility_probe", "amenability_probe"})
        if (d.contains(key)) {
            os << "  " << key << ":\n";
            for (const auto& row : d[key]["rows"])
                os << "    " << row["module"].get<std::string>() << ": dim H^1 = " << row["exact_dim"]
                   << ", approx vanishes: " << (row["approx_vanishes"].get<bool>() ? "yes" : "no") << "\n";
            os << "    all pass: " << (d[key]["all_pass"].get<bool>() ? "yes" : "no") << "\n";
        }
    line();
    os << "verdicts: " << (report.all_hold ? "ALL HOLD" : "VIOLATIONS PRESENT") << "\n";
    return os.str();
}

} // namespace coholab
