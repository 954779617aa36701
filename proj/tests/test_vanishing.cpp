#include <coholab/vanishing.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace coholab;

TEST_CASE("exact coboundaries project to themselves", "[vanishing]") {
    Algebra m2 = build_matrix_algebra(2);
    Bimodule reg = regular_bimodule(m2);
    // F = d g for a random potential g
    Cochain<CQ> g = Cochain<CQ>::zero(1, 4, 4);
    SplitMix64 rng(3);
    for (CQ& v : g.values) v = CQ(Rational(long(rng.next_below(9)) - 4, 2));
    Cochain<CQ> F = coboundary(m2, reg, g);
    CHECK(in_coboundary_space(m2, reg, F));
    NearestCoboundary nc = nearest_coboundary(m2, reg, cochain_to_double(F));
    CHECK(nc.distance <= 1e-10);
    CHECK(nc.euclidean_residual <= 1e-10);
}

TEST_CASE("every degree-1 cocycle of the matrix algebra is at distance zero", "[vanishing]") {
    Algebra m2 = build_matrix_algebra(2);
    Bimodule reg = regular_bimodule(m2);
    for (const auto& z : cocycle_space(m2, reg, 1)) {
        CHECK(in_coboundary_space(m2, reg, z));
        CHECK(nearest_coboundary(m2, reg, cochain_to_double(z)).distance <= 1e-10);
    }
}

TEST_CASE("dual numbers: the derivation t -> t is an obstruction at distance equal to its norm", "[vanishing]") {
    Algebra dn = build_dual_numbers();
    Bimodule reg = regular_bimodule(dn);
    // F(1) = 0, F(t) = t
    Cochain<CQ> F = Cochain<CQ>::zero(1, 2, 2);
    F.values[std::size_t(1 * 2 + 1)] = CQ(Rational(1));
    CHECK_FALSE(in_coboundary_space(dn, reg, F));
    NearestCoboundary nc = nearest_coboundary(dn, reg, cochain_to_double(F));
    // the coboundary space is zero, so the projection is the zero potential
    CHECK(std::abs(nc.distance - multilinear_norm(dn, F)) <= 1e-12);
    CHECK(multilinear_norm(dn, nc.potential) <= 1e-12);
}

TEST_CASE("obstruction distance is invariant under adding an exact coboundary", "[vanishing]") {
    Algebra t2 = build_upper_triangular(2);
    Bimodule zero = zero_bimodule(t2, 2);
    // make a nontrivial case: H^2 of dual numbers regular is nonzero
    Algebra dn = build_dual_numbers();
    Bimodule reg = regular_bimodule(dn);
    CohomologyRanks r2 = cohomology_ranks(dn, reg, 2);
    REQUIRE(r2.cohomology_dim > 0);
    Cochain<CQ> witness;
    bool found = false;
    for (const auto& z : cocycle_space(dn, reg, 2))
        if (!in_coboundary_space(dn, reg, z)) { witness = z; found = true; break; }
    REQUIRE(found);
    double base_dist = nearest_coboundary(dn, reg, cochain_to_double(witness)).distance;
    CHECK(base_dist > 1e-6);

    SplitMix64 rng(10);
    Cochain<CQ> g = Cochain<CQ>::zero(1, 2, 2);
    for (CQ& v : g.values) v = CQ(Rational(long(rng.next_below(9)) - 4, 3));
    Cochain<CQ> shifted = add(witness, coboundary(dn, reg, g));
    double shifted_dist = nearest_coboundary(dn, reg, cochain_to_double(shifted)).distance;
    CHECK(shifted_dist == Catch::Approx(base_dist).margin(1e-10));
    (void)zero;
}

TEST_CASE("vanishing equivalence: forward direction on the matrix algebra", "[vanishing]") {
    Algebra m2 = build_matrix_algebra(2);
    Bimodule reg = regular_bimodule(m2);
    TrialPlan plan;
    plan.trials = 20;
    plan.eps = {1e-2};
    plan.seed = 11;
    VanishingVerdict v = verify_vanishing_equivalence(m2, reg, 1, plan);
    CHECK(v.exact_dim == 0);
    CHECK(v.approx_vanishes);
    CHECK(v.trials.size() == 20);
    for (const auto& t : v.trials) {
        CHECK(t.holds);
        CHECK(t.bound == Catch::Approx(3.0 * 2.0 * t.alpha_cap));
        CHECK(t.repair_distance <= t.bound);
    }
}

TEST_CASE("zero perturbation trials sit at the coboundary space exactly", "[vanishing]") {
    Algebra m2 = build_matrix_algebra(2);
    Bimodule reg = regular_bimodule(m2);
    TrialPlan plan;
    plan.trials = 3;
    plan.eps = {0.0};
    plan.seed = 21;
    VanishingVerdict v = verify_vanishing_equivalence(m2, reg, 1, plan);
    CHECK(v.approx_vanishes);
    for (const auto& t : v.trials) CHECK(t.repair_distance <= 1e-9);
}

TEST_CASE("vanishing equivalence: converse direction on dual numbers", "[vanishing]") {
    Algebra dn = build_dual_numbers();
    Bimodule reg = regular_bimodule(dn);
    TrialPlan plan;
    plan.seed = 31;
    VanishingVerdict v = verify_vanishing_equivalence(dn, reg, 1, plan);
    CHECK(v.exact_dim == 1);
    CHECK_FALSE(v.approx_vanishes);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->b_distance ==
          Catch::Approx(multilinear_norm(dn, v.witness->cocycle)).epsilon(1e-10));
}

TEST_CASE("equivalence holds across the builtin grid at degrees 1 and 2", "[vanishing]") {
    TrialPlan plan;
    plan.trials = 2;
    plan.eps = {1e-2};
    plan.seed = 41;
    for (const Algebra& alg : {build_matrix_algebra(2), build_dual_numbers(), build_upper_triangular(2)}) {
        Bimodule reg = regular_bimodule(alg);
        Bimodule dual = build_dual_module(reg);
        Bimodule zero = zero_bimodule(alg);
        for (const Bimodule* mod : {&reg, &dual, &zero})
            for (int n = 1; n <= 2; ++n) {
                VanishingVerdict v = verify_vanishing_equivalence(alg, *mod, n, plan);
                INFO("dim " << alg.dim << " module dim " << mod->dim << " degree " << n);
                CHECK(v.approx_vanishes == (v.exact_dim == 0));
            }
    }
}

TEST_CASE("probes over the builtin module family", "[vanishing]") {
    TrialPlan plan;
    plan.trials = 2;
    plan.seed = 51;
    std::vector<std::pair<std::string, Bimodule>> family;
    Algebra m2 = build_matrix_algebra(2);
    family.emplace_back("regular", regular_bimodule(m2));
    family.emplace_back("dual", build_dual_module(regular_bimodule(m2)));
    family.emplace_back("zero", zero_bimodule(m2));
    ProbeVerdict contractible = contractibility_probe(m2, family, plan);
    CHECK(contractible.all_pass);
    ProbeVerdict amenable = amenability_probe(m2, family, plan);
    CHECK(amenable.all_pass);
    for (const auto& row : amenable.rows) CHECK(row.module_name.back() == '*');

    Algebra dn = build_dual_numbers();
    std::vector<std::pair<std::string, Bimodule>> dn_family;
    dn_family.emplace_back("regular", regular_bimodule(dn));
    ProbeVerdict obstructed = contractibility_probe(dn, dn_family, plan);
    CHECK_FALSE(obstructed.all_pass);
    CHECK(obstructed.rows[0].exact_dim == 1);
    CHECK(obstructed.rows[0].witness_distance > 0);

    // zero-action coefficients always vanish at degree 1 on unital algebras
    std::vector<std::pair<std::string, Bimodule>> zf;
    zf.emplace_back("zero", zero_bimodule(dn));
    CHECK(contractibility_probe(dn, zf, plan).all_pass);
}
