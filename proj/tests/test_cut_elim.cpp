#include "doctest.h"

#include "llw/cut_elim.hpp"
#include "llw/fixtures.hpp"
#include "llw/generators.hpp"
#include "llw/mall.hpp"

using namespace llw;

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

// Normalizes p and checks every intermediate proof.
NormalizationResult checked_normalize(const ProofPtr &p, std::size_t fuel = 100000) {
    std::size_t violations = 0;
    auto r = normalize(p, fuel, [&](const Proof &before, const Proof &after, const ReductionStep &) {
        if (!check_proof(after).ok || !(after.conclusion == before.conclusion)) {
            ++violations;
        }
    });
    CHECK(violations == 0);
    return r;
}

} // namespace

TEST_CASE("fixtures all check") {
    for (const auto &f : standard_fixtures()) {
        INFO(f.name);
        CheckReport r = check_proof(*f.proof);
        if (!r.ok) {
            MESSAGE(r.failures[0].path << ": " << r.failures[0].message);
        }
        CHECK(r.ok);
        ProofPtr again = read_proof(write_proof(*f.proof));
        CHECK(check_proof(*again).ok);
        CHECK(write_proof(*again) == write_proof(*f.proof));
    }
    auto all = standard_fixtures();
    CHECK(find_fixture(all, "bang_with").proof->conclusion == parse_sequent("|- ?a^ @ ?b^, !(a & b)"));
    CHECK(count_cuts(*find_fixture(all, "digging").proof) == 1);
    CHECK(find_fixture(all, "distributivity").proof->conclusion ==
          parse_sequent("|- (a*(b+c))^, (a*b)+(a*c)"));
}

TEST_CASE("axiom cut vanishes") {
    ProofPtr pi = build::par(build::ax(F("a")), F("a"), F("a^"));
    ProofPtr ax = build::ax(F("a"));
    ProofPtr q = build::tensor(build::ax(F("a")), F("a"), build::ax(F("b")), F("b"));
    ProofPtr c = build::cut(ax, F("a"), q);
    REQUIRE(check_proof(*c).ok);
    auto step = reduce_step(c);
    REQUIRE(step);
    CHECK(step->step.kind == ReductionKind::AxiomCut);
    CHECK(write_proof(*step->proof) == write_proof(*q));
    CHECK_FALSE(reduce_step(pi));
}

TEST_CASE("contraction against promotion duplicates the box") {
    // |- ?b^, ?b^, b  contracted, cut against the box |- ?b^, !b
    ProofPtr pi = build::weakening(build::dereliction(build::ax(F("b")), F("b^")), F("?b^"));
    ProofPtr left = build::contraction(pi, F("?b^"));
    ProofPtr box = build::promotion(build::dereliction(build::ax(F("b")), F("b^")), F("b"));
    ProofPtr c = build::cut(left, F("?b^"), box);
    REQUIRE(check_proof(*c).ok);
    auto step = reduce_step(c);
    REQUIRE(step);
    CHECK(step->step.kind == ReductionKind::ContrProm);
    CHECK(step->step.duplicated);
    CHECK(check_proof(*step->proof).ok);
    CHECK(count_cuts(*step->proof) == 2);
    auto r = checked_normalize(c);
    CHECK(r.stats.final_cut_count == 0);
    CHECK(r.stats.duplications >= 1);
}

TEST_CASE("fixtures normalize") {
    for (const auto &f : standard_fixtures()) {
        INFO(f.name);
        auto r = checked_normalize(f.proof);
        CHECK_FALSE(r.fuel_exhausted);
        CHECK(is_cut_free(*r.proof));
        CHECK(r.proof->conclusion == f.proof->conclusion);
        CHECK(check_proof(*r.proof).ok);
        if (count_cuts(*f.proof) == 0) {
            CHECK(r.stats.steps == 0);
        }
    }
}

TEST_CASE("random cut compositions of prover outputs normalize") {
    Rng rng(99);
    FormulaShape shape;
    int done = 0;
    for (int attempt = 0; attempt < 4000 && done < 60; ++attempt) {
        Formula a = random_formula(rng, 1 + 2 * (attempt % 3), shape);
        Sequent s1 = random_sequent(rng, 5, shape);
        Sequent s2 = random_sequent(rng, 5, shape);
        std::vector<Formula> f1(s1.begin(), s1.end()), f2(s2.begin(), s2.end());
        f1.push_back(a);
        f2.push_back(dual(a));
        auto r1 = prove_mall(Sequent(f1));
        auto r2 = prove_mall(Sequent(f2));
        if (r1.status != SearchStatus::Provable || r2.status != SearchStatus::Provable) continue;
        ProofPtr c = build::cut(r1.proof, a, r2.proof);
        REQUIRE(check_proof(*c).ok);
        std::size_t before = 0;
        bool shrink_ok = true;
        auto r = normalize(c, 100000, [&](const Proof &b, const Proof &after, const ReductionStep &st) {
            CHECK(check_proof(after).ok);
            CHECK(after.conclusion == b.conclusion);
            before = node_count(b);
            if (st.kind != ReductionKind::Commutative && node_count(after) >= before) shrink_ok = false;
        });
        CHECK(shrink_ok);
        CHECK(is_cut_free(*r.proof));
        ++done;
    }
    CHECK(done >= 60);
}
