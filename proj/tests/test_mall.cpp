#include "doctest.h"

#include "llw/generators.hpp"
#include "llw/mall.hpp"

using namespace llw;

namespace {

Sequent S(const char *s) { return parse_sequent(s); }

SearchStatus status(const char *s) { return prove_mall(S(s)).status; }

} // namespace

TEST_CASE("prover on the polarity-separating pair") {
    SearchResult r = prove_mall(S("|- a @ a^"));
    REQUIRE(r.status == SearchStatus::Provable);
    CHECK(check_proof(*r.proof).ok);
    CHECK(r.proof->conclusion == S("|- a @ a^"));
    CHECK(status("|- a + a^") == SearchStatus::NotProvable);
    CHECK(status("|- a * a^") == SearchStatus::NotProvable);
}

TEST_CASE("prover finds the distributivity proof") {
    SearchResult r = prove_mall(S("|- (a*(b+c))^, (a*b)+(a*c)"));
    REQUIRE(r.status == SearchStatus::Provable);
    CHECK(check_proof(*r.proof).ok);
    CHECK(r.proof->conclusion == S("|- (a*(b+c))^, (a*b)+(a*c)"));
    CHECK(status("|- ((a*b)+(a*c))^, a*(b+c)") == SearchStatus::Provable);
}

TEST_CASE("units and tops") {
    CHECK(status("|- 1") == SearchStatus::Provable);
    CHECK(status("|- bot") == SearchStatus::NotProvable);
    CHECK(status("|- bot, 1") == SearchStatus::Provable);
    CHECK(status("|- top, a, b") == SearchStatus::Provable);
    CHECK(status("|- 0") == SearchStatus::NotProvable);
    CHECK(status("|- a") == SearchStatus::NotProvable);
    CHECK(status("|-") == SearchStatus::NotProvable);
}

TEST_CASE("prover rejects exponentials") {
    CHECK_THROWS_AS(prove_mall(S("|- ?a, !a^")), Error);
}

TEST_CASE("budget exhaustion is reported") {
    SearchLimits tiny;
    tiny.max_visited_sequents = 2;
    CHECK(prove_mall(S("|- (a*b)@(a^@b^)"), tiny).status == SearchStatus::BudgetExceeded);
}

TEST_CASE("oracle basics") {
    CHECK(oracle_provable(S("|- a, a^")));
    CHECK_FALSE(oracle_provable(S("|- a")));
    CHECK(oracle_provable(S("|- 1")));
    CHECK_THROWS_AS(oracle_provable(S("|- a*a*a*a*a, a^*a^*a^*a^")), Error);
}

TEST_CASE("exhaustive agreement at total size 5") {
    FormulaPool pool;
    MallEngine engine(pool);
    MallOracle oracle(pool);
    std::size_t disagreements = 0;
    std::size_t bad_proofs = 0;
    std::size_t n = for_each_mall_sequent(pool, {"a", "b"}, 5, [&](const IdSequent &s) {
        engine.reset();
        SearchStatus st = engine.decide(s);
        REQUIRE(st != SearchStatus::BudgetExceeded);
        bool p = st == SearchStatus::Provable;
        if (p != oracle.provable(s)) {
            ++disagreements;
        }
        if (p) {
            ProofPtr proof = engine.proof(s);
            std::vector<Formula> fs;
            for (auto id : s) fs.push_back(pool.formula(id));
            if (!check_proof(*proof).ok || !(proof->conclusion == Sequent(fs))) {
                ++bad_proofs;
            }
        }
    });
    CHECK(n > 10000);
    CHECK(disagreements == 0);
    CHECK(bad_proofs == 0);
    CHECK(engine.measure_violations() == 0);
}

TEST_CASE("random agreement up to size 12") {
    Rng rng(2024);
    FormulaShape shape;
    for (int i = 0; i < 300; ++i) {
        Sequent s = random_sequent(rng, 12, shape);
        SearchResult r = prove_mall(s);
        REQUIRE(r.status != SearchStatus::BudgetExceeded);
        CHECK((r.status == SearchStatus::Provable) == oracle_provable(s));
        if (r.proof) {
            CHECK(check_proof(*r.proof).ok);
        }
    }
}
