#include "doctest.h"

#include "llw/mall.hpp"
#include "llw/tcm.hpp"

using namespace llw;
using namespace llw::tcm;

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

std::size_t count_rule(const Proof &p, Rule r) {
    std::size_t n = p.rule == r ? 1 : 0;
    for (const auto &q : p.premises) n += count_rule(*q, r);
    return n;
}

} // namespace

TEST_CASE("machine files") {
    Machine m = counter_example_machine();
    CHECK(m.instructions.size() == 2);
    CHECK(parse_machine(write_machine(m)).instructions == m.instructions);
    CHECK_THROWS_AS(parse_machine("states: q\ninit: q\n"), Error);
    CHECK_THROWS_AS(parse_machine("states: q\ninit: q\nfinal: r\n"), Error);
    CHECK_THROWS_AS(parse_machine("states: a q\ninit: q\nfinal: q\n"), Error);
    CHECK_THROWS_AS(parse_machine("states: q\ninit: q\nfinal: q\nq *A q\n"), Error);
    CHECK_THROWS_AS(parse_machine("states: q\ninit: q\nfinal: q\nq fork q\n"), Error);
    Machine dup = parse_machine("states: q\ninit: q\nfinal: q\nq +A q  # twice\nq +A q\n");
    CHECK(dup.instructions.size() == 1);
    CHECK(parse_id("(q0,1,2) (q0, 0,0)") == Id{{"q0", 0, 0}, {"q0", 1, 2}});
}

TEST_CASE("simulation") {
    SUBCASE("increment then decrement") {
        Machine m = counter_example_machine();
        auto r = simulate(m, {{"qi", 0, 0}}, 12);
        REQUIRE(r.trace);
        CHECK(r.trace->steps.size() == 2);
        CHECK(r.trace->steps[0].after == Id{{"q1", 1, 0}});
        CHECK(r.trace->final_id() == Id{{"qf", 0, 0}});
        CHECK(validate_trace(m, *r.trace).empty());
    }
    SUBCASE("no instructions") {
        Machine m = parse_machine("states: qi qf\ninit: qi\nfinal: qf\n");
        auto r = simulate(m, {{"qi", 0, 0}}, 12);
        CHECK_FALSE(r.trace);
        CHECK_FALSE(simulate_bfs(m, {{"qi", 0, 0}}, 12).trace);
        CHECK(simulate_bfs(m, {{"qi", 0, 0}}, 12).explored == 1);
    }
    SUBCASE("fork") {
        Machine m = fork_example_machine();
        auto r = simulate(m, {{"qi", 0, 0}}, 12);
        REQUIRE(r.trace);
        CHECK(r.trace->steps.size() == 1);
        CHECK(r.trace->final_id() == Id{{"qf", 0, 0}, {"qf", 0, 0}});
    }
    SUBCASE("bound") {
        Machine m = counter_example_machine();
        CHECK_FALSE(simulate(m, {{"qi", 0, 0}}, 1).trace);
        CHECK_THROWS_AS(simulate(m, {{"qi", 0, 0}}, 0), Error);
        auto accepted = simulate(m, {{"qf", 0, 0}}, 3);
        REQUIRE(accepted.trace);
        CHECK(accepted.trace->steps.empty());
    }
    SUBCASE("decrements need a positive counter") {
        Machine m = counter_example_machine();
        const Instruction dec{Op::DecA, "q1", "qf", ""};
        CHECK_FALSE(apply({{"q1", 0, 0}}, {"q1", 0, 0}, dec).has_value());
        RunTrace bogus{{{"q1", 0, 0}}, {{dec, {"q1", 0, 0}, {{"qf", 0, 0}}}}};
        auto errs = validate_trace(m, bogus);
        REQUIRE(errs.size() == 1);
        CHECK(errs[0].find("does not apply") != std::string::npos);
    }
}

TEST_CASE("encoding") {
    CHECK(encode_instruction({Op::IncA, "qi", "qj", ""}) == F("?((qi^ @ (qj * a))^)"));
    CHECK(encode_instruction({Op::IncA, "qi", "qj", ""}) == F("?(qi * (qj^ @ a^))"));
    CHECK(encode_instruction({Op::DecA, "qi", "qj", ""}) == F("?(((qi * a)^ @ qj)^)"));
    CHECK(encode_instruction({Op::IncB, "qi", "qj", ""}) == F("?((qi^ @ (qj * b))^)"));
    CHECK(encode_instruction({Op::DecB, "qi", "qj", ""}) == F("?(((qi * b)^ @ qj)^)"));
    CHECK(encode_instruction({Op::Fork, "qi", "qj", "qk"}) == F("?((qi^ @ (qj + qk))^)"));
    CHECK(encode_instruction({Op::Fork, "qi", "qj", "qk"}) == F("?(qi * (qj^ & qk^))"));

    Machine m = counter_example_machine();
    Encoding e = encode(m, {"qi", 0, 0});
    CHECK(e.goal == parse_sequent("|- qi^, bot, bot, qf"));
    CHECK(e.theory.size() == 2);
    CHECK(e.full().size() == 6);
    CHECK(encode(m, {"q1", 2, 1}).goal == parse_sequent("|- q1^, (a * a)^, b^, qf"));

    CHECK(power(Formula::atom("a"), 0) == Formula::one());
    for (unsigned k = 1; k <= 20; ++k) {
        CHECK(power(Formula::atom("a"), k).size() == 2 * k - 1);
    }
    CHECK(power(Formula::atom("a"), 3) == F("(a * a) * a"));
}

TEST_CASE("synthesized proofs") {
    SUBCASE("base case") {
        Machine m = counter_example_machine();
        RunTrace t{{{"qf", 0, 0}}, {}};
        ProofPtr p = synthesize_proof(m, t, {"qf", 0, 0});
        CHECK(check_proof(*p).ok);
        CHECK(p->conclusion == encode(m, {"qf", 0, 0}).full());
        CHECK(count_rule(*p, Rule::Weakening) == 2);
        CHECK(count_rule(*p, Rule::Axiom) == 1);
    }
    SUBCASE("counter machine") {
        Machine m = counter_example_machine();
        auto r = simulate(m, {{"qi", 0, 0}}, 12);
        REQUIRE(r.trace);
        ProofPtr p = synthesize_proof(m, *r.trace, {"qi", 0, 0});
        CheckReport rep = check_proof(*p);
        CHECK(rep.ok);
        CHECK(p->conclusion == parse_sequent("|- qi^, bot, bot, qf, ?(qi * (q1^ @ a^)), ?((q1 * a) * qf^)"));
        CHECK(count_rule(*p, Rule::Contraction) == 2);
        CHECK(count_rule(*p, Rule::Dereliction) == 2);
    }
    SUBCASE("fork machine") {
        Machine m = fork_example_machine();
        auto r = simulate(m, {{"qi", 0, 0}}, 12);
        REQUIRE(r.trace);
        ProofPtr p = synthesize_proof(m, *r.trace, {"qi", 0, 0});
        CHECK(check_proof(*p).ok);
        CHECK(p->conclusion == encode(m, {"qi", 0, 0}).full());
        // the with node sits under the final contraction and cut
        const Proof &cut = *p->premises[0];
        REQUIRE(cut.rule == Rule::Cut);
        const Proof &with = *cut.premises[0];
        REQUIRE(with.rule == Rule::With);
        for (const auto &branch : with.premises) {
            CHECK(branch->conclusion == encode(m, {"qf", 0, 0}).full());
        }
    }
    SUBCASE("larger counters") {
        Machine m = parse_machine(
            "states: qi q1 q2 qf\ninit: qi\nfinal: qf\n"
            "qi -A qi\nqi -B qi\nqi +A q1\nq1 -A q2\nq2 fork qf qf\n");
        Id start{{"qi", 2, 1}, {"q1", 1, 0}};
        auto r = simulate(m, start, 12);
        REQUIRE(r.trace);
        CHECK(r.trace->steps.size() == 8);
        for (const Triplet &t : start) {
            ProofPtr p = synthesize_proof(m, *r.trace, t);
            INFO(to_string(t));
            CHECK(check_proof(*p).ok);
            CHECK(p->conclusion == encode(m, t).full());
        }
    }
    SUBCASE("mismatches are rejected") {
        Machine m = counter_example_machine();
        auto r = simulate(m, {{"qi", 0, 0}}, 12);
        REQUIRE(r.trace);
        CHECK_THROWS_AS(synthesize_proof(m, *r.trace, {"q1", 0, 0}), Error);
        RunTrace unfinished{{{"qi", 0, 0}}, {r.trace->steps[0]}};
        CHECK_THROWS_AS(synthesize_proof(m, unfinished, {"qi", 0, 0}), Error);
    }
}

TEST_CASE("per-triplet simulation agrees with breadth-first search") {
    Rng rng(5);
    MachineShape shape;
    int compared = 0;
    int accepted = 0;
    for (int i = 0; i < 1500; ++i) {
        Machine m = random_machine(rng, shape);
        Id s = random_id(rng, m, shape);
        const std::size_t bound = 1 + rng() % 8;
        auto bfs = simulate_bfs(m, s, bound, 20000);
        if (bfs.truncated) continue;
        ++compared;
        auto fast = simulate(m, s, bound);
        INFO(write_machine(m) << to_string(s) << " bound " << bound);
        REQUIRE(fast.trace.has_value() == bfs.trace.has_value());
        if (!fast.trace) continue;
        ++accepted;
        CHECK(fast.trace->steps.size() == bfs.trace->steps.size());
        CHECK(validate_trace(m, *fast.trace).empty());
        CHECK(validate_trace(m, *bfs.trace).empty());
        CHECK(is_accepting(m, fast.trace->final_id()));
    }
    CHECK(compared > 1000);
    CHECK(accepted > 100);
}

TEST_CASE("random machines: every accepting run yields checked proofs") {
    Rng rng(17);
    MachineShape shape;
    int accepted = 0;
    int proofs = 0;
    int with_steps = 0;
    for (int i = 0; i < 4000 && accepted < 150; ++i) {
        Machine m = random_machine(rng, shape);
        REQUIRE_NOTHROW(validate(m));
        Id s = random_id(rng, m, shape);
        auto r = simulate(m, s, 12);
        if (!r.trace) continue;
        ++accepted;
        if (!r.trace->steps.empty()) ++with_steps;
        REQUIRE(validate_trace(m, *r.trace).empty());
        for (const Triplet &t : s) {
            ProofPtr p = synthesize_proof(m, *r.trace, t);
            INFO(write_machine(m) << to_string(s) << " for " << to_string(t));
            CHECK(check_proof(*p).ok);
            CHECK(p->conclusion == encode(m, t).full());
            ++proofs;
        }
    }
    CHECK(accepted >= 100);
    CHECK(with_steps >= 50);
    MESSAGE(accepted << " accepting runs, " << proofs << " proofs");
}
