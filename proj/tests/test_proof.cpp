#include "doctest.h"

#include "llw/proof.hpp"

using namespace llw;

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

} // namespace

TEST_CASE("axiom and simple rules check") {
    ProofPtr ax = build::ax(F("a"));
    CHECK(ax->conclusion.text() == "|- a, a^");
    CHECK(check_proof(*ax).ok);
    CHECK(count_cuts(*ax) == 0);

    ProofPtr par = build::par(ax, F("a"), F("a^"));
    CHECK(par->conclusion.text() == "|- a @ a^");
    CHECK(check_proof(*par).ok);

    ProofPtr cut = build::cut(build::ax(F("a")), F("a^"), build::ax(F("a")));
    CHECK(check_proof(*cut).ok);
    CHECK(count_cuts(*cut) == 1);
    CHECK(cut->conclusion == ax->conclusion);
}

TEST_CASE("tensor split mismatch is reported at the node") {
    ProofPtr t = build::tensor(build::ax(F("a")), F("a"), build::ax(F("b")), F("b"));
    REQUIRE(t->conclusion.text() == "|- a * b, a^, b^");
    CHECK(check_proof(*t).ok);
    std::string text = write_proof(*t);
    CHECK(text.find(":split (1)") != std::string::npos);

    auto bad = std::make_shared<Proof>(*t);
    bad->split = {1, 2};
    bad->wiring = {};
    ProofPtr reread = make_proof(bad->rule, bad->conclusion, bad->principal, std::nullopt, bad->split,
                                 bad->premises);
    CheckReport r = check_proof(*reread);
    CHECK_FALSE(r.ok);
    REQUIRE_FALSE(r.failures.empty());
    CHECK(r.failures[0].path == "/");
}

TEST_CASE("file round trip") {
    ProofPtr p = build::with(build::plus_l(build::ax(F("a")), F("a"), F("b")), F("a^"),
                             build::plus_r(build::ax(F("b")), F("a"), F("b")), F("b^"));
    REQUIRE(check_proof(*p).ok);
    std::string text = write_proof(*p);
    ProofPtr q = read_proof(text);
    CHECK(check_proof(*q).ok);
    CHECK(write_proof(*q) == text);
    CHECK(q->conclusion.text() == "|- a + b, a^ & b^");
}

TEST_CASE("reader accepts the minimal axiom form") {
    ProofPtr p = read_proof("(ax \"|- a, a^\")");
    CHECK(check_proof(*p).ok);
    CHECK_THROWS_AS(read_proof("(ax \"|- a, a^\""), SyntaxError);
    CHECK_THROWS_AS(read_proof("(axe \"|- a, a^\")"), SyntaxError);
    CHECK_THROWS_AS(read_proof("(tensor \"|- a * b, a^, b^\" 0 (ax \"|- a, a^\") (ax \"|- b, b^\"))"),
                    SyntaxError);
}

TEST_CASE("checker rejects rule violations") {
    CHECK_FALSE(check_proof(*read_proof("(ax \"|- a, b^\")")).ok);
    CHECK_FALSE(check_proof(*read_proof("(one \"|- 1, a\" 0)")).ok);
    CHECK(check_proof(*read_proof("(top \"|- a, top, b\" 2)")).ok);
    CHECK_FALSE(check_proof(*read_proof("(prom \"|- !a, a^\" 0 (ax \"|- a, a^\"))")).ok);
    CHECK(check_proof(*read_proof("(prom \"|- !a, ?a^\" 0 (der \"|- ?a^, a\" 0 (ax \"|- a, a^\")))")).ok);
    // premise conclusion does not match
    CHECK_FALSE(check_proof(*read_proof("(par \"|- a @ b\" 0 (ax \"|- a, a^\"))")).ok);
    // with contexts differ
    CHECK_FALSE(check_proof(*read_proof(
        "(with \"|- a & b, a^\" 0 (ax \"|- a, a^\") (ax \"|- b, b^\"))")).ok);
}

TEST_CASE("corrupting a node conclusion is caught locally") {
    ProofPtr p = build::par(build::tensor(build::ax(F("a")), F("a"), build::ax(F("b")), F("b")), F("a^"),
                            F("b^"));
    REQUIRE(check_proof(*p).ok);
    auto inner = std::make_shared<Proof>(*p->premises[0]);
    inner->conclusion = parse_sequent("|- a * b, a^, c^");
    auto outer = std::make_shared<Proof>(*p);
    outer->premises[0] = inner;
    CHECK_FALSE(check_proof(*outer).ok);
}

TEST_CASE("duplicate formulas keep their wiring") {
    // |- ?a^, ?a^, a  contracted: both copies of ?a^ are distinct occurrences.
    ProofPtr base = build::weakening(build::dereliction(build::ax(F("a")), F("a^")), F("?a^"));
    REQUIRE(base->conclusion.text() == "|- ?a^, ?a^, a");
    ProofPtr c = build::contraction(base, F("?a^"));
    CHECK(check_proof(*c).ok);
    ProofPtr again = read_proof(write_proof(*c));
    CHECK(check_proof(*again).ok);
    CHECK(again->wiring == c->wiring);
}

TEST_CASE("pretty printer draws rule bars") {
    ProofPtr p = build::par(build::ax(F("a")), F("a"), F("a^"));
    std::string s = pretty_proof(*p);
    CHECK(s.find("ax") != std::string::npos);
    CHECK(s.find("par") != std::string::npos);
    CHECK(s.find("|- a @ a^") != std::string::npos);
}
