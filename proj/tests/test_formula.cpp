#include "doctest.h"

#include "llw/formula.hpp"
#include "llw/generators.hpp"

using namespace llw;

namespace {

Formula F(const char *s) { return parse_formula(s); }
Formula N(const char *s) { return nnf(parse_formula(s)); }

} // namespace

TEST_CASE("parser builds the expected trees") {
    Formula t = F("a * b");
    CHECK(t.kind() == Connective::Tensor);
    CHECK(t.left().name() == "a");
    CHECK(t.right().name() == "b");

    Formula d = F("(a * b)^");
    CHECK(d.kind() == Connective::Dual);
    CHECK(d.body() == t);

    Formula lolli = F("a -o b");
    CHECK(lolli.kind() == Connective::Par);
    CHECK(lolli.left().kind() == Connective::DualAtom);
    CHECK(lolli.left().name() == "a");
    CHECK(lolli.right() == F("b"));

    CHECK(F("bot").kind() == Connective::Bot);
    CHECK(F("top").kind() == Connective::Top);
    CHECK(F("1").kind() == Connective::One);
    CHECK(F("0").kind() == Connective::Zero);
    CHECK(F("!?a").kind() == Connective::OfCourse);
    CHECK(F("a * b * c").left().kind() == Connective::Tensor);
    CHECK(F("a -o b -o c").right().kind() == Connective::Par);
}

TEST_CASE("parser errors carry positions") {
    try {
        parse_formula("a * b @ c");
        FAIL("mixed connectives accepted");
    } catch (const SyntaxError &e) {
        CHECK(e.position() == 6);
    }
    CHECK_THROWS_AS(parse_formula("a *"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(a"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("A"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("a b"), SyntaxError);
    CHECK_THROWS_AS(parse_sequent("a, b"), SyntaxError);
    CHECK_NOTHROW(parse_formula("(a * b) @ c"));
}

TEST_CASE("De Morgan normal form") {
    CHECK(N("(a*b)^") == F("a^ @ b^"));
    CHECK(N("(!a)^") == F("?(a^)"));
    CHECK(N("(a^)^") == F("a"));
    CHECK(N("(a & top)^") == F("a^ + 0"));
    CHECK(N("(a + b)^^") == F("a + b"));
}

TEST_CASE("dual on NNF formulas") {
    CHECK(dual(F("1")) == F("bot"));
    CHECK(dual(F("top")) == F("0"));
    CHECK(dual(F("a & top")) == F("a^ + 0"));
    CHECK_THROWS_AS(dual(F("(a * b)^")), Error);
}

TEST_CASE("size and polarity") {
    CHECK(size(F("a")) == 1);
    CHECK(size(F("a @ a^")) == 3);
    CHECK(size(F("a * (b + c)")) == 5);
    CHECK(polarity(F("a * b")) == Polarity::Positive);
    CHECK(polarity(F("a & b")) == Polarity::Negative);
    CHECK(polarity(F("a")) == Polarity::Atomic);
    CHECK(polarity(F("a^")) == Polarity::Atomic);
    CHECK(polarity(F("1")) == Polarity::Positive);
    CHECK(polarity(F("0")) == Polarity::Positive);
    CHECK(polarity(F("bot")) == Polarity::Negative);
    CHECK(polarity(F("top")) == Polarity::Negative);
    CHECK(polarity(F("!a")) == Polarity::Positive);
    CHECK(polarity(F("?a")) == Polarity::Negative);
}

TEST_CASE("sequents are multisets") {
    Sequent s = parse_sequent("|- b, a, b");
    Sequent t = parse_sequent("|- b, b, a");
    CHECK(s == t);
    CHECK(!(s == parse_sequent("|- a, b")));
    CHECK(s.text() == "|- a, b, b");
    CHECK(parse_sequent("|-").empty());
    CHECK(parse_sequent("|- (a * b)^").text() == "|- a^ @ b^");
}

TEST_CASE("randomized syntax properties") {
    Rng rng(7);
    FormulaShape shape;
    shape.atoms = {"a", "b", "c"};
    shape.exponentials = true;
    shape.dual_nodes = true;
    for (int i = 0; i < 10000; ++i) {
        Formula f = random_formula(rng, 1 + static_cast<std::size_t>(i % 15), shape);
        Formula g = nnf(f);
        REQUIRE(g.is_nnf());
        CHECK(nnf(g) == g);
        CHECK(nnf(Formula::dual_of(Formula::dual_of(f))) == g);
        CHECK(dual(dual(g)) == g);
        CHECK(parse_formula(render_formula(f)) == f);
        CHECK(parse_formula(render_formula(g)) == g);
        Connective top = g.kind();
        if (is_multiplicative(top)) {
            CHECK(is_multiplicative(dual(g).kind()));
        }
        if (is_additive(top)) {
            CHECK(is_additive(dual(g).kind()));
        }
        if (g.is_binary()) {
            CHECK(g.left().size() < g.size());
            CHECK(g.right().size() < g.size());
        }
    }
}
