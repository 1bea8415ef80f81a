#include "doctest.h"

#include "llw/coherence.hpp"
#include "llw/cut_elim.hpp"
#include "llw/lambda.hpp"

using namespace llw;
using namespace llw::lam;

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

} // namespace

TEST_CASE("term syntax") {
    CHECK(to_string(parse_term("\\x. x")) == "\\x. x");
    CHECK(to_string(parse_term("\\f x. f x")) == "\\f. \\x. f x");
    CHECK(to_string(parse_term("(\\x. x) y")) == "(\\x. x) y");
    CHECK(to_string(parse_term("a b c")) == "a b c");
    CHECK(to_string(parse_term("a (b c)")) == "a (b c)");
    CHECK(to_string(parse_term("f \\x. x")) == "f (\\x. x)");
    CHECK(parse_term("\xCE\xBBx. x") == parse_term("\\x. x"));
    // binders renamed apart from each other and from free variables
    CHECK(to_string(parse_term("\\x. \\x. x")) == "\\x. \\x1. x1");
    CHECK(to_string(parse_term("x (\\x. x)")) == "x (\\x1. x1)");
    CHECK(parse_term("(((x)))").size() == 1);
    CHECK(parse_term("\\f. \\x. f (f x)").size() == 7);
    CHECK_THROWS_AS(parse_term("\\x x"), SyntaxError);
    CHECK_THROWS_AS(parse_term("(x"), SyntaxError);
    CHECK_THROWS_AS(parse_term(""), SyntaxError);
    CHECK(alpha_equal(parse_term("\\x. x"), parse_term("\\y. y")));
    CHECK_FALSE(alpha_equal(parse_term("\\x. \\y. x"), parse_term("\\x. \\y. y")));
}

TEST_CASE("affine terms") {
    CHECK(is_affine(parse_term("\\x. x")));
    CHECK_FALSE(is_affine(parse_term("\\x. x x")));
    CHECK(is_affine(parse_term("\\f. \\x. f x")));
    CHECK(is_affine(parse_term("\\x. \\y. x")));
    CHECK_FALSE(is_affine(church(2)));
}

TEST_CASE("beta reduction") {
    auto r = beta_normalize(parse_term("(\\x. x) y"), 10);
    CHECK(to_string(r.term) == "y");
    CHECK(r.steps == 1);

    auto nf = beta_normalize(parse_term("\\f. \\x. f x"), 10);
    CHECK(nf.steps == 0);
    CHECK(to_string(nf.term) == "\\f. \\x. f x");

    // capture is avoided when the argument's free variable meets a binder
    Term t = substitute(parse_term("\\y. x y"), "x", Term::var("y"));
    CHECK(alpha_equal(t, parse_term("\\z. y z")));

    auto two_two = beta_normalize(Term::app(church(2), church(2)), 100);
    CHECK_FALSE(two_two.fuel_exhausted);
    CHECK(alpha_equal(two_two.term, church(4)));
    // 2 2 -> \x. 2 (2 x) -> \x. \y. 2 x (2 x y) -> then two steps for each copy of 2 x
    CHECK(two_two.steps == 6);

    auto omega = beta_normalize(parse_term("(\\x. x x) (\\x. x x)"), 25);
    CHECK(omega.fuel_exhausted);
    CHECK(omega.steps == 25);
}

TEST_CASE("affine terms normalize with shrinking steps") {
    Rng rng(1);
    std::size_t redexes = 0;
    for (int i = 0; i < 100; ++i) {
        Term t = random_affine_term(rng, 1 + rng() % 50);
        REQUIRE(is_affine(t));
        REQUIRE(t.size() <= 50);
        auto r = beta_normalize(t, 1000);
        INFO(to_string(t));
        CHECK_FALSE(r.fuel_exhausted);
        CHECK(r.steps <= t.size());
        for (std::size_t k = 1; k < r.sizes.size(); ++k) {
            CHECK(r.sizes[k] < r.sizes[k - 1]);
        }
        CHECK(is_affine(r.term));
        redexes += r.steps;
    }
    CHECK(redexes > 100);
}

TEST_CASE("types and typing") {
    CHECK(to_string(parse_type("a -> b -> c")) == "a -> b -> c");
    CHECK(to_string(parse_type("(a -> b) -> c")) == "(a -> b) -> c");
    CHECK(parse_context("x: a, f: a -> b").size() == 2);
    CHECK(parse_context("").empty());
    CHECK_THROWS_AS(parse_context("x a"), SyntaxError);
    CHECK_THROWS_AS(parse_context("x: a, x: b"), SyntaxError);

    auto d = typecheck({}, parse_term("\\x. x"), parse_type("a -> a"));
    CHECK(d.rule == TypingRule::Abstraction);
    CHECK(check_derivation(d).empty());

    auto d2 = typecheck({}, parse_term("\\f. \\x. f x"), parse_type("(a -> b) -> a -> b"));
    CHECK(check_derivation(d2).empty());
    CHECK(d2.premises[0].premises[0].rule == TypingRule::Application);

    CHECK_THROWS_AS(typecheck({}, parse_term("\\x. x"), parse_type("a -> b")), TypeError);
    try {
        typecheck({}, parse_term("\\f. \\x. f (x x)"), parse_type("(a -> a) -> a -> a"));
        FAIL("expected a type error");
    } catch (const TypeError &e) {
        CHECK(e.subterm() == "x");
    }
    CHECK_THROWS_AS(typecheck({}, parse_term("y"), parse_type("a")), TypeError);

    // argument types are found by unification
    auto d3 = typecheck({}, parse_term("(\\f. f) (\\x. x)"), parse_type("a -> a"));
    CHECK(check_derivation(d3).empty());
    CHECK(to_string(d3.premises[0].type) == "(a -> a) -> a -> a");

    // a binder clashing with the context is renamed
    auto d4 = typecheck(parse_context("x: b"), parse_term("\\x. x"), parse_type("a -> a"));
    CHECK(check_derivation(d4).empty());
    CHECK(to_string(d4.term) == "\\x1. x1");

    CHECK(to_string(*infer_type({}, parse_term("\\f. \\x. f x"))) == "(a -> b) -> a -> b");
    CHECK_FALSE(infer_type({}, parse_term("\\x. x x")).has_value());
    CHECK(to_string(*infer_type(parse_context("y: a"), parse_term("\\x. y"))) == "b -> a");
}

TEST_CASE("star translation of types") {
    CHECK(star_type(parse_type("a")) == F("a"));
    CHECK(star_type(parse_type("a -> b")) == F("?a^ @ b"));
    CHECK(star_type(parse_type("(a -> a) -> a")) == F("?(?a^ @ a)^ @ a"));
    CHECK(star_type(parse_type("(a -> a) -> a")) == F("?(!a * a^) @ a"));
}

TEST_CASE("translation of derivations") {
    SUBCASE("variable") {
        auto d = typecheck(parse_context("x: a"), parse_term("x"), parse_type("a"));
        Translation t = translate(d);
        CHECK(check_proof(*t.proof).ok);
        CHECK(t.proof->conclusion == parse_sequent("|- ?a^, a"));
        CHECK(t.proof->rule == Rule::Dereliction);
        CHECK(t.proof->premises[0]->rule == Rule::Axiom);
    }
    SUBCASE("variable with weakening") {
        auto d = typecheck(parse_context("x: a, y: b -> a"), parse_term("x"), parse_type("a"));
        Translation t = translate(d);
        CHECK(check_proof(*t.proof).ok);
        CHECK(t.proof->conclusion == parse_sequent("|- ?a^, ?(!b * a^), a"));
    }
    SUBCASE("identity") {
        Translation t = translate(typecheck({}, parse_term("\\x. x"), parse_type("a -> a")));
        CHECK(check_proof(*t.proof).ok);
        CHECK(t.proof->conclusion == parse_sequent("|- ?a^ @ a"));
        CHECK(t.proof->rule == Rule::Par);
    }
    SUBCASE("redex normalizes to the identity translation") {
        auto d = typecheck(parse_context("x: a"), parse_term("(\\y. y) x"), parse_type("a"));
        Translation t = translate(d);
        CHECK(check_proof(*t.proof).ok);
        CHECK(count_cuts(*t.proof) == 1);
        auto n = normalize(t.proof, 10000);
        CHECK_FALSE(n.fuel_exhausted);
        CHECK(is_cut_free(*n.proof));
        CHECK(check_proof(*n.proof).ok);
        CHECK(n.proof->conclusion == parse_sequent("|- ?a^, a"));
    }
    SUBCASE("same-typed variables keep their own occurrences") {
        Context ctx = parse_context("x: a, y: a");
        Translation tx = translate(typecheck(ctx, parse_term("x"), parse_type("a")));
        Translation ty = translate(typecheck(ctx, parse_term("y"), parse_type("a")));
        CHECK(tx.proof->conclusion == ty.proof->conclusion);
        CHECK(tx.var_position.at("x") == ty.var_position.at("y"));
        CHECK(tx.var_position.at("x") != tx.var_position.at("y"));
    }
}

TEST_CASE("translations check and have the expected conclusion") {
    Rng rng(7);
    int typed = 0;
    for (int i = 0; i < 400; ++i) {
        Term t = random_closed_term(rng, 14);
        auto ty = infer_type({}, t);
        if (!ty) continue;
        ++typed;
        auto d = typecheck({}, t, *ty);
        REQUIRE(check_derivation(d).empty());
        Translation tr = translate(d);
        INFO(to_string(t) << " : " << to_string(*ty));
        CHECK(check_proof(*tr.proof).ok);
        CHECK(tr.proof->conclusion == translated_sequent({}, *ty));
    }
    CHECK(typed > 50);
}

TEST_CASE("beta steps and translated normal forms") {
    Rng rng(9);
    int pairs = 0;
    int interpreted = 0;
    for (int i = 0; i < 3000 && pairs < 60; ++i) {
        Term m = random_closed_term(rng, 10);
        auto ty = infer_type({}, m);
        if (!ty) continue;
        auto n = beta_step(m);
        if (!n) continue;
        ++pairs;
        INFO(to_string(m) << "  ->  " << to_string(*n) << " : " << to_string(*ty));
        Translation tm = translate(typecheck({}, m, *ty));
        Translation tn = translate(typecheck({}, *n, *ty));
        auto nm = normalize(tm.proof, 200000);
        auto nn = normalize(tn.proof, 200000);
        REQUIRE_FALSE(nm.fuel_exhausted);
        REQUIRE_FALSE(nn.fuel_exhausted);
        CHECK(is_cut_free(*nm.proof));
        CHECK(is_cut_free(*nn.proof));
        CHECK(nm.proof->conclusion == nn.proof->conclusion);

        // Denotations of the two translations agree.
        Rng env_rng(static_cast<unsigned>(i));
        for (int round = 0; round < 2; ++round) {
            coh::AtomEnv env = coh::random_env(env_rng, coh::proof_atoms(*tm.proof), 2);
            try {
                auto a = coh::interpret_proof(*tm.proof, env);
                auto b = coh::interpret_proof(*tn.proof, env);
                CHECK(a.points == b.points);
                ++interpreted;
            } catch (const Error &e) {
                if (e.kind() != ErrorKind::Budget) throw;
            }
        }
    }
    CHECK(pairs >= 40);
    CHECK(interpreted > 40);
}
