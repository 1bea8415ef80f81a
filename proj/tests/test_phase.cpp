#include "doctest.h"

#include "llw/fixtures.hpp"
#include "llw/mall.hpp"
#include "llw/phase.hpp"

using namespace llw;
using namespace llw::phase;

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

bool subset_of(Subset x, Subset y) { return (x & ~y) == 0; }

// Z/2 with bot = {z1}: the unit is outside bot, z1 * z1 = z0.
Model z2_model() {
    return parse_model("elements z0 z1\nrow z0: z0 z1\nrow z1: z1 z0\nbot: z1\natom a: z0\natom b: z1\n");
}

} // namespace

TEST_CASE("orthogonality basics") {
    Model m = z2_model();
    Algebra alg(m);
    CHECK(alg.orth(0) == m.monoid.all());
    CHECK(alg.orth(Subset{1} << m.monoid.unit()) == m.bot);
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        Model r = random_model(rng);
        Algebra ar(r);
        std::uniform_int_distribution<Subset> pick(0, r.monoid.all());
        Subset x = pick(rng);
        Subset y = x | pick(rng);
        CHECK(ar.orth(ar.orth(ar.orth(x))) == ar.orth(x));
        CHECK(subset_of(x, ar.close(x)));
        CHECK(subset_of(ar.orth(y), ar.orth(x)));
        CHECK(ar.orth(x | y) == (ar.orth(x) & ar.orth(y)));
        CHECK(ar.is_fact(ar.orth(x)));
    }
}

TEST_CASE("constants and additive connectives") {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        Model m = random_model(rng);
        Algebra alg(m);
        CHECK(alg.interp(F("bot")) == m.bot);
        CHECK(alg.interp(F("top")) == m.monoid.all());
        CHECK(alg.interp(F("a & b")) == (m.atoms.at("a") & m.atoms.at("b")));
        CHECK(alg.interp(F("1")) == alg.orth(m.bot));
        CHECK(alg.interp(F("0")) == alg.orth(m.monoid.all()));
        CHECK(alg.interp(F("a^")) == alg.orth(m.atoms.at("a")));
    }
    Model m = z2_model();
    CHECK_FALSE(is_valid(m, parse_sequent("|- bot")));
    CHECK(is_valid(m, parse_sequent("|- 1")));
    CHECK_THROWS_AS(interp_formula(m, F("c")), Error);
    CHECK_THROWS_AS(interp_formula(m, F("?a")), Error);
}

TEST_CASE("validity through inclusion") {
    Rng rng(11);
    FormulaShape shape;
    for (int i = 0; i < 1000; ++i) {
        Model m = random_model(rng);
        Algebra alg(m);
        Formula a = random_formula(rng, 1 + rng() % 5, shape);
        Formula b = random_formula(rng, 1 + rng() % 5, shape);
        const bool valid = alg.is_valid(Sequent({a, b}));
        CHECK(valid == subset_of(alg.interp(dual(a)), alg.interp(b)));
        CHECK(valid == subset_of(alg.interp(dual(b)), alg.interp(a)));
        CHECK(alg.is_valid(Sequent({a, dual(a)})));
    }
}

TEST_CASE("biorthogonal closure commutes with products") {
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        Model m = random_model(rng);
        Algebra alg(m);
        std::uniform_int_distribution<Subset> pick(0, m.monoid.all());
        Subset x = pick(rng);
        Subset y = pick(rng);
        CHECK(subset_of(m.monoid.mul(alg.close(x), alg.close(y)), alg.close(m.monoid.mul(x, y))));
        Subset f = alg.orth(pick(rng));
        Subset g = alg.orth(pick(rng));
        Subset h = alg.orth(pick(rng));
        CHECK(alg.par(f, g & h) == (alg.par(f, g) & alg.par(f, h)));
    }
}

TEST_CASE("prover outputs are valid in random models") {
    Rng rng(21);
    FormulaShape shape;
    std::vector<Model> models;
    for (int i = 0; i < 40; ++i) {
        models.push_back(random_model(rng));
    }
    int provable = 0;
    for (int i = 0; i < 400; ++i) {
        Sequent s = random_sequent(rng, 8, shape);
        auto r = prove_mall(s);
        if (r.status != SearchStatus::Provable) continue;
        ++provable;
        for (const Model &m : models) {
            CHECK(is_valid(m, s));
        }
    }
    CHECK(provable > 50);
}

TEST_CASE("a non-provable sequent fails somewhere") {
    Rng rng(5);
    bool refuted = false;
    for (int i = 0; i < 200 && !refuted; ++i) {
        refuted = !is_valid(random_model(rng), parse_sequent("|- a + a^"));
    }
    CHECK(refuted);
}

TEST_CASE("pool interpretation matches formula interpretation") {
    Rng rng(2);
    FormulaPool pool;
    std::vector<Sequent> seqs;
    for (int i = 0; i < 200; ++i) {
        seqs.push_back(random_sequent(rng, 8));
    }
    std::vector<IdSequent> ids;
    for (const auto &s : seqs) {
        ids.push_back(to_ids(pool, s));
    }
    for (int k = 0; k < 20; ++k) {
        Model m = random_model(rng);
        Algebra alg(m);
        auto table = alg.interpret_pool(pool);
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            CHECK(alg.is_valid(ids[i], table) == alg.is_valid(seqs[i]));
        }
    }
}

TEST_CASE("topolinear axioms") {
    Model one_point = parse_model("elements e\nrow e: e\nbot: e\n");
    one_point.closed = all_facts(one_point);
    CHECK(check_topolinear(one_point).ok());

    Rng rng(31);
    int seen = 0;
    for (int i = 0; i < 500 && seen < 20; ++i) {
        Model m = random_model(rng);
        Algebra alg(m);
        if (alg.par(m.bot, m.bot) != m.bot) continue;
        m.closed = std::vector<Subset>{m.bot};
        CHECK(check_topolinear(m).ok());
        Model missing = m;
        missing.closed = std::vector<Subset>{m.monoid.all()};
        if (m.bot != m.monoid.all()) {
            CHECK(check_topolinear(missing).fails(2));
        }
        ++seen;
    }
    CHECK(seen == 20);

    ModelShape shape;
    shape.exponentials = true;
    int nontrivial = 0;
    for (int i = 0; i < 100; ++i) {
        Model m = random_model(rng, shape);
        CHECK(validate_model(m).empty());
        if (m.bot != m.monoid.all()) ++nontrivial;
    }
    CHECK(nontrivial > 50);
}

TEST_CASE("exponential fixtures are valid in topolinear models") {
    Rng rng(41);
    ModelShape shape;
    shape.atoms = {"a", "b", "c", "d", "e", "p", "q", "s", "t", "f"};
    shape.exponentials = true;
    auto fixtures = standard_fixtures();
    for (int i = 0; i < 100; ++i) {
        Model m = random_model(rng, shape);
        REQUIRE(validate_model(m).empty());
        Algebra alg(m);
        for (const auto &f : fixtures) {
            INFO(f.name);
            CHECK(alg.is_valid(f.proof->conclusion));
        }
        // weakening and dereliction pieces
        for (const auto &[name, fact] : m.atoms) {
            CHECK(subset_of(m.bot, alg.why_not(fact)));
            CHECK(subset_of(fact, alg.why_not(fact)));
            CHECK(alg.par(alg.why_not(fact), alg.why_not(fact)) == alg.why_not(fact));
        }
    }
}

TEST_CASE("axiom (4) as written does not validate contraction") {
    Model m = parse_model(R"(
elements t0 t1 t2 t3
row t0: t0 t1 t2 t3
row t1: t1 t2 t3 t3
row t2: t2 t3 t3 t3
row t3: t3 t3 t3 t3
bot: t3
atom a: t2 t3
closed: {t3} {t1 t2 t3} {t0 t1 t2 t3}
)");
    TopolinearReport r = check_topolinear(m);
    CHECK(r.ok());
    CHECK_FALSE(r.validates_contraction());
    Algebra alg(m);
    CHECK(alg.is_valid(parse_sequent("|- ?a^, ?a^, a * a")));
    CHECK_FALSE(alg.is_valid(parse_sequent("|- ?a^, a * a")));
}

TEST_CASE("model files") {
    Rng rng(4);
    ModelShape shape;
    shape.exponentials = true;
    for (int i = 0; i < 30; ++i) {
        Model m = random_model(rng, shape);
        std::string text = write_model(m);
        Model back = parse_model(text);
        CHECK(write_model(back) == text);
    }
    CHECK_THROWS_AS(parse_model("elements x y\nrow x: x y\n"), Error);
    CHECK_THROWS_AS(parse_model("elements x y\nrow x: x x\nrow y: y x\n"), Error);
    CHECK_THROWS_AS(parse_model("elements x\nrow x: x\nbogus\n"), Error);
    CHECK(Monoid::product(Monoid::cyclic(2), Monoid::truncated(2)).size() == 6);
    CHECK_THROWS_AS(Monoid({"x", "y"}, {{0, 1}, {0, 0}}, 0), Error);
}
