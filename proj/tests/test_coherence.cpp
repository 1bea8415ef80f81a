#include "doctest.h"

#include "llw/coherence.hpp"
#include "llw/cut_elim.hpp"
#include "llw/fixtures.hpp"
#include "llw/mall.hpp"

using namespace llw;
using namespace llw::coh;

namespace {

Formula F(const char *s) { return nnf(parse_formula(s)); }

Token T(const char *s) { return parse_token(s); }

AtomEnv env_of(const char *text) { return parse_atom_env(text); }

// Interpretation invariance across every step of a normalization.
std::size_t g_steps = 0;

std::size_t invariance_violations(const ProofPtr &p, const AtomEnv &env) {
    std::size_t bad = 0;
    normalize(p, 100000, [&](const Proof &before, const Proof &after, const ReductionStep &st) {
        ++g_steps;
        Interpretation a = interpret_proof(before, env);
        Interpretation b = interpret_proof(after, env);
        if (permute(a, after.conclusion, st.occurrence_map).points != b.points) {
            ++bad;
            MESSAGE("step " << to_string(st.kind) << " at " << st.path << " changed " << to_string(a) << " into "
                            << to_string(b));
        }
        if (!is_clique(b, env)) {
            ++bad;
        }
    });
    return bad;
}

} // namespace

TEST_CASE("tokens are hash-consed and print canonically") {
    CHECK(Token::set({T("b"), T("a")}) == Token::set({T("a"), T("b"), T("a")}));
    CHECK(T("(a.1,{x,*})") == Token::pair(Token::inj(0, T("a")), Token::set({Token::star(), T("x")})));
    CHECK(to_string(T("{b,a,(a,b).2}")) == "{a,b,(a,b).2}");
    CHECK(to_string(Token::set({T("10"), T("9")})) == "{9,10}");
    CHECK_THROWS_AS(parse_token("(a,"), SyntaxError);
}

TEST_CASE("relations derived from coherence agree") {
    for (int n = 0; n <= 3; ++n) {
        for (const Space &s : all_spaces(n)) {
            const auto &w = s.web();
            CHECK_FALSE(validate_relation(w, [&](Token x, Token y) { return s.coh(x, y); }));
            for (Token x : w) {
                for (Token y : w) {
                    CHECK(s.strict_coh(x, y) == !s.incoh(x, y));
                    CHECK(s.strict_incoh(x, y) == !s.coh(x, y));
                    CHECK(s.coh(x, y) == (!s.incoh(x, y) || x == y));
                }
            }
        }
    }
    CHECK(validate_relation({T("p"), T("q")}, [](Token x, Token y) { return x.label() < y.label(); }));
}

TEST_CASE("clique enumeration") {
    CHECK(enum_cliques(discrete_space(3)).size() == 4);
    CHECK(enum_cliques(codiscrete_space(3)).size() == 8);
    auto nat = enum_cliques(nat_space(1));
    CHECK(nat.size() == 3);
    std::set<Clique> got(nat.begin(), nat.end());
    CHECK(got == std::set<Clique>{{}, {T("0")}, {T("1")}});
    CHECK_THROWS_AS(enum_cliques(discrete_space(13)), Error);
    for (int n = 0; n <= 4; ++n) {
        for (const Space &s : all_spaces(n)) {
            for (const Clique &c : enum_cliques(s)) {
                CHECK(s.is_clique(c));
            }
        }
    }
}

TEST_CASE("webs of the connectives") {
    Space a = codiscrete_space(2, "a");
    Space b = discrete_space(3, "b");
    CHECK(Space::tensor(a, b).web().size() == 6);
    CHECK(Space::par(a, b).web().size() == 6);
    CHECK(Space::with(a, b).web().size() == 5);
    CHECK(Space::plus(a, b).web().size() == 5);
    CHECK(Space::bang(a).web().size() == 4);
    CHECK(Space::bang(b).web().size() == 4);
    CHECK(Space::why_not(b).web().size() == 8);
    CHECK(Space::unit().web().size() == 1);
    CHECK(Space::empty().web().empty());
    // with: different sides always cohere, plus: never
    CHECK(Space::with(a, b).coh(T("b0.2"), T("a0.1")));
    CHECK_FALSE(Space::plus(a, b).coh(T("b0.2"), T("a0.1")));
    // dual swaps strict coherence with strict incoherence
    CHECK(Space::dual(b).coh(T("b0"), T("b1")));
    CHECK_FALSE(Space::dual(a).coh(T("a0"), T("a1")));
    // !E: x and y cohere when their union is a clique
    CHECK(Space::bang(b).coh(T("{b0}"), T("{}")));
    CHECK_FALSE(Space::bang(b).coh(T("{b0}"), T("{b1}")));
    CHECK(Space::why_not(b).contains(T("{b0,b1}")));
    CHECK_FALSE(Space::bang(b).contains(T("{b0,b1}")));
    AtomEnv env{{"a", a}, {"b", b}};
    CHECK(build_space(F("!(a & b)"), env).web().size() == Space::tensor(Space::bang(a), Space::bang(b)).web().size());
    CHECK_THROWS_AS(build_space(F("c"), env), Error);
}

TEST_CASE("cardinality of tensor and with webs") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        Space a = random_space(rng, 4, "a");
        Space b = random_space(rng, 4, "b");
        CHECK(Space::tensor(a, b).web().size() == a.web().size() * b.web().size());
        CHECK(Space::with(a, b).web().size() == a.web().size() + b.web().size());
    }
}

TEST_CASE("with cliques are pairs of cliques") {
    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; m <= 2; ++m) {
            for (const Space &a : all_spaces(n, "a")) {
                for (const Space &b : all_spaces(m, "b")) {
                    LawReport r = check_with_cliques_iso(a, b);
                    CHECK(r.ok());
                }
            }
        }
    }
}

TEST_CASE("atom environment files") {
    AtomEnv env = env_of("# two atoms\na: a0 a1 | a0~a1\nb: b0 b1 b2   # discrete\n");
    REQUIRE(env.size() == 2);
    CHECK(env.at("a").coh(T("a0"), T("a1")));
    CHECK_FALSE(env.at("b").coh(T("b0"), T("b1")));
    CHECK(parse_atom_env(write_atom_env(env)).size() == 2);
    CHECK(write_atom_env(parse_atom_env(write_atom_env(env))) == write_atom_env(env));
    CHECK_THROWS_AS(env_of("a a0"), Error);
    CHECK_THROWS_AS(env_of("a: a0 | a0~zz"), Error);
    CHECK_THROWS_AS(env_of("a: a0\na: a1"), Error);
}

TEST_CASE("axioms interpret as diagonals") {
    AtomEnv env = env_of("a: e1 e2\n");
    ProofPtr ax = build::ax(F("a"));
    Interpretation in = interpret_proof(*ax, env);
    REQUIRE(in.points.size() == 2);
    CHECK(to_string(in) == "{(e1,e1), (e2,e2)}");
    CHECK(is_clique(in, env));
    ProofPtr c = build::cut(build::ax(F("a")), F("a^"), build::ax(F("a")));
    REQUIRE(check_proof(*c).ok);
    CHECK(interpret_proof(*c, env).points == in.points);
}

TEST_CASE("rule clauses on small proofs") {
    AtomEnv env = env_of("a: x y | x~y\nb: u\n");
    ProofPtr one = build::one();
    CHECK(to_string(interpret_proof(*one, env)) == "{*}");
    ProofPtr top = build::top({F("a")});
    CHECK(interpret_proof(*top, env).points.empty());
    ProofPtr ten = build::tensor(build::ax(F("a")), F("a"), build::ax(F("b")), F("b"));
    Interpretation ti = interpret_proof(*ten, env);
    CHECK(ti.points.size() == 2);
    CHECK(is_clique(ti, env));
    ProofPtr der = build::dereliction(build::ax(F("a")), F("a^"));
    Interpretation di = interpret_proof(*der, env);
    CHECK(to_string(di) == "{({x},x), ({y},y)}");
    ProofPtr prom = build::promotion(der, F("a"));
    Interpretation pi = interpret_proof(*prom, env);
    // a is codiscrete, so !a has the four cliques of {x,y}; ?a^ the same sets
    CHECK(pi.points.size() == 4);
    CHECK(is_clique(pi, env));
    ProofPtr w = build::weakening(build::one(), F("?a"));
    CHECK(interpret_proof(*w, env).points.size() == 1);
}

TEST_CASE("fixture interpretations are cliques and survive normalization") {
    Rng rng(17);
    g_steps = 0;
    for (const auto &f : standard_fixtures()) {
        INFO(f.name);
        for (int round = 0; round < 4; ++round) {
            AtomEnv env = random_env(rng, proof_atoms(*f.proof), 3);
            Interpretation in = interpret_proof(*f.proof, env);
            CHECK(is_clique(in, env));
            CHECK(invariance_violations(f.proof, env) == 0);
        }
    }
    CHECK(g_steps > 20);
}

TEST_CASE("contraction against promotion keeps the interpretation") {
    ProofPtr pi = build::weakening(build::dereliction(build::ax(F("b")), F("b^")), F("?b^"));
    ProofPtr left = build::contraction(pi, F("?b^"));
    ProofPtr box = build::promotion(build::dereliction(build::ax(F("b")), F("b^")), F("b"));
    ProofPtr c = build::cut(left, F("?b^"), box);
    REQUIRE(check_proof(*c).ok);
    for (const char *webs : {"b: p q\n", "b: p q | p~q\n", "b: p q r | p~q\n"}) {
        AtomEnv env = env_of(webs);
        CHECK(invariance_violations(c, env) == 0);
    }
}

TEST_CASE("random cut compositions keep their interpretation") {
    Rng rng(2024);
    FormulaShape shape;
    int done = 0;
    for (int attempt = 0; attempt < 4000 && done < 40; ++attempt) {
        Formula a = random_formula(rng, 1 + 2 * (attempt % 3), shape);
        Sequent s1 = random_sequent(rng, 4, shape);
        Sequent s2 = random_sequent(rng, 4, shape);
        std::vector<Formula> f1(s1.begin(), s1.end()), f2(s2.begin(), s2.end());
        f1.push_back(a);
        f2.push_back(dual(a));
        auto r1 = prove_mall(Sequent(f1));
        auto r2 = prove_mall(Sequent(f2));
        if (r1.status != SearchStatus::Provable || r2.status != SearchStatus::Provable) continue;
        ProofPtr c = build::cut(r1.proof, a, r2.proof);
        AtomEnv env = random_env(rng, {"a", "b"}, 3);
        CHECK(invariance_violations(c, env) == 0);
        ++done;
    }
    CHECK(done >= 40);
}

TEST_CASE("stability and linearity") {
    Space e = codiscrete_space(2);
    Space one = Space::unit();
    Token star = Token::star();
    FunctionTable id = tabulate(e, e, [](const Clique &x) { return x; });
    CHECK(is_stable(id));
    CHECK(is_linear(id));
    FunctionTable zero = tabulate(e, one, [](const Clique &) { return Clique{}; });
    CHECK(trace(zero).empty());
    // Answers as soon as any input token is present: x={e0}, y={e1} are
    // compatible, f(x^y)=f(empty)=empty but f(x)^f(y)={*}.
    FunctionTable por = tabulate(e, one, [&](const Clique &x) { return x.empty() ? Clique{} : Clique{star}; });
    CHECK(is_monotone(por));
    auto v = stability_violation(por);
    REQUIRE(v);
    CHECK(v->x.size() == 1);
    CHECK(v->y.size() == 1);
    CHECK_THROWS_AS(trace(por), Error);
    // Needs both tokens: stable, but {e0} u {e1} maps above f({e0}) u f({e1}).
    FunctionTable both = tabulate(e, one, [&](const Clique &x) { return x.size() == 2 ? Clique{star} : Clique{}; });
    CHECK(is_stable(both));
    CHECK_FALSE(is_linear(both));
    CHECK(to_string(trace(both)) == "{({e0,e1},*)}");
    Space single = codiscrete_space(1);
    FunctionTable id1 = tabulate(single, single, [](const Clique &x) { return x; });
    CHECK(to_string(trace(id1)) == "{({e0},e0)}");
}

TEST_CASE("trace and fun are inverse on small spaces") {
    std::vector<Space> spaces;
    for (int n = 0; n <= 2; ++n) {
        for (const Space &s : all_spaces(n)) spaces.push_back(s);
    }
    std::size_t stable_count = 0;
    for (const Space &e : spaces) {
        for (const Space &e2 : spaces) {
            std::vector<FunctionTable> stable;
            for (auto &f : all_monotone_functions(e, e2)) {
                if (is_stable(f)) stable.push_back(f);
            }
            stable_count += stable.size();
            std::vector<Clique> traces;
            for (const auto &f : stable) {
                Clique t = trace(f);
                CHECK(Space::lollipop(Space::bang(e), e2).is_clique(t));
                FunctionTable g = fun(e, e2, t);
                CHECK(g.outputs == f.outputs);
                CHECK(trace(g) == t);
                traces.push_back(t);
            }
            for (std::size_t i = 0; i < stable.size(); ++i) {
                for (std::size_t j = 0; j < stable.size(); ++j) {
                    const bool incl = std::includes(traces[j].begin(), traces[j].end(), traces[i].begin(),
                                                    traces[i].end());
                    CHECK(stable_le(stable[i], stable[j]) == incl);
                }
            }
        }
    }
    CHECK(stable_count > 0);
}

TEST_CASE("fun rejects non-cliques") {
    Space e = codiscrete_space(2);
    Space one = Space::unit();
    CHECK_NOTHROW(fun(discrete_space(2), one, make_clique({T("({e0},*)"), T("({e1},*)")})));
    Clique bad = make_clique({T("({e0},*)"), T("({e1},*)")});
    CHECK_THROWS_AS(fun(e, one, bad), Error);
}

TEST_CASE("comonad and comonoid laws on all small spaces") {
    for (int n = 0; n <= 3; ++n) {
        for (const Space &s : all_spaces(n)) {
            INFO(s.describe());
            LawReport r = check_comonad_laws(s);
            for (const auto &v : r.violations) MESSAGE(v);
            CHECK(r.ok());
            LawReport c = check_comonoid_laws(s);
            for (const auto &v : c.violations) MESSAGE(v);
            CHECK(c.ok());
        }
    }
}

TEST_CASE("exponential isomorphism and arrow characterizations") {
    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; m <= 3; ++m) {
            for (const Space &a : all_spaces(n, "a")) {
                for (const Space &b : all_spaces(m, "b")) {
                    CHECK(check_bang_with_iso(a, b).ok());
                }
            }
        }
    }
    std::size_t disagreements = 0;
    for (int n = 0; n <= 4; ++n) {
        for (int m = 0; m <= 4; ++m) {
            for (const Space &a : all_spaces(n, "a")) {
                for (const Space &b : all_spaces(m, "b")) {
                    disagreements += check_lollipop_characterizations(a, b).violations.size();
                }
            }
        }
    }
    CHECK(disagreements == 0);
}
