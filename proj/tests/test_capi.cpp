// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "llw/llw.h"

namespace {

// Takes ownership of a library string.
std::string take(char *s) {
    std::string out = s ? s : "";
    llw_free(s);
    return out;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kCorpus = std::string(LLW_SOURCE_DIR) + "/corpus/";

} // namespace

TEST_CASE("status names and version") {
    CHECK(std::strlen(llw_version()) > 0);
    CHECK(std::string(llw_status_name(LLW_OK)) == "ok");
    CHECK(std::string(llw_status_name(LLW_ERR_SYNTAX)) == "syntax");
    CHECK(std::string(llw_status_name(LLW_ERR_BUDGET)) == "budget");
    CHECK(std::string(llw_status_name(99)) == "unknown");
    llw_free(nullptr);
}

TEST_CASE("formula handles") {
    llw_formula *f = nullptr;
    REQUIRE(llw_formula_parse("(a * b)^", &f) == LLW_OK);
    char *text = nullptr;
    REQUIRE(llw_formula_render(f, &text) == LLW_OK);
    CHECK(take(text) == "(a * b)^");

    llw_formula *n = nullptr;
    REQUIRE(llw_formula_nnf(f, &n) == LLW_OK);
    REQUIRE(llw_formula_render(n, &text) == LLW_OK);
    CHECK(take(text) == "a^ @ b^");
    const char *pol = nullptr;
    REQUIRE(llw_formula_polarity(n, &pol) == LLW_OK);
    CHECK(std::string(pol) == "negative");
    std::size_t size = 0;
    REQUIRE(llw_formula_size(n, &size) == LLW_OK);
    CHECK(size == 3);

    llw_formula *d = nullptr;
    REQUIRE(llw_formula_dual(n, &d) == LLW_OK);
    REQUIRE(llw_formula_render(d, &text) == LLW_OK);
    CHECK(take(text) == "a * b");

    llw_formula_destroy(d);
    llw_formula_destroy(n);
    llw_formula_destroy(f);
    llw_formula_destroy(nullptr);
}

TEST_CASE("errors carry a status and a message") {
    llw_formula *f = reinterpret_cast<llw_formula *>(0x1);
    CHECK(llw_formula_parse("a * ", &f) == LLW_ERR_SYNTAX);
    CHECK(f == reinterpret_cast<llw_formula *>(0x1));   // untouched on failure
    CHECK(std::strlen(llw_last_error()) > 0);

    CHECK(llw_formula_parse(nullptr, &f) == LLW_ERR_NULL);
    CHECK(llw_formula_parse("a", nullptr) == LLW_ERR_NULL);
    char *text = nullptr;
    CHECK(llw_formula_render(nullptr, &text) == LLW_ERR_NULL);

    // a proof handle passed where a formula is expected
    llw_proof *p = nullptr;
    REQUIRE(llw_proof_read("(ax \"|- a, a^\")", &p) == LLW_OK);
    CHECK(llw_formula_render(reinterpret_cast<const llw_formula *>(p), &text) == LLW_ERR_HANDLE);
    llw_proof_destroy(p);
}

TEST_CASE("sequent canonical form") {
    char *text = nullptr;
    REQUIRE(llw_sequent_canonical("|- b, a^ @ a", &text) == LLW_OK);
    CHECK(take(text) == "|- a^ @ a, b");
    CHECK(llw_sequent_canonical("a, b", &text) == LLW_ERR_SYNTAX);
}

TEST_CASE("proofs: read, check, write") {
    const std::string src = slurp(kCorpus + "proofs/distributivity.llp");
    llw_proof *p = nullptr;
    REQUIRE(llw_proof_read(src.c_str(), &p) == LLW_OK);
    int ok = 0;
    char *report = nullptr;
    REQUIRE(llw_proof_check(p, &ok, &report) == LLW_OK);
    CHECK(ok == 1);
    CHECK(take(report).empty());
    char *text = nullptr;
    REQUIRE(llw_proof_write(p, &text) == LLW_OK);
    CHECK(take(text) == src);
    REQUIRE(llw_proof_conclusion(p, &text) == LLW_OK);
    CHECK(take(text) == "|- (a * b) + (a * c), a^ @ (b^ & c^)");
    std::size_t nodes = 0, cuts = 1;
    REQUIRE(llw_proof_node_count(p, &nodes) == LLW_OK);
    REQUIRE(llw_proof_cut_count(p, &cuts) == LLW_OK);
    CHECK(nodes > 5);
    CHECK(cuts == 0);
    REQUIRE(llw_proof_pretty(p, &text) == LLW_OK);
    CHECK(take(text).find("---") != std::string::npos);
    llw_proof_destroy(p);

    std::string broken = src;
    broken.replace(broken.find("(ax \"|- b, b^\")"), 15, "(ax \"|- b, c^\")");
    REQUIRE(llw_proof_read(broken.c_str(), &p) == LLW_OK);
    REQUIRE(llw_proof_check(p, &ok, &report) == LLW_OK);
    CHECK(ok == 0);
    CHECK(take(report).rfind("/0/0/0", 0) == 0);
    llw_proof_destroy(p);

    CHECK(llw_proof_read("(tensor", &p) == LLW_ERR_SYNTAX);
}

TEST_CASE("proof search") {
    int outcome = -1;
    std::size_t visited = 0;
    llw_proof *p = nullptr;
    REQUIRE(llw_prove("|- a @ a^", nullptr, &outcome, &visited, &p) == LLW_OK);
    CHECK(outcome == LLW_PROVABLE);
    REQUIRE(p != nullptr);
    int ok = 0;
    REQUIRE(llw_proof_check(p, &ok, nullptr) == LLW_OK);
    CHECK(ok == 1);
    llw_proof_destroy(p);

    REQUIRE(llw_prove("|- a + a^", nullptr, &outcome, &visited, &p) == LLW_OK);
    CHECK(outcome == LLW_NOT_PROVABLE);
    CHECK(p == nullptr);

    llw_search_limits tight{1, 0};
    REQUIRE(llw_prove("|- (a * b) + (a * c), a^ @ (b^ & c^)", &tight, &outcome, &visited, &p) == LLW_OK);
    CHECK(outcome == LLW_SEARCH_BUDGET);
    CHECK(p == nullptr);

    int provable = -1;
    REQUIRE(llw_oracle_provable("|- a * b, a^, b^", &provable) == LLW_OK);
    CHECK(provable == 1);
    REQUIRE(llw_oracle_provable("|- a, a^, b", &provable) == LLW_OK);
    CHECK(provable == 0);
    CHECK(llw_oracle_provable("|- !a, ?a^", &provable) == LLW_ERR_INVALID);
}

TEST_CASE("cut elimination") {
    const std::string src = slurp(kCorpus + "proofs/cut_composition_1.llp");
    llw_proof *p = nullptr;
    REQUIRE(llw_proof_read(src.c_str(), &p) == LLW_OK);
    std::size_t cuts = 0;
    REQUIRE(llw_proof_cut_count(p, &cuts) == LLW_OK);
    REQUIRE(cuts > 0);

    llw_proof *nf = nullptr;
    llw_norm_stats st{};
    char *trace = nullptr;
    REQUIRE(llw_normalize(p, 100000, &nf, &st, &trace) == LLW_OK);
    CHECK(st.final_cuts == 0);
    CHECK(st.fuel_exhausted == 0);
    CHECK(st.steps > 0);
    CHECK(!take(trace).empty());
    char *a = nullptr, *b = nullptr;
    REQUIRE(llw_proof_conclusion(p, &a) == LLW_OK);
    REQUIRE(llw_proof_conclusion(nf, &b) == LLW_OK);
    CHECK(take(a) == take(b));
    llw_proof_destroy(nf);

    REQUIRE(llw_normalize(p, 0, &nf, &st, nullptr) == LLW_OK);
    CHECK(st.fuel_exhausted == 1);
    CHECK(st.final_cuts > 0);
    llw_proof_destroy(nf);
    llw_proof_destroy(p);
}

TEST_CASE("lambda terms") {
    char *nf = nullptr;
    llw_lam_stats st{};
    REQUIRE(llw_lam_normalize("(\\x. x) y", 100, &nf, &st) == LLW_OK);
    CHECK(take(nf) == "y");
    CHECK(st.steps == 1);
    CHECK(st.affine == 1);
    CHECK(st.sizes_decrease == 1);

    char *deriv = nullptr;
    REQUIRE(llw_lam_typecheck(nullptr, "\\x. x", "a -> a", &deriv) == LLW_OK);
    CHECK(!take(deriv).empty());
    CHECK(llw_lam_typecheck(nullptr, "\\x. x", "a -> b", &deriv) == LLW_ERR_INVALID);
    CHECK(std::strlen(llw_last_error()) > 0);

    int typable = -1;
    char *type = nullptr;
    REQUIRE(llw_lam_infer(nullptr, "\\x. x x", &typable, &type) == LLW_OK);
    CHECK(typable == 0);
    llw_free(type);
    REQUIRE(llw_lam_infer("f : a -> b", "\\x. f x", &typable, &type) == LLW_OK);
    CHECK(typable == 1);
    CHECK(take(type) == "a -> b");

    llw_proof *p = nullptr;
    REQUIRE(llw_lam_translate(nullptr, "(\\x. x) (\\y. y)", "a -> a", &p) == LLW_OK);
    int ok = 0;
    REQUIRE(llw_proof_check(p, &ok, nullptr) == LLW_OK);
    CHECK(ok == 1);
    llw_proof_destroy(p);
}

TEST_CASE("machines") {
    const std::string src = slurp(kCorpus + "machines/counter.tcm");
    llw_machine *m = nullptr;
    REQUIRE(llw_machine_parse(src.c_str(), &m) == LLW_OK);
    const char *init = nullptr;
    REQUIRE(llw_machine_initial(m, &init) == LLW_OK);
    CHECK(std::string(init) == "qi");

    int accepted = -1;
    std::size_t steps = 0;
    char *trace = nullptr;
    REQUIRE(llw_tcm_simulate(m, "(qi,0,0)", 12, &accepted, &steps, &trace) == LLW_OK);
    CHECK(accepted == 1);
    CHECK(steps == 2);
    CHECK(take(trace).find("step=2 instruction=\"q1 -A qf\"") != std::string::npos);

    char *seq = nullptr;
    REQUIRE(llw_tcm_encode(m, "(qi,0,0)", &seq) == LLW_OK);
    CHECK(take(seq).rfind("|- ", 0) == 0);

    llw_proof *p = nullptr;
    REQUIRE(llw_tcm_prove(m, "(qi,0,0)", 12, nullptr, &p) == LLW_OK);
    REQUIRE(p != nullptr);
    int ok = 0;
    REQUIRE(llw_proof_check(p, &ok, nullptr) == LLW_OK);
    CHECK(ok == 1);
    llw_proof_destroy(p);

    // from (qi,0,1) the counter B never returns to zero
    REQUIRE(llw_tcm_simulate(m, "(qi,0,1)", 12, &accepted, &steps, nullptr) == LLW_OK);
    CHECK(accepted == 0);
    REQUIRE(llw_tcm_prove(m, "(qi,0,1)", 12, nullptr, &p) == LLW_OK);
    CHECK(p == nullptr);

    CHECK(llw_tcm_simulate(m, "(nowhere,0,0)", 12, &accepted, &steps, nullptr) == LLW_ERR_INVALID);
    CHECK(llw_tcm_encode(m, "(nowhere,0,0)", &seq) == LLW_ERR_INVALID);
    llw_machine_destroy(m);
    CHECK(llw_machine_parse("states: q\n", &m) != LLW_OK);
}

TEST_CASE("phase models") {
    const std::string src = slurp(kCorpus + "models/capped.phm");
    llw_model *m = nullptr;
    REQUIRE(llw_model_parse(src.c_str(), &m) == LLW_OK);
    int ok = 0, contraction = -2;
    char *report = nullptr;
    REQUIRE(llw_model_check(m, &ok, &contraction, &report) == LLW_OK);
    CHECK(ok == 1);
    llw_free(report);

    int valid = -1;
    REQUIRE(llw_phase_valid(m, "|- a @ a^", &valid) == LLW_OK);
    CHECK(valid == 1);
    REQUIRE(llw_phase_valid(m, "|- a + a^", &valid) == LLW_OK);
    CHECK(valid == 0);
    char *fact = nullptr;
    REQUIRE(llw_phase_interp(m, "a", &fact) == LLW_OK);
    CHECK(take(fact) == "{t1,t2,t3}");
    llw_model_destroy(m);
}

TEST_CASE("coherence interpretation and suites") {
    const std::string src = slurp(kCorpus + "proofs/par_inversion.llp");
    const std::string env = slurp(kCorpus + "envs/ab.coh");
    llw_proof *p = nullptr;
    REQUIRE(llw_proof_read(src.c_str(), &p) == LLW_OK);
    std::size_t count = 0;
    int clique = 0;
    char *points = nullptr;
    REQUIRE(llw_coh_interpret(p, env.c_str(), &count, &clique, &points) == LLW_OK);
    CHECK(clique == 1);
    CHECK(count > 0);
    llw_free(points);
    CHECK(llw_coh_interpret(p, "a: \n", &count, &clique, &points) != LLW_OK);
    llw_proof_destroy(p);

    llw_tally t{};
    REQUIRE(llw_coh_check_laws(1, &t, nullptr) == LLW_OK);
    CHECK(t.cases > 0);
    CHECK(t.violations == 0);
    REQUIRE(llw_coh_trace_roundtrip(1, &t, nullptr) == LLW_OK);
    CHECK(t.violations == 0);
    REQUIRE(llw_coh_bang_with(1, &t, nullptr) == LLW_OK);
    CHECK(t.violations == 0);
    CHECK(llw_coh_check_laws(9, &t, nullptr) == LLW_ERR_BUDGET);
}

TEST_CASE("corpus runs") {
    std::size_t fixtures = 0, failures = 1;
    char *report = nullptr;
    REQUIRE(llw_corpus_run((kCorpus + "manifest.txt").c_str(), 0, &fixtures, &failures, &report) == LLW_OK);
    CHECK(fixtures >= 20);
    CHECK(failures == 0);
    CHECK(take(report).find("failed=0") != std::string::npos);
    CHECK(llw_corpus_run("/nonexistent/manifest.txt", 0, &fixtures, &failures, nullptr) == LLW_ERR_IO);
}
