#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "llw/checks.hpp"
#include "llw/corpus.hpp"
#include "llw/fixtures.hpp"
#include "llw/mall.hpp"

using namespace llw;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = fs::path(LLW_SOURCE_DIR) / "corpus";

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Scratch directory removed at scope exit.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("llw_corpus_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    void write(const std::string &name, const std::string &text) const { std::ofstream(path / name) << text; }
};

} // namespace

TEST_CASE("shipped fixture files match the built-in derivations") {
    for (const auto &f : standard_fixtures()) {
        INFO(f.name);
        const fs::path file = kCorpus / "proofs" / (f.name + ".llp");
        REQUIRE(fs::exists(file));
        CHECK(slurp(file) == write_proof(*f.proof));
    }
}

TEST_CASE("shipped manifest passes") {
    auto m = corpus::read_manifest(kCorpus / "manifest.txt");
    CHECK(m.entries.size() >= 20);
    auto rep = corpus::run_corpus(m);
    for (const auto &it : rep.items) {
        for (const auto &o : it.outcomes) {
            INFO(it.path << " " << corpus::to_string(o.tag) << ": " << o.detail);
            CHECK(o.pass);
        }
    }
    CHECK(rep.failures() == 0);
}

TEST_CASE("empty manifest passes with no fixtures") {
    TempDir d;
    d.write("m.txt", "# nothing here\n\n");
    auto rep = corpus::run_corpus(corpus::read_manifest(d.path / "m.txt"));
    CHECK(rep.items.empty());
    CHECK(rep.failures() == 0);
    CHECK(rep.text() == "fixtures=0 passed=0 failed=0\n");
}

TEST_CASE("a corrupted proof is one failure located at its node") {
    TempDir d;
    std::string text = slurp(kCorpus / "proofs" / "distributivity.llp");
    const std::string leaf = "(ax \"|- b, b^\")";
    REQUIRE(text.find(leaf) != std::string::npos);
    text.replace(text.find(leaf), leaf.size(), "(ax \"|- b, c^\")");
    d.write("broken.llp", text);
    d.write("fine.seq", "|- a @ a^\n");
    d.write("m.txt", "broken.llp check-ok\nfine.seq provable\n");
    auto rep = corpus::run_corpus(corpus::read_manifest(d.path / "m.txt"));
    REQUIRE(rep.items.size() == 2);
    CHECK(rep.failures() == 1);
    CHECK_FALSE(rep.items[0].pass());
    CHECK(rep.items[1].pass());
    const std::string &detail = rep.items[0].outcomes[0].detail;
    CHECK(detail.rfind("node /0/0/0", 0) == 0);
    CHECK(rep.text().find("failure=broken.llp tag=check-ok") != std::string::npos);
}

TEST_CASE("wrong expectations are reported per tag") {
    TempDir d;
    d.write("em.seq", "|- a + a^\n");
    d.write("m.txt", "em.seq provable valid-all-models\n");
    auto rep = corpus::run_corpus(corpus::read_manifest(d.path / "m.txt"));
    REQUIRE(rep.items.size() == 1);
    REQUIRE(rep.items[0].outcomes.size() == 2);
    CHECK_FALSE(rep.items[0].outcomes[0].pass);
    CHECK(rep.items[0].outcomes[0].detail == "prover says not-provable");
    CHECK_FALSE(rep.items[0].outcomes[1].pass);
}

TEST_CASE("malformed manifests are rejected") {
    TempDir d;
    d.write("x.seq", "|- 1\n");
    CHECK_THROWS_AS(corpus::parse_manifest("x.seq\n", d.path), SyntaxError);
    CHECK_THROWS_AS(corpus::parse_manifest("x.seq proven\n", d.path), SyntaxError);
    CHECK_THROWS_AS(corpus::parse_manifest("x.seq cutfree-after\n", d.path), SyntaxError);
    CHECK_THROWS_AS(corpus::parse_manifest("missing.llp check-ok\n", d.path), Error);
    CHECK(corpus::parse_manifest("x.seq provable # trailing comment\n", d.path).entries.size() == 1);
}

TEST_CASE("corpus reports do not depend on the thread count") {
    auto m = corpus::read_manifest(kCorpus / "manifest.txt");
    corpus::Settings one;
    one.threads = 1;
    corpus::Settings four;
    four.threads = 4;
    CHECK(corpus::run_corpus(m, one).text() == corpus::run_corpus(m, four).text());
}

TEST_CASE("random cut compositions") {
    Rng rng(8);
    checks::CompositionShape shape;
    shape.extra_cuts = 2;
    for (int i = 0; i < 30; ++i) {
        ProofPtr p = checks::random_cut_composition(rng, shape);
        REQUIRE(p);
        CHECK(check_proof(*p).ok);
        CHECK(count_cuts(*p) >= 1);
        CHECK(checks::check_normalization(p, 100000).ok());
    }
    // an impossible shape gives up
    checks::CompositionShape none;
    none.formulas.atoms = {"a"};
    none.formulas.units = false;
    none.max_side = 0;
    none.min_cut_formula = 1;
    none.max_cut_formula = 1;
    none.max_attempts = 5;
    Rng r2(1);
    CHECK(random_sequent(r2, 0, none.formulas).empty());
    CHECK(checks::random_cut_composition(r2, none) == nullptr);
}

TEST_CASE("normalization checks catch fuel exhaustion") {
    Rng rng(3);
    checks::CompositionShape shape;
    shape.min_cut_formula = 3;
    shape.max_cut_formula = 7;
    shape.extra_cuts = 2;
    ProofPtr p;
    std::size_t steps = 0;
    for (int i = 0; i < 50 && steps < 3; ++i) {
        p = checks::random_cut_composition(rng, shape);
        REQUIRE(p);
        REQUIRE(checks::check_normalization(p, 100000, nullptr, &steps).ok());
    }
    REQUIRE(steps >= 3);
    checks::Tally t = checks::check_normalization(p, 1);
    CHECK_FALSE(t.ok());
    REQUIRE_FALSE(t.messages.empty());
    CHECK(t.messages.front().find("fuel exhausted") == 0);
}

TEST_CASE("semantic suites on small webs") {
    CHECK(checks::check_exponential_laws(2).ok());
    checks::Tally tf = checks::check_trace_fun(1);
    CHECK(tf.ok());
    CHECK(tf.cases > 0);
    CHECK(checks::check_bang_with(2).ok());
}
