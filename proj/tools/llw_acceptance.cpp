// Acceptance driver: one pass/fail line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "llw/checks.hpp"
#include "llw/coherence.hpp"
#include "llw/cut_elim.hpp"
#include "llw/fixtures.hpp"
#include "llw/lambda.hpp"
#include "llw/mall.hpp"
#include "llw/phase.hpp"
#include "llw/tcm.hpp"

using namespace llw;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;   // printed under a failing line
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", s);
    return buf;
}

void note_tally(Outcome &o, const checks::Tally &t) {
    if (!t.ok()) o.pass = false;
    for (const auto &m : t.messages) o.notes.push_back(m);
}

// State shared between criteria: 3 and 6 use the same proofs, 2 feeds 5.
struct Shared {
    FormulaPool pool;
    std::vector<FormulaPool::Id> provable_flat;   // length-prefixed id sequents
    std::size_t provable_count = 0;
    std::vector<std::pair<std::string, ProofPtr>> cut_corpus;
};

// ---------------------------------------------------------------------------

Outcome fixture_fidelity(Shared &) {
    Outcome o;
    const auto t0 = Clock::now();
    const auto all = standard_fixtures();
    std::size_t checked = 0;
    for (const auto &name : core_fixture_names()) {
        const Fixture &f = find_fixture(all, name);
        ProofPtr back = read_proof(write_proof(*f.proof));
        CheckReport r = check_proof(*back);
        if (!r.ok) {
            o.pass = false;
            o.notes.push_back(name + ": " + r.failures.front().path + ": " + r.failures.front().message);
        }
        if (!(back->conclusion == f.proof->conclusion) || write_proof(*back) != write_proof(*f.proof)) {
            o.pass = false;
            o.notes.push_back(name + ": proof file does not round-trip");
        }
        ++checked;
    }
    const double s = seconds_since(t0);
    if (checked != 5) o.pass = false;
    if (s >= 1.0) {
        o.pass = false;
        o.notes.push_back("took " + fmt_seconds(s) + ", limit 1 s");
    }
    o.detail = std::to_string(checked) + " derivations written, read back and checked";
    return o;
}

Outcome prover_agreement(Shared &sh) {
    Outcome o;
    const auto t0 = Clock::now();
    MallEngine engine(sh.pool);
    MallOracle oracle(sh.pool);
    std::size_t disagreements = 0;
    std::size_t budget = 0;
    std::size_t bad_proofs = 0;
    std::size_t sampled_proofs = 0;
    const std::size_t n = for_each_mall_sequent(sh.pool, {"a", "b"}, 8, [&](const IdSequent &s) {
        engine.reset();
        const SearchStatus st = engine.decide(s);
        if (st == SearchStatus::BudgetExceeded) {
            ++budget;
            return;
        }
        const bool p = st == SearchStatus::Provable;
        if (p != oracle.provable(s)) {
            if (disagreements++ < checks::kMessageCap) {
                std::string text;
                for (auto id : s) text += (text.empty() ? "|- " : ", ") + sh.pool.formula(id).text();
                o.notes.push_back("disagreement on " + text);
            }
        }
        if (!p) return;
        sh.provable_flat.push_back(static_cast<FormulaPool::Id>(s.size()));
        sh.provable_flat.insert(sh.provable_flat.end(), s.begin(), s.end());
        // Kernel-check a regular sample of the proofs as well.
        if (sh.provable_count++ % 97 == 0) {
            ++sampled_proofs;
            ProofPtr proof = engine.proof(s);
            std::vector<Formula> fs;
            for (auto id : s) fs.push_back(sh.pool.formula(id));
            if (!check_proof(*proof).ok || !(proof->conclusion == Sequent(fs))) ++bad_proofs;
        }
    });

    Rng rng(20240);
    FormulaShape shape;
    std::size_t random_done = 0;
    while (random_done < 500) {
        Sequent s = random_sequent(rng, 12, shape);
        if (s.total_size() <= 8) continue;   // already covered exhaustively
        SearchResult r = prove_mall(s);
        if (r.status == SearchStatus::BudgetExceeded) {
            ++budget;
            continue;
        }
        if ((r.status == SearchStatus::Provable) != oracle_provable(s)) {
            ++disagreements;
            o.notes.push_back("disagreement on " + render_sequent(s));
        }
        ++random_done;
    }

    const bool pair_ok = prove_mall(parse_sequent("|- a @ a^")).status == SearchStatus::Provable &&
                         prove_mall(parse_sequent("|- a + a^")).status == SearchStatus::NotProvable &&
                         oracle_provable(parse_sequent("|- a @ a^")) &&
                         !oracle_provable(parse_sequent("|- a + a^"));
    const double s = seconds_since(t0);
    o.pass = disagreements == 0 && budget == 0 && bad_proofs == 0 && pair_ok && s < 300.0;
    if (!pair_ok) o.notes.push_back("polarity pair decided wrongly");
    if (budget) o.notes.push_back(std::to_string(budget) + " searches ran out of budget");
    if (bad_proofs) o.notes.push_back(std::to_string(bad_proofs) + " sampled proofs rejected by the kernel");
    if (s >= 300.0) o.notes.push_back("took " + fmt_seconds(s) + ", limit 300 s");
    o.detail = std::to_string(n) + " exhaustive sequents (" + std::to_string(sh.provable_count) + " provable) + " +
               std::to_string(random_done) + " random, " + std::to_string(disagreements) + " disagreements, " +
               std::to_string(sampled_proofs) + " proofs kernel-checked";
    return o;
}

Outcome cut_elimination(Shared &sh) {
    Outcome o;
    for (const auto &f : standard_fixtures()) sh.cut_corpus.emplace_back(f.name, f.proof);
    Rng rng(31337);
    checks::CompositionShape shape;
    shape.max_cut_formula = 9;
    shape.max_side = 6;
    std::size_t composed = 0;
    while (composed < 200) {
        shape.extra_cuts = composed % 4;
        ProofPtr p = checks::random_cut_composition(rng, shape);
        if (!p) {
            o.pass = false;
            o.notes.push_back("could not compose provable pairs");
            break;
        }
        sh.cut_corpus.emplace_back("composition " + std::to_string(++composed), p);
    }
    checks::Tally all;
    std::size_t steps_total = 0;
    for (const auto &[name, p] : sh.cut_corpus) {
        std::size_t steps = 0;
        checks::Tally t = checks::check_normalization(p, 100000, nullptr, &steps);
        for (auto &m : t.messages) m = name + ": " + m;
        all.merge(t);
        steps_total += steps;
    }
    note_tally(o, all);
    o.detail = std::to_string(sh.cut_corpus.size()) + " proofs, " + std::to_string(steps_total) +
               " reduction steps, " + std::to_string(all.violations) + " violations";
    return o;
}

Outcome affine_bound(Shared &) {
    Outcome o;
    Rng rng(4242);
    std::size_t violations = 0;
    std::size_t steps = 0;
    for (int i = 0; i < 100; ++i) {
        lam::Term t = lam::random_affine_term(rng, 1 + rng() % 50);
        auto r = lam::beta_normalize(t, 10000);
        bool ok = !r.fuel_exhausted && r.steps <= t.size() && lam::is_affine(t) && t.size() <= 50;
        for (std::size_t k = 1; k < r.sizes.size(); ++k) ok = ok && r.sizes[k] < r.sizes[k - 1];
        if (!ok) {
            ++violations;
            o.notes.push_back(lam::to_string(t));
        }
        steps += r.steps;
    }
    o.pass = violations == 0;
    o.detail = "100 affine terms, " + std::to_string(steps) + " beta steps, " + std::to_string(violations) +
               " violations";
    return o;
}

Outcome phase_soundness(Shared &sh) {
    Outcome o;
    if (sh.provable_count == 0) {
        o.pass = false;
        o.detail = "needs the provable corpus of criterion 2";
        return o;
    }
    Rng rng(55);
    std::size_t counterexamples = 0;
    std::size_t sizes_seen = 0;
    std::set<std::size_t> sizes;
    const int models = 100;
    for (int k = 0; k < models; ++k) {
        phase::Model m = phase::random_model(rng);
        sizes.insert(m.monoid.size());
        phase::Algebra alg(m);
        auto table = alg.interpret_pool(sh.pool);
        const auto &flat = sh.provable_flat;
        for (std::size_t i = 0; i < flat.size(); i += 1 + flat[i]) {
            std::span<const FormulaPool::Id> s(flat.data() + i + 1, flat[i]);
            if (!alg.is_valid(s, table)) {
                if (counterexamples++ < checks::kMessageCap) {
                    std::string text;
                    for (auto id : s) text += (text.empty() ? "|- " : ", ") + sh.pool.formula(id).text();
                    o.notes.push_back("model " + std::to_string(k) + " refutes " + text);
                }
            }
        }
    }
    sizes_seen = sizes.size();

    // Validity as inclusion, and closure against products.
    std::size_t lemma_failures = 0;
    FormulaShape shape;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) {
        phase::Model m = phase::random_model(rng);
        phase::Algebra alg(m);
        Formula a = random_formula(rng, 1 + rng() % 5, shape);
        Formula b = random_formula(rng, 1 + rng() % 5, shape);
        const bool valid = alg.is_valid(Sequent({a, b}));
        const phase::Subset na = alg.interp(dual(a));
        const phase::Subset ib = alg.interp(b);
        if (valid != ((na & ~ib) == 0)) ++lemma_failures;
        std::uniform_int_distribution<phase::Subset> pick(0, m.monoid.all());
        const phase::Subset x = pick(rng);
        const phase::Subset y = pick(rng);
        const phase::Subset lhs = m.monoid.mul(alg.close(x), alg.close(y));
        if ((lhs & ~alg.close(m.monoid.mul(x, y))) != 0) ++lemma_failures;
    }
    if (lemma_failures) o.notes.push_back(std::to_string(lemma_failures) + " lemma draws failed");
    o.pass = counterexamples == 0 && lemma_failures == 0;
    o.detail = std::to_string(models) + " models (" + std::to_string(sizes_seen) + " monoid sizes) x " +
               std::to_string(sh.provable_count) + " provable sequents, " + std::to_string(counterexamples) +
               " counterexamples; " + std::to_string(draws) + " lemma draws, " + std::to_string(lemma_failures) +
               " failures";
    return o;
}

Outcome coherence_invariance(Shared &sh) {
    Outcome o;
    Rng rng(777);
    checks::Tally all;
    std::size_t steps_total = 0;
    const int envs = 3;
    for (const auto &[name, p] : sh.cut_corpus) {
        for (int k = 0; k < envs; ++k) {
            coh::AtomEnv env = coh::random_env(rng, coh::proof_atoms(*p), 3);
            std::size_t steps = 0;
            checks::Tally t = checks::check_normalization(p, 100000, &env, &steps);
            for (auto &m : t.messages) m = name + " in " + coh::write_atom_env(env) + ": " + m;
            all.merge(t);
            steps_total += steps;
        }
    }
    note_tally(o, all);
    o.detail = std::to_string(sh.cut_corpus.size()) + " proofs x " + std::to_string(envs) + " atom webs, " +
               std::to_string(steps_total) + " steps compared, " + std::to_string(all.violations) + " violations, " +
               std::to_string(all.skipped) + " proofs over the interpretation budget";
    return o;
}

Outcome trace_fun(Shared &) {
    Outcome o;
    const auto t0 = Clock::now();
    checks::Tally t = checks::check_trace_fun(2);
    const double s = seconds_since(t0);
    note_tally(o, t);
    if (s >= 120.0) {
        o.pass = false;
        o.notes.push_back("took " + fmt_seconds(s) + ", limit 120 s");
    }
    o.detail = std::to_string(t.cases) + " checks over webs of at most 2 tokens, " +
               std::to_string(t.violations) + " violations";
    return o;
}

Outcome exponential_laws(Shared &) {
    Outcome o;
    checks::Tally t = checks::check_exponential_laws(3);
    note_tally(o, t);
    o.detail = std::to_string(t.cases) + " checks over webs of at most 3 tokens, " +
               std::to_string(t.violations) + " violations";
    return o;
}

Outcome tcm_forward(Shared &) {
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t machines = 0;
    std::size_t proofs = 0;
    std::size_t failures = 0;
    auto run = [&](const tcm::Machine &m, const tcm::Id &start) {
        auto r = tcm::simulate(m, start, 12);
        if (!r.trace) return false;
        ++machines;
        for (const auto &t : start) {
            ++proofs;
            try {
                ProofPtr p = tcm::synthesize_proof(m, *r.trace, t);
                if (!check_proof(*p).ok || !(p->conclusion == tcm::encode(m, t).full())) {
                    ++failures;
                    o.notes.push_back(tcm::write_machine(m) + " from " + tcm::to_string(start));
                }
            } catch (const Error &e) {
                ++failures;
                o.notes.push_back(e.what());
            }
        }
        return true;
    };
    bool examples = run(tcm::counter_example_machine(), {{"qi", 0, 0}});
    examples = run(tcm::fork_example_machine(), {{"qi", 0, 0}}) && examples;
    if (!examples) o.notes.push_back("an example machine did not accept");
    Rng rng(9001);
    tcm::MachineShape shape;
    std::size_t random_accepting = 0;
    for (int i = 0; i < 100000 && random_accepting < 50; ++i) {
        tcm::Machine m = tcm::random_machine(rng, shape);
        tcm::Id s = tcm::random_id(rng, m, shape);
        if (run(m, s)) ++random_accepting;
    }
    const double s = seconds_since(t0);
    o.pass = examples && failures == 0 && random_accepting == 50 && s < 60.0;
    if (s >= 60.0) o.notes.push_back("took " + fmt_seconds(s) + ", limit 60 s");
    o.detail = std::to_string(machines) + " accepting machines (2 examples + " + std::to_string(random_accepting) +
               " random), " + std::to_string(proofs) + " proofs, " + std::to_string(failures) + " failures";
    return o;
}

Outcome bang_with(Shared &) {
    Outcome o;
    checks::Tally t = checks::check_bang_with(3);
    note_tally(o, t);
    const auto all = standard_fixtures();
    std::size_t directions = 0;
    for (const char *name : {"bang_with", "bang_with_converse"}) {
        const Fixture &f = find_fixture(all, name);
        if (check_proof(*f.proof).ok) {
            ++directions;
        } else {
            o.pass = false;
            o.notes.push_back(std::string(name) + " rejected by the kernel");
        }
    }
    o.detail = std::to_string(t.cases) + " web checks over atom webs of at most 3 tokens, " +
               std::to_string(t.violations) + " violations; " + std::to_string(directions) +
               " of 2 sequent directions checked";
    return o;
}

struct Criterion {
    int number;
    const char *name;
    Outcome (*run)(Shared &);
};

const Criterion kCriteria[] = {
    {1, "fixture fidelity", fixture_fidelity},
    {2, "prover/oracle agreement", prover_agreement},
    {3, "cut elimination", cut_elimination},
    {4, "affine beta bound", affine_bound},
    {5, "phase soundness", phase_soundness},
    {6, "coherence invariance", coherence_invariance},
    {7, "trace/fun isomorphism", trace_fun},
    {8, "comonad and comonoid laws", exponential_laws},
    {9, "counter machine proofs", tcm_forward},
    {10, "exponential isomorphism", bang_with},
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> only;
    bool verbose = false;
    app.add_option("--only", only, "Run just these criteria (5 implies 2, 6 implies 3)");
    app.add_flag("-v,--verbose", verbose, "Print notes for passing criteria too");
    CLI11_PARSE(app, argc, argv);

    std::set<int> selected(only.begin(), only.end());
    if (selected.count(5)) selected.insert(2);
    if (selected.count(6)) selected.insert(3);

    Shared shared;
    int failed = 0;
    for (const auto &c : kCriteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run(shared);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("aborted: ") + e.what();
        }
        const double s = seconds_since(t0);
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.name << "): " << o.detail
                  << " [" << fmt_seconds(s) << "]" << std::endl;
        if (!o.pass || verbose) {
            for (const auto &n : o.notes) std::cout << "    " << n << '\n';
        }
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
