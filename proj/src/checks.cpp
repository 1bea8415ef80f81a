#include "llw/checks.hpp"

#include <algorithm>

#include "llw/error.hpp"
#include "llw/mall.hpp"

namespace llw::checks {

void Tally::fail(std::string message) {
    ++violations;
    if (messages.size() < kMessageCap) messages.push_back(std::move(message));
}

void Tally::merge(const Tally &o) {
    cases += o.cases;
    violations += o.violations;
    skipped += o.skipped;
    for (const auto &m : o.messages) {
        if (messages.size() >= kMessageCap) break;
        messages.push_back(m);
    }
}

ProofPtr random_cut_composition(Rng &rng, const CompositionShape &shape) {
    for (std::size_t attempt = 0; attempt < shape.max_attempts; ++attempt) {
        const std::size_t span = shape.max_cut_formula - std::min(shape.min_cut_formula, shape.max_cut_formula);
        const std::size_t size = std::max<std::size_t>(1, shape.min_cut_formula) + rng() % (span + 1);
        Formula a = random_formula(rng, size, shape.formulas);
        Sequent s1 = random_sequent(rng, shape.max_side, shape.formulas);
        Sequent s2 = random_sequent(rng, shape.max_side, shape.formulas);
        std::vector<Formula> f1(s1.begin(), s1.end());
        std::vector<Formula> f2(s2.begin(), s2.end());
        f1.push_back(a);
        f2.push_back(dual(a));
        auto r1 = prove_mall(Sequent(f1));
        if (r1.status != SearchStatus::Provable) continue;
        auto r2 = prove_mall(Sequent(f2));
        if (r2.status != SearchStatus::Provable) continue;
        ProofPtr cur = build::cut(r1.proof, a, r2.proof);
        for (std::size_t k = 0; k < shape.extra_cuts; ++k) {
            for (std::size_t tries = 0; tries < 50; ++tries) {
                const Formula &b = cur->conclusion[rng() % cur->conclusion.size()];
                Sequent side = random_sequent(rng, shape.max_side, shape.formulas);
                std::vector<Formula> fs(side.begin(), side.end());
                fs.push_back(dual(b));
                auto r = prove_mall(Sequent(fs));
                if (r.status != SearchStatus::Provable) continue;
                // alternate sides so cuts nest on both the left and the right
                cur = k % 2 == 0 ? build::cut(cur, b, r.proof) : build::cut(r.proof, dual(b), cur);
                break;
            }
        }
        return cur;
    }
    return nullptr;
}

Tally check_normalization(const ProofPtr &p, std::size_t fuel, const coh::AtomEnv *env, std::size_t *steps) {
    Tally t;
    t.cases = 1;
    bool interp_ok = env != nullptr;
    auto r = normalize(p, fuel, [&](const Proof &before, const Proof &after, const ReductionStep &st) {
        CheckReport rep = check_proof(after);
        if (!rep.ok) {
            t.fail("step " + std::string(to_string(st.kind)) + " at " + st.path + " produced an ill-formed proof (" +
                   rep.failures.front().path + ": " + rep.failures.front().message + ")");
        }
        if (!(after.conclusion == before.conclusion)) {
            t.fail("step " + std::string(to_string(st.kind)) + " at " + st.path + " changed the conclusion");
        }
        if (!interp_ok) return;
        try {
            auto a = coh::interpret_proof(before, *env);
            auto b = coh::interpret_proof(after, *env);
            if (coh::permute(a, after.conclusion, st.occurrence_map).points != b.points) {
                t.fail("step " + std::string(to_string(st.kind)) + " at " + st.path + " changed the interpretation");
            }
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::Budget) throw;
            // interpretation outgrew its limits; stop comparing this proof
            interp_ok = false;
            ++t.skipped;
        }
    });
    if (steps) *steps = r.stats.steps;
    if (r.fuel_exhausted) {
        t.fail("fuel exhausted after " + std::to_string(r.stats.steps) + " steps");
        return t;
    }
    if (!is_cut_free(*r.proof)) t.fail("normal form still has cuts");
    if (!(r.proof->conclusion == p->conclusion)) t.fail("normal form has a different conclusion");
    return t;
}

namespace {

std::vector<coh::Space> spaces_up_to(int max_web, std::string_view prefix) {
    std::vector<coh::Space> out;
    for (int n = 0; n <= max_web; ++n) {
        for (auto &s : coh::all_spaces(n, prefix)) out.push_back(std::move(s));
    }
    return out;
}

void take(Tally &t, const coh::LawReport &r, const std::string &where) {
    t.cases += r.checks;
    for (const auto &v : r.violations) t.fail(where + ": " + v);
}

} // namespace

Tally check_exponential_laws(int max_web) {
    Tally t;
    for (const auto &s : spaces_up_to(max_web, "e")) {
        take(t, coh::check_comonad_laws(s), s.describe());
        take(t, coh::check_comonoid_laws(s), s.describe());
    }
    return t;
}

Tally check_trace_fun(int max_web) {
    Tally t;
    const auto spaces = spaces_up_to(max_web, "e");
    for (const auto &e : spaces) {
        for (const auto &e2 : spaces) {
            const std::string where = e.describe() + " -> " + e2.describe();
            const coh::Space arrow = coh::Space::lollipop(coh::Space::bang(e), e2);
            std::vector<coh::FunctionTable> stable;
            std::vector<coh::Clique> traces;
            for (auto &f : coh::all_monotone_functions(e, e2)) {
                if (!coh::is_stable(f)) continue;
                ++t.cases;
                coh::Clique tr = coh::trace(f);
                if (!arrow.is_clique(tr)) t.fail(where + ": trace is not a clique");
                coh::FunctionTable g = coh::fun(e, e2, tr);
                if (g.outputs != f.outputs) t.fail(where + ": fun(trace f) differs from f");
                if (coh::trace(g) != tr) t.fail(where + ": trace(fun phi) differs from phi");
                stable.push_back(std::move(f));
                traces.push_back(std::move(tr));
            }
            for (std::size_t i = 0; i < stable.size(); ++i) {
                for (std::size_t j = 0; j < stable.size(); ++j) {
                    ++t.cases;
                    const bool incl = std::includes(traces[j].begin(), traces[j].end(), traces[i].begin(),
                                                    traces[i].end());
                    if (coh::stable_le(stable[i], stable[j]) != incl) {
                        t.fail(where + ": stable order disagrees with trace inclusion for " +
                               coh::to_string(traces[i]) + " and " + coh::to_string(traces[j]));
                    }
                }
            }
        }
    }
    return t;
}

Tally check_bang_with(int max_web) {
    Tally t;
    const auto as = spaces_up_to(max_web, "a");
    const auto bs = spaces_up_to(max_web, "b");
    for (const auto &a : as) {
        for (const auto &b : bs) {
            take(t, coh::check_bang_with_iso(a, b), a.describe() + " & " + b.describe());
        }
    }
    return t;
}

} // namespace llw::checks
