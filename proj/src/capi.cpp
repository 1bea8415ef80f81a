#include "llw/llw.h"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "llw/checks.hpp"
#include "llw/coherence.hpp"
#include "llw/corpus.hpp"
#include "llw/cut_elim.hpp"
#include "llw/error.hpp"
#include "llw/lambda.hpp"
#include "llw/mall.hpp"
#include "llw/phase.hpp"
#include "llw/proof.hpp"
#include "llw/tcm.hpp"

// Handles carry a magic tag so that a wrong or stale pointer is reported
// instead of dereferenced blindly. The tag is cleared on destruction.
template <typename T, std::uint32_t Magic>
struct Handle {
    std::uint32_t magic = Magic;
    T value;

    explicit Handle(T v) : value(std::move(v)) {}
    ~Handle() { magic = 0; }
    bool live() const { return magic == Magic; }
};

struct llw_formula : Handle<llw::Formula, 0x464f524du> {
    using Handle::Handle;
};
struct llw_proof : Handle<llw::ProofPtr, 0x50524f46u> {
    using Handle::Handle;
};
struct llw_machine : Handle<llw::tcm::Machine, 0x54434d4du> {
    using Handle::Handle;
};
struct llw_model : Handle<llw::phase::Model, 0x50484d4fu> {
    using Handle::Handle;
};

namespace {

thread_local std::string g_last_error;

struct CError {
    int status;
    std::string message;
};

[[noreturn]] void raise(int status, std::string message) { throw CError{status, std::move(message)}; }

int status_of(llw::ErrorKind k) {
    switch (k) {
    case llw::ErrorKind::Syntax:
        return LLW_ERR_SYNTAX;
    case llw::ErrorKind::Invalid:
        return LLW_ERR_INVALID;
    case llw::ErrorKind::Budget:
        return LLW_ERR_BUDGET;
    case llw::ErrorKind::Io:
        return LLW_ERR_IO;
    case llw::ErrorKind::Internal:
        break;
    }
    return LLW_ERR_INTERNAL;
}

template <typename F>
int guard(F &&f) {
    try {
        f();
        return LLW_OK;
    } catch (const CError &e) {
        g_last_error = e.message;
        return e.status;
    } catch (const llw::Error &e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return LLW_ERR_INTERNAL;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return LLW_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown exception";
        return LLW_ERR_INTERNAL;
    }
}

template <typename P>
void need(P *p, const char *what) {
    if (!p) raise(LLW_ERR_NULL, std::string(what) + " is null");
}

template <typename H>
const H &live(const H *h, const char *what) {
    need(h, what);
    if (!h->live()) raise(LLW_ERR_HANDLE, std::string(what) + " is not a live handle");
    return *h;
}

char *dup(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put(char **out, const std::string &s) {
    if (out) *out = dup(s);
}

llw::lam::Context context_of(const char *text) { return text ? llw::lam::parse_context(text) : llw::lam::Context{}; }

std::string join_lines(const std::vector<std::string> &lines) {
    std::string out;
    for (const auto &l : lines) out += l + '\n';
    return out;
}

// Triplets naming states the machine lacks would just get stuck; report them.
void known_states(const llw::tcm::Machine &m, const llw::tcm::Id &id) {
    for (const auto &t : id) {
        if (std::find(m.states.begin(), m.states.end(), t.state) == m.states.end()) {
            raise(LLW_ERR_INVALID, "state " + t.state + " of " + llw::tcm::to_string(t) + " is not declared");
        }
    }
}

void fill(llw_tally *t, const llw::checks::Tally &from) {
    t->cases = from.cases;
    t->violations = from.violations;
    t->skipped = from.skipped;
}

int run_suite(int max_web, int limit, llw_tally *tally, char **report,
              llw::checks::Tally (*suite)(int)) {
    return guard([&] {
        need(tally, "tally");
        if (max_web < 0 || max_web > limit) {
            raise(LLW_ERR_BUDGET, "max-web must lie in 0.." + std::to_string(limit));
        }
        auto t = suite(max_web);
        std::string text = join_lines(t.messages);
        fill(tally, t);
        put(report, text);
    });
}

} // namespace

extern "C" {

const char *llw_version(void) { return "0.1.0"; }

const char *llw_status_name(int status) {
    switch (status) {
    case LLW_OK:
        return "ok";
    case LLW_ERR_SYNTAX:
        return "syntax";
    case LLW_ERR_INVALID:
        return "invalid";
    case LLW_ERR_BUDGET:
        return "budget";
    case LLW_ERR_IO:
        return "io";
    case LLW_ERR_NULL:
        return "null";
    case LLW_ERR_HANDLE:
        return "handle";
    case LLW_ERR_INTERNAL:
        return "internal";
    default:
        return "unknown";
    }
}

const char *llw_last_error(void) { return g_last_error.c_str(); }

void llw_free(char *s) { std::free(s); }

// ---- formulas ----

int llw_formula_parse(const char *text, llw_formula **out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new llw_formula(llw::parse_formula(text));
    });
}

void llw_formula_destroy(llw_formula *f) {
    if (f && f->live()) delete f;
}

int llw_formula_render(const llw_formula *f, char **out) {
    return guard([&] {
        const auto &h = live(f, "formula");
        need(out, "out");
        *out = dup(llw::render_formula(h.value));
    });
}

int llw_formula_nnf(const llw_formula *f, llw_formula **out) {
    return guard([&] {
        const auto &h = live(f, "formula");
        need(out, "out");
        *out = new llw_formula(llw::nnf(h.value));
    });
}

int llw_formula_dual(const llw_formula *f, llw_formula **out) {
    return guard([&] {
        const auto &h = live(f, "formula");
        need(out, "out");
        *out = new llw_formula(llw::dual(h.value));
    });
}

int llw_formula_size(const llw_formula *f, size_t *out) {
    return guard([&] {
        const auto &h = live(f, "formula");
        need(out, "out");
        *out = llw::size(h.value);
    });
}

int llw_formula_polarity(const llw_formula *f, const char **out) {
    return guard([&] {
        const auto &h = live(f, "formula");
        need(out, "out");
        *out = llw::to_string(llw::polarity(h.value));
    });
}

int llw_sequent_canonical(const char *text, char **out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = dup(llw::render_sequent(llw::parse_sequent(text)));
    });
}

// ---- proofs ----

int llw_proof_read(const char *text, llw_proof **out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new llw_proof(llw::read_proof(text));
    });
}

void llw_proof_destroy(llw_proof *p) {
    if (p && p->live()) delete p;
}

int llw_proof_write(const llw_proof *p, char **out) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(out, "out");
        *out = dup(llw::write_proof(*h.value));
    });
}

int llw_proof_pretty(const llw_proof *p, char **out) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(out, "out");
        *out = dup(llw::pretty_proof(*h.value));
    });
}

int llw_proof_conclusion(const llw_proof *p, char **out) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(out, "out");
        *out = dup(llw::render_sequent(h.value->conclusion));
    });
}

int llw_proof_node_count(const llw_proof *p, size_t *out) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(out, "out");
        *out = llw::node_count(*h.value);
    });
}

int llw_proof_cut_count(const llw_proof *p, size_t *out) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(out, "out");
        *out = llw::count_cuts(*h.value);
    });
}

int llw_proof_check(const llw_proof *p, int *ok, char **report) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(ok, "ok");
        llw::CheckReport r = llw::check_proof(*h.value);
        std::string text;
        for (const auto &f : r.failures) text += f.path + ": " + f.message + '\n';
        put(report, text);
        *ok = r.ok ? 1 : 0;
    });
}

// ---- search ----

int llw_prove(const char *sequent, const llw_search_limits *limits, int *outcome, size_t *visited,
              llw_proof **proof) {
    return guard([&] {
        need(sequent, "sequent");
        need(outcome, "outcome");
        llw::SearchLimits lim;
        if (limits) {
            if (limits->max_visited) lim.max_visited_sequents = limits->max_visited;
            if (limits->time_budget_ms > 0) lim.time_budget = std::chrono::milliseconds(limits->time_budget_ms);
        }
        llw::SearchResult r = llw::prove_mall(llw::parse_sequent(sequent), lim);
        switch (r.status) {
        case llw::SearchStatus::Provable:
            *outcome = LLW_PROVABLE;
            break;
        case llw::SearchStatus::NotProvable:
            *outcome = LLW_NOT_PROVABLE;
            break;
        case llw::SearchStatus::BudgetExceeded:
            *outcome = LLW_SEARCH_BUDGET;
            break;
        }
        if (visited) *visited = r.visited;
        if (proof) *proof = r.proof ? new llw_proof(r.proof) : nullptr;
    });
}

int llw_oracle_provable(const char *sequent, int *provable) {
    return guard([&] {
        need(sequent, "sequent");
        need(provable, "provable");
        *provable = llw::oracle_provable(llw::parse_sequent(sequent)) ? 1 : 0;
    });
}

// ---- cut elimination ----

int llw_normalize(const llw_proof *p, size_t fuel, llw_proof **out, llw_norm_stats *stats, char **trace) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(out, "out");
        std::string log;
        std::size_t index = 0;
        llw::StepObserver obs;
        if (trace) {
            obs = [&](const llw::Proof &, const llw::Proof &after, const llw::ReductionStep &st) {
                log += llw::describe_step(++index, st, after);
                if (log.empty() || log.back() != '\n') log += '\n';
            };
        }
        llw::NormalizationResult r = llw::normalize(h.value, fuel, obs);
        if (stats) {
            stats->steps = r.stats.steps;
            stats->duplications = r.stats.duplications;
            stats->final_cuts = r.stats.final_cut_count;
            stats->fuel_exhausted = r.fuel_exhausted ? 1 : 0;
        }
        put(trace, log);
        *out = new llw_proof(r.proof);
    });
}

// ---- lambda ----

int llw_lam_normalize(const char *term, size_t fuel, char **normal_form, llw_lam_stats *stats) {
    return guard([&] {
        need(term, "term");
        need(normal_form, "normal_form");
        llw::lam::Term t = llw::lam::parse_term(term);
        auto r = llw::lam::beta_normalize(t, fuel);
        if (stats) {
            stats->steps = r.steps;
            stats->initial_size = t.size();
            stats->final_size = r.term.size();
            stats->fuel_exhausted = r.fuel_exhausted ? 1 : 0;
            stats->affine = llw::lam::is_affine(t) ? 1 : 0;
            stats->sizes_decrease = 1;
            for (std::size_t k = 1; k < r.sizes.size(); ++k) {
                if (r.sizes[k] >= r.sizes[k - 1]) stats->sizes_decrease = 0;
            }
        }
        *normal_form = dup(llw::lam::to_string(r.term));
    });
}

int llw_lam_typecheck(const char *context, const char *term, const char *type, char **derivation) {
    return guard([&] {
        need(term, "term");
        need(type, "type");
        auto d = llw::lam::typecheck(context_of(context), llw::lam::parse_term(term), llw::lam::parse_type(type));
        auto problems = llw::lam::check_derivation(d);
        if (!problems.empty()) raise(LLW_ERR_INTERNAL, "derivation rejected: " + problems.front());
        put(derivation, llw::lam::pretty_derivation(d));
    });
}

int llw_lam_infer(const char *context, const char *term, int *typable, char **type) {
    return guard([&] {
        need(term, "term");
        need(typable, "typable");
        auto ty = llw::lam::infer_type(context_of(context), llw::lam::parse_term(term));
        if (ty) put(type, llw::lam::to_string(*ty));
        *typable = ty ? 1 : 0;
    });
}

int llw_lam_translate(const char *context, const char *term, const char *type, llw_proof **out) {
    return guard([&] {
        need(term, "term");
        need(type, "type");
        need(out, "out");
        auto d = llw::lam::typecheck(context_of(context), llw::lam::parse_term(term), llw::lam::parse_type(type));
        *out = new llw_proof(llw::lam::translate(d).proof);
    });
}

// ---- machines ----

int llw_machine_parse(const char *text, llw_machine **out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new llw_machine(llw::tcm::parse_machine(text));
    });
}

void llw_machine_destroy(llw_machine *m) {
    if (m && m->live()) delete m;
}

int llw_machine_write(const llw_machine *m, char **out) {
    return guard([&] {
        const auto &h = live(m, "machine");
        need(out, "out");
        *out = dup(llw::tcm::write_machine(h.value));
    });
}

int llw_machine_initial(const llw_machine *m, const char **out) {
    return guard([&] {
        const auto &h = live(m, "machine");
        need(out, "out");
        *out = h.value.initial.c_str();
    });
}

int llw_tcm_simulate(const llw_machine *m, const char *id, size_t bound, int *accepted, size_t *steps,
                     char **trace) {
    return guard([&] {
        const auto &h = live(m, "machine");
        need(id, "id");
        need(accepted, "accepted");
        const llw::tcm::Id start = llw::tcm::parse_id(id);
        known_states(h.value, start);
        auto r = llw::tcm::simulate(h.value, start, bound);
        std::string text;
        if (r.trace) {
            std::size_t k = 0;
            for (const auto &s : r.trace->steps) {
                text += "step=" + std::to_string(++k) + " instruction=\"" + llw::tcm::to_string(s.instruction) +
                        "\" on=" + llw::tcm::to_string(s.affected) + " id=\"" + llw::tcm::to_string(s.after) +
                        "\"\n";
            }
        }
        put(trace, text);
        if (steps) *steps = r.trace ? r.trace->steps.size() : 0;
        *accepted = r.trace ? 1 : 0;
    });
}

int llw_tcm_encode(const llw_machine *m, const char *triplet, char **sequent) {
    return guard([&] {
        const auto &h = live(m, "machine");
        need(triplet, "triplet");
        need(sequent, "sequent");
        llw::tcm::validate(h.value);
        const llw::tcm::Triplet t = llw::tcm::parse_triplet(triplet);
        known_states(h.value, llw::tcm::make_id({t}));
        *sequent = dup(llw::render_sequent(llw::tcm::encode(h.value, t).full()));
    });
}

int llw_tcm_prove(const llw_machine *m, const char *id, size_t bound, const char *triplet, llw_proof **out) {
    return guard([&] {
        const auto &h = live(m, "machine");
        need(id, "id");
        need(out, "out");
        const llw::tcm::Id start = llw::tcm::parse_id(id);
        known_states(h.value, start);
        if (!triplet && start.size() != 1) {
            raise(LLW_ERR_INVALID, "the ID has " + std::to_string(start.size()) + " triplets; name one");
        }
        const llw::tcm::Triplet t = triplet ? llw::tcm::parse_triplet(triplet) : start.front();
        if (std::find(start.begin(), start.end(), t) == start.end()) {
            raise(LLW_ERR_INVALID, "triplet " + llw::tcm::to_string(t) + " is not part of " + llw::tcm::to_string(start));
        }
        auto r = llw::tcm::simulate(h.value, start, bound);
        *out = r.trace ? new llw_proof(llw::tcm::synthesize_proof(h.value, *r.trace, t)) : nullptr;
    });
}

// ---- phase models ----

int llw_model_parse(const char *text, llw_model **out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new llw_model(llw::phase::parse_model(text));
    });
}

void llw_model_destroy(llw_model *m) {
    if (m && m->live()) delete m;
}

int llw_model_write(const llw_model *m, char **out) {
    return guard([&] {
        const auto &h = live(m, "model");
        need(out, "out");
        *out = dup(llw::phase::write_model(h.value));
    });
}

int llw_model_check(const llw_model *m, int *ok, int *contraction, char **report) {
    return guard([&] {
        const auto &h = live(m, "model");
        need(ok, "ok");
        auto problems = llw::phase::validate_model(h.value);
        const bool valid = problems.empty();
        bool contracts = true;
        if (h.value.closed) {
            auto rep = llw::phase::check_topolinear(h.value);
            for (auto f : rep.non_idempotent) {
                problems.push_back("closed fact " + llw::phase::to_string(h.value, f) +
                                   " is not idempotent under par");
            }
            contracts = rep.validates_contraction();
        }
        put(report, join_lines(problems));
        *ok = valid ? 1 : 0;
        if (contraction) *contraction = !h.value.closed ? -1 : (valid && contracts) ? 1 : 0;
    });
}

int llw_phase_valid(const llw_model *m, const char *sequent, int *valid) {
    return guard([&] {
        const auto &h = live(m, "model");
        need(sequent, "sequent");
        need(valid, "valid");
        *valid = llw::phase::is_valid(h.value, llw::parse_sequent(sequent)) ? 1 : 0;
    });
}

int llw_phase_interp(const llw_model *m, const char *formula, char **out) {
    return guard([&] {
        const auto &h = live(m, "model");
        need(formula, "formula");
        need(out, "out");
        llw::Formula f = llw::nnf(llw::parse_formula(formula));
        *out = dup(llw::phase::to_string(h.value, llw::phase::interp_formula(h.value, f)));
    });
}

// ---- coherence ----

int llw_coh_interpret(const llw_proof *p, const char *env, size_t *count, int *is_clique, char **points) {
    return guard([&] {
        const auto &h = live(p, "proof");
        need(env, "env");
        llw::coh::AtomEnv e = llw::coh::parse_atom_env(env);
        auto in = llw::coh::interpret_proof(*h.value, e);
        std::vector<llw::coh::Token> toks;
        for (const auto &pt : in.points) toks.push_back(llw::coh::fold_point(pt));
        std::sort(toks.begin(), toks.end(), llw::coh::canonical_less);
        std::string text;
        for (auto t : toks) text += llw::coh::to_string(t) + '\n';
        const bool clique = llw::coh::is_clique(in, e);
        put(points, text);
        if (count) *count = in.points.size();
        if (is_clique) *is_clique = clique ? 1 : 0;
    });
}

int llw_coh_check_laws(int max_web, llw_tally *tally, char **report) {
    return run_suite(max_web, 3, tally, report, &llw::checks::check_exponential_laws);
}

int llw_coh_trace_roundtrip(int max_web, llw_tally *tally, char **report) {
    return run_suite(max_web, 2, tally, report, &llw::checks::check_trace_fun);
}

int llw_coh_bang_with(int max_web, llw_tally *tally, char **report) {
    return run_suite(max_web, 3, tally, report, &llw::checks::check_bang_with);
}

// ---- corpus ----

int llw_corpus_run(const char *manifest_path, unsigned threads, size_t *fixtures, size_t *failures,
                   char **report) {
    return guard([&] {
        need(manifest_path, "manifest_path");
        auto m = llw::corpus::read_manifest(manifest_path);
        llw::corpus::Settings st;
        st.threads = threads;
        auto rep = llw::corpus::run_corpus(m, st);
        put(report, rep.text());
        if (fixtures) *fixtures = rep.items.size();
        if (failures) *failures = rep.failures();
    });
}

} // extern "C"
