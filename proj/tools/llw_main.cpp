// Command-line front end. Talks to the workbench only through the C API.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "llw/llw.h"

namespace {

enum Exit { kSuccess = 0, kNegative = 1, kBudget = 2, kInput = 3 };

// Failed C call: carries the status so main can pick the exit code.
struct ApiFailure {
    int status;
    std::string message;
};

void call(int status) {
    if (status != LLW_OK) throw ApiFailure{status, llw_last_error()};
}

struct Owned {
    char *p = nullptr;
    ~Owned() { llw_free(p); }
    std::string str() const { return p ? p : ""; }
};

template <typename T, void (*Destroy)(T *)>
struct Ptr {
    T *p = nullptr;
    Ptr() = default;
    Ptr(const Ptr &) = delete;
    Ptr &operator=(const Ptr &) = delete;
    ~Ptr() { Destroy(p); }
};

using Proof = Ptr<llw_proof, llw_proof_destroy>;
using Machine = Ptr<llw_machine, llw_machine_destroy>;
using Model = Ptr<llw_model, llw_model_destroy>;
using Formula = Ptr<llw_formula, llw_formula_destroy>;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ApiFailure{LLW_ERR_IO, "cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw ApiFailure{LLW_ERR_IO, "cannot write " + path};
}

// key=value; values with blanks or quotes are quoted.
std::string field(const std::string &key, const std::string &value) {
    bool plain = !value.empty();
    for (char c : value) {
        if (c == ' ' || c == '"' || c == '\t' || c == '\\') plain = false;
    }
    if (plain) return key + "=" + value;
    std::string out = key + "=\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

void kv(const std::string &key, const std::string &value) { std::cout << field(key, value) << '\n'; }
void kv(const std::string &key, std::size_t value) { std::cout << key << '=' << value << '\n'; }
void kv_bool(const std::string &key, bool value) { std::cout << key << '=' << (value ? "true" : "false") << '\n'; }

// Splits the API's line-oriented reports.
std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) {
        if (!l.empty()) out.push_back(l);
    }
    return out;
}

void load_proof(const std::string &path, Proof &p) { call(llw_proof_read(read_file(path).c_str(), &p.p)); }

void emit_proof(const llw_proof *p, const std::string &path) {
    Owned text;
    call(llw_proof_write(p, &text.p));
    write_file(path, text.str());
}

struct ProofSummary {
    std::string conclusion;
    std::size_t nodes = 0;
    std::size_t cuts = 0;
};

ProofSummary summarize(const llw_proof *p) {
    ProofSummary s;
    Owned c;
    call(llw_proof_conclusion(p, &c.p));
    s.conclusion = c.str();
    call(llw_proof_node_count(p, &s.nodes));
    call(llw_proof_cut_count(p, &s.cuts));
    return s;
}

void print_summary(const ProofSummary &s) {
    kv("conclusion", s.conclusion);
    kv("nodes", s.nodes);
    kv("cuts", s.cuts);
}

void print_pretty(const llw_proof *p) {
    Owned text;
    call(llw_proof_pretty(p, &text.p));
    std::cout << text.str();
    if (!text.str().empty() && text.str().back() != '\n') std::cout << '\n';
}

struct Options {
    bool pretty = false;
};

// ---------------------------------------------------------------------------

int cmd_formula(const Options &o, const std::string &text) {
    Formula f, n, d;
    call(llw_formula_parse(text.c_str(), &f.p));
    call(llw_formula_nnf(f.p, &n.p));
    call(llw_formula_dual(n.p, &d.p));
    Owned rf, rn, rd;
    call(llw_formula_render(f.p, &rf.p));
    call(llw_formula_render(n.p, &rn.p));
    call(llw_formula_render(d.p, &rd.p));
    std::size_t size = 0;
    call(llw_formula_size(f.p, &size));
    const char *pol = nullptr;
    call(llw_formula_polarity(n.p, &pol));
    if (o.pretty) {
        std::cout << "formula   " << rf.str() << "\nnnf       " << rn.str() << "\ndual      " << rd.str()
                  << "\nsize      " << size << "\npolarity  " << pol << '\n';
        return kSuccess;
    }
    kv("formula", rf.str());
    kv("nnf", rn.str());
    kv("dual", rd.str());
    kv("size", size);
    kv("polarity", pol);
    return kSuccess;
}

int cmd_check(const Options &o, const std::string &path) {
    Proof p;
    load_proof(path, p);
    int ok = 0;
    Owned report;
    call(llw_proof_check(p.p, &ok, &report.p));
    if (o.pretty) {
        print_pretty(p.p);
        std::cout << (ok ? "proof checks\n" : "proof rejected\n");
        for (const auto &l : lines(report.str())) std::cout << "  at " << l << '\n';
        return ok ? kSuccess : kNegative;
    }
    kv_bool("ok", ok);
    print_summary(summarize(p.p));
    for (const auto &l : lines(report.str())) {
        const auto colon = l.find(": ");
        std::cout << field("failure", l.substr(0, colon)) << ' ' << field("message", l.substr(colon + 2)) << '\n';
    }
    return ok ? kSuccess : kNegative;
}

int cmd_prove(const Options &o, const std::string &sequent, std::size_t max_visited, long time_ms,
              const std::string &emit, bool oracle) {
    llw_search_limits lim{max_visited, time_ms};
    int outcome = 0;
    std::size_t visited = 0;
    Proof p;
    call(llw_prove(sequent.c_str(), &lim, &outcome, &visited, &p.p));
    const char *names[] = {"provable", "not-provable", "budget-exceeded"};
    if (o.pretty) {
        std::cout << names[outcome] << " (" << visited << " sequents visited)\n";
        if (p.p) print_pretty(p.p);
    } else {
        kv("result", names[outcome]);
        kv("visited", visited);
        if (p.p) print_summary(summarize(p.p));
    }
    if (oracle && outcome != LLW_SEARCH_BUDGET) {
        int provable = 0;
        call(llw_oracle_provable(sequent.c_str(), &provable));
        const bool agree = (provable == 1) == (outcome == LLW_PROVABLE);
        if (o.pretty) {
            std::cout << "oracle " << (agree ? "agrees" : "DISAGREES") << '\n';
        } else {
            kv_bool("oracle_agrees", agree);
        }
        if (!agree) return kNegative;
    }
    if (p.p && !emit.empty()) emit_proof(p.p, emit);
    if (outcome == LLW_SEARCH_BUDGET) return kBudget;
    return outcome == LLW_PROVABLE ? kSuccess : kNegative;
}

int cmd_cutelim(const Options &o, const std::string &path, std::size_t fuel, bool trace, const std::string &emit) {
    Proof p, n;
    load_proof(path, p);
    int ok = 0;
    call(llw_proof_check(p.p, &ok, nullptr));
    if (!ok) throw ApiFailure{LLW_ERR_INVALID, "input proof does not check; run 'check' for details"};
    llw_norm_stats st{};
    Owned log;
    call(llw_normalize(p.p, fuel, &n.p, &st, trace ? &log.p : nullptr));
    if (trace) std::cout << log.str();
    const auto before = summarize(p.p);
    const auto after = summarize(n.p);
    if (o.pretty) {
        print_pretty(n.p);
        std::cout << st.steps << " steps, " << st.duplications << " duplications, " << before.nodes << " -> "
                  << after.nodes << " nodes" << (st.fuel_exhausted ? ", fuel exhausted" : "") << '\n';
    } else {
        kv("steps", st.steps);
        kv("duplications", st.duplications);
        kv("nodes_before", before.nodes);
        kv("nodes_after", after.nodes);
        kv("cuts_after", st.final_cuts);
        kv_bool("fuel_exhausted", st.fuel_exhausted);
        kv("conclusion", after.conclusion);
    }
    if (!emit.empty()) emit_proof(n.p, emit);
    return st.fuel_exhausted ? kBudget : kSuccess;
}

// ---- lambda ----

struct LamArgs {
    std::string term;
    std::string type;
    std::string context;
    std::string emit;
    std::size_t fuel = 10000;
};

const char *ctx_or_null(const LamArgs &a) { return a.context.empty() ? nullptr : a.context.c_str(); }

// The given type, or the inferred one. Untypable terms are a negative result.
bool resolve_type(LamArgs &a) {
    if (!a.type.empty()) return true;
    int typable = 0;
    Owned ty;
    call(llw_lam_infer(ctx_or_null(a), a.term.c_str(), &typable, &ty.p));
    if (!typable) return false;
    a.type = ty.str();
    return true;
}

// Type errors are answers, not input errors.
int type_error(const Options &o, const std::string &message) {
    if (o.pretty) {
        std::cout << "type error: " << message << '\n';
    } else {
        kv_bool("typed", false);
        kv("message", message);
    }
    return kNegative;
}

int cmd_lam_typecheck(const Options &o, LamArgs a) {
    if (!resolve_type(a)) return type_error(o, "no simple type");
    Owned deriv;
    const int st = llw_lam_typecheck(ctx_or_null(a), a.term.c_str(), a.type.c_str(), &deriv.p);
    if (st == LLW_ERR_INVALID) return type_error(o, llw_last_error());
    call(st);
    if (o.pretty) {
        std::cout << deriv.str();
        if (!deriv.str().empty() && deriv.str().back() != '\n') std::cout << '\n';
        return kSuccess;
    }
    kv_bool("typed", true);
    kv("type", a.type);
    return kSuccess;
}

int cmd_lam_translate(const Options &o, LamArgs a) {
    if (!resolve_type(a)) return type_error(o, "no simple type");
    Proof p;
    const int st = llw_lam_translate(ctx_or_null(a), a.term.c_str(), a.type.c_str(), &p.p);
    if (st == LLW_ERR_INVALID) return type_error(o, llw_last_error());
    call(st);
    int ok = 0;
    call(llw_proof_check(p.p, &ok, nullptr));
    if (o.pretty) {
        print_pretty(p.p);
    } else {
        kv("type", a.type);
        print_summary(summarize(p.p));
        kv_bool("checks", ok);
    }
    if (!a.emit.empty()) emit_proof(p.p, a.emit);
    return ok ? kSuccess : kNegative;
}

int cmd_lam_norm(const Options &o, const LamArgs &a) {
    Owned nf;
    llw_lam_stats st{};
    call(llw_lam_normalize(a.term.c_str(), a.fuel, &nf.p, &st));
    if (o.pretty) {
        std::cout << nf.str() << '\n'
                  << st.steps << " steps, size " << st.initial_size << " -> " << st.final_size
                  << (st.fuel_exhausted ? ", fuel exhausted" : "") << '\n';
    } else {
        kv("normal_form", nf.str());
        kv("steps", st.steps);
        kv("initial_size", st.initial_size);
        kv("final_size", st.final_size);
        kv_bool("affine", st.affine);
        kv_bool("sizes_decrease", st.sizes_decrease);
        kv_bool("fuel_exhausted", st.fuel_exhausted);
    }
    return st.fuel_exhausted ? kBudget : kSuccess;
}

// ---- machines ----

struct TcmArgs {
    std::string file;
    std::string id;
    std::string triplet;
    std::string emit;
    std::size_t bound = 12;
};

void load_machine(TcmArgs &a, Machine &m) {
    call(llw_machine_parse(read_file(a.file).c_str(), &m.p));
    if (a.id.empty()) {
        const char *init = nullptr;
        call(llw_machine_initial(m.p, &init));
        a.id = std::string("(") + init + ",0,0)";
    }
}

int cmd_tcm_simulate(const Options &o, TcmArgs a) {
    Machine m;
    load_machine(a, m);
    int accepted = 0;
    std::size_t steps = 0;
    Owned trace;
    call(llw_tcm_simulate(m.p, a.id.c_str(), a.bound, &accepted, &steps, &trace.p));
    if (o.pretty) {
        std::cout << a.id << (accepted ? " is accepted" : " is not accepted") << " within " << a.bound
                  << " steps\n";
        if (accepted) std::cout << trace.str();
    } else {
        kv("id", a.id);
        kv_bool("accepted", accepted);
        if (accepted) {
            kv("steps", steps);
            std::cout << trace.str();
        }
    }
    return accepted ? kSuccess : kNegative;
}

int cmd_tcm_encode(const Options &o, TcmArgs a) {
    Machine m;
    load_machine(a, m);
    if (a.triplet.empty()) a.triplet = a.id;
    Owned seq;
    call(llw_tcm_encode(m.p, a.triplet.c_str(), &seq.p));
    if (o.pretty) {
        std::cout << seq.str() << '\n';
    } else {
        kv("triplet", a.triplet);
        kv("sequent", seq.str());
    }
    return kSuccess;
}

int cmd_tcm_prove(const Options &o, TcmArgs a) {
    Machine m;
    load_machine(a, m);
    Proof p;
    call(llw_tcm_prove(m.p, a.id.c_str(), a.bound, a.triplet.empty() ? nullptr : a.triplet.c_str(), &p.p));
    if (!p.p) {
        if (o.pretty) {
            std::cout << a.id << " has no accepting run within " << a.bound << " steps\n";
        } else {
            kv_bool("accepted", false);
        }
        return kNegative;
    }
    int ok = 0;
    call(llw_proof_check(p.p, &ok, nullptr));
    if (o.pretty) {
        print_pretty(p.p);
    } else {
        kv_bool("accepted", true);
        print_summary(summarize(p.p));
        kv_bool("checks", ok);
    }
    if (!a.emit.empty()) emit_proof(p.p, a.emit);
    return ok ? kSuccess : kNegative;
}

// ---- phase ----

int cmd_phase_check(const Options &o, const std::string &path) {
    Model m;
    call(llw_model_parse(read_file(path).c_str(), &m.p));
    int ok = 0;
    int contraction = 0;
    Owned report;
    call(llw_model_check(m.p, &ok, &contraction, &report.p));
    if (o.pretty) {
        Owned text;
        call(llw_model_write(m.p, &text.p));
        std::cout << text.str() << (ok ? "model is well formed" : "model has problems")
                  << (contraction == 1 ? ", contraction is sound\n" : contraction == 0 ? ", contraction is unsound\n" : "\n");
        for (const auto &l : lines(report.str())) std::cout << "  " << l << '\n';
    } else {
        kv_bool("ok", ok);
        if (contraction >= 0) kv_bool("contraction", contraction);
        for (const auto &l : lines(report.str())) kv("problem", l);
    }
    return ok ? kSuccess : kNegative;
}

int cmd_phase_valid(const Options &o, const std::string &sequent, const std::string &path) {
    Model m;
    call(llw_model_parse(read_file(path).c_str(), &m.p));
    int valid = 0;
    call(llw_phase_valid(m.p, sequent.c_str(), &valid));
    Owned canon;
    call(llw_sequent_canonical(sequent.c_str(), &canon.p));
    if (o.pretty) {
        std::cout << canon.str() << (valid ? " is valid" : " is not valid") << " in " << path << '\n';
    } else {
        kv("sequent", canon.str());
        kv_bool("valid", valid);
    }
    return valid ? kSuccess : kNegative;
}

// ---- coherence ----

int cmd_coh_interpret(const Options &o, const std::string &path, const std::string &atoms) {
    Proof p;
    load_proof(path, p);
    std::size_t count = 0;
    int clique = 0;
    Owned points;
    call(llw_coh_interpret(p.p, read_file(atoms).c_str(), &count, &clique, &points.p));
    if (o.pretty) {
        std::cout << count << " tokens" << (clique ? "" : " (NOT a clique)") << '\n' << points.str();
    } else {
        kv("points", count);
        kv_bool("clique", clique);
        for (const auto &l : lines(points.str())) kv("token", l);
    }
    return clique ? kSuccess : kNegative;
}

int cmd_coh_suite(const Options &o, const char *name, int (*suite)(int, llw_tally *, char **), int max_web) {
    llw_tally t{};
    Owned report;
    call(suite(max_web, &t, &report.p));
    if (o.pretty) {
        std::cout << name << ": " << t.cases << " checks, " << t.violations << " violations\n";
        for (const auto &l : lines(report.str())) std::cout << "  " << l << '\n';
    } else {
        kv("suite", name);
        kv("max_web", static_cast<std::size_t>(max_web));
        kv("checks", t.cases);
        kv("violations", t.violations);
        for (const auto &l : lines(report.str())) kv("violation", l);
    }
    return t.violations == 0 ? kSuccess : kNegative;
}

// ---- corpus ----

int cmd_corpus(const Options &o, const std::string &manifest, unsigned threads) {
    std::size_t fixtures = 0;
    std::size_t failures = 0;
    Owned report;
    call(llw_corpus_run(manifest.c_str(), threads, &fixtures, &failures, &report.p));
    if (o.pretty) {
        for (const auto &l : lines(report.str())) {
            if (l.rfind("failure=", 0) == 0) std::cout << "  " << l << '\n';
        }
        std::cout << fixtures - failures << "/" << fixtures << " fixtures pass\n";
    } else {
        std::cout << report.str();
    }
    return failures == 0 ? kSuccess : kNegative;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Linear logic workbench"};
    app.set_version_flag("--version", std::string(llw_version()));
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_flag("--pretty", opt.pretty, "Human-readable output instead of key=value lines");

    std::function<int()> action;

    std::string text;
    auto *formula = app.add_subcommand("formula", "Parse a formula and show its NNF, dual, size and polarity");
    formula->add_option("formula", text, "Formula text")->required();
    formula->callback([&] { action = [&] { return cmd_formula(opt, text); }; });

    std::string path;
    auto *check = app.add_subcommand("check", "Check a proof file");
    check->add_option("proof", path, "Proof file (.llp)")->required();
    check->callback([&] { action = [&] { return cmd_check(opt, path); }; });

    std::size_t max_visited = 0;
    long time_ms = 0;
    std::string emit;
    bool oracle = false;
    auto *prove = app.add_subcommand("prove", "Cut-free MALL proof search");
    prove->add_option("sequent", text, "Sequent, e.g. \"|- a, a^\"")->required();
    prove->add_option("--max-visited", max_visited, "Bound on distinct sequents examined");
    prove->add_option("--time-ms", time_ms, "Time budget in milliseconds");
    prove->add_option("--emit", emit, "Write the proof to this file");
    prove->add_flag("--oracle", oracle, "Also run the strategy-free enumeration and compare");
    prove->callback([&] { action = [&] { return cmd_prove(opt, text, max_visited, time_ms, emit, oracle); }; });

    std::size_t fuel = 100000;
    bool trace = false;
    auto *cutelim = app.add_subcommand("cutelim", "Eliminate the cuts of a proof");
    cutelim->add_option("proof", path, "Proof file (.llp)")->required();
    cutelim->add_option("--fuel", fuel, "Maximum number of reduction steps");
    cutelim->add_flag("--trace", trace, "Print one line per reduction step");
    cutelim->add_option("--emit", emit, "Write the normal form to this file");
    cutelim->callback([&] { action = [&] { return cmd_cutelim(opt, path, fuel, trace, emit); }; });

    LamArgs lam_args;
    auto *lam = app.add_subcommand("lam", "Simply typed lambda calculus");
    lam->require_subcommand(1);
    auto add_typing = [&](CLI::App *c) {
        c->add_option("term", lam_args.term, "Term, e.g. \"\\\\f x. f x\"")->required();
        c->add_option("--type", lam_args.type, "Type, e.g. \"(a -> b) -> a -> b\"; inferred when omitted");
        c->add_option("--context", lam_args.context, "Typing context, e.g. \"x: a, f: a -> b\"");
    };
    auto *lam_tc = lam->add_subcommand("typecheck", "Check a term against a type");
    add_typing(lam_tc);
    lam_tc->callback([&] { action = [&] { return cmd_lam_typecheck(opt, lam_args); }; });
    auto *lam_tr = lam->add_subcommand("translate", "Translate a typing derivation into a proof");
    add_typing(lam_tr);
    lam_tr->add_option("--emit", lam_args.emit, "Write the proof to this file");
    lam_tr->callback([&] { action = [&] { return cmd_lam_translate(opt, lam_args); }; });
    auto *lam_norm = lam->add_subcommand("norm", "Beta-normalize a term, leftmost outermost");
    lam_norm->add_option("term", lam_args.term, "Term")->required();
    lam_norm->add_option("--fuel", lam_args.fuel, "Maximum number of beta steps");
    lam_norm->callback([&] { action = [&] { return cmd_lam_norm(opt, lam_args); }; });

    TcmArgs tcm_args;
    auto *tcm = app.add_subcommand("tcm", "Two counter machines with fork");
    tcm->require_subcommand(1);
    auto add_machine = [&](CLI::App *c) {
        c->add_option("machine", tcm_args.file, "Machine file")->required();
        c->add_option("--id", tcm_args.id, "Start ID, e.g. \"(qi,0,0) (q1,2,0)\"; default (init,0,0)");
    };
    auto *tcm_sim = tcm->add_subcommand("simulate", "Search for a shortest accepting run");
    add_machine(tcm_sim);
    tcm_sim->add_option("--bound", tcm_args.bound, "Maximum number of transitions");
    tcm_sim->callback([&] { action = [&] { return cmd_tcm_simulate(opt, tcm_args); }; });
    auto *tcm_enc = tcm->add_subcommand("encode", "Print the sequent encoding a triplet");
    add_machine(tcm_enc);
    tcm_enc->add_option("--triplet", tcm_args.triplet, "Triplet, e.g. \"(qi,0,0)\"; default the start ID");
    tcm_enc->callback([&] { action = [&] { return cmd_tcm_encode(opt, tcm_args); }; });
    auto *tcm_prove = tcm->add_subcommand("prove-accepting", "Build the proof of an accepted triplet's encoding");
    add_machine(tcm_prove);
    tcm_prove->add_option("--bound", tcm_args.bound, "Maximum number of transitions");
    tcm_prove->add_option("--triplet", tcm_args.triplet, "Which triplet of the ID to prove");
    tcm_prove->add_option("--emit", tcm_args.emit, "Write the proof to this file");
    tcm_prove->callback([&] { action = [&] { return cmd_tcm_prove(opt, tcm_args); }; });

    std::string model;
    auto *phase = app.add_subcommand("phase", "Phase semantics");
    phase->require_subcommand(1);
    auto *ph_check = phase->add_subcommand("check-model", "Validate a model file");
    ph_check->add_option("model", model, "Model file (.phm)")->required();
    ph_check->callback([&] { action = [&] { return cmd_phase_check(opt, model); }; });
    auto *ph_valid = phase->add_subcommand("valid", "Decide validity of a sequent in a model");
    ph_valid->add_option("sequent", text, "Sequent")->required();
    ph_valid->add_option("--model", model, "Model file (.phm)")->required();
    ph_valid->callback([&] { action = [&] { return cmd_phase_valid(opt, text, model); }; });

    std::string atoms;
    int max_web = 0;
    auto *coh = app.add_subcommand("coh", "Coherence spaces");
    coh->require_subcommand(1);
    auto *coh_int = coh->add_subcommand("interpret", "Interpret a proof as a clique");
    coh_int->add_option("proof", path, "Proof file (.llp)")->required();
    coh_int->add_option("--atoms", atoms, "Atom environment file")->required();
    coh_int->callback([&] { action = [&] { return cmd_coh_interpret(opt, path, atoms); }; });
    auto *coh_laws = coh->add_subcommand("check-laws", "Comonad and comonoid laws on all small spaces");
    coh_laws->add_option("--max-web", max_web, "Largest web size (at most 3)")->default_val(3);
    coh_laws->callback([&] {
        action = [&] { return cmd_coh_suite(opt, "check-laws", llw_coh_check_laws, max_web); };
    });
    auto *coh_rt = coh->add_subcommand("trace-roundtrip", "trace/fun inverse on all stable maps of small spaces");
    coh_rt->add_option("--max-web", max_web, "Largest web size (at most 2)")->default_val(2);
    coh_rt->callback([&] {
        action = [&] { return cmd_coh_suite(opt, "trace-roundtrip", llw_coh_trace_roundtrip, max_web); };
    });
    auto *coh_bw = coh->add_subcommand("bang-with", "Web bijection between !(A&B) and !A*!B");
    coh_bw->add_option("--max-web", max_web, "Largest web size (at most 3)")->default_val(3);
    coh_bw->callback([&] { action = [&] { return cmd_coh_suite(opt, "bang-with", llw_coh_bang_with, max_web); }; });

    std::string manifest;
    unsigned threads = 0;
    auto *corpus = app.add_subcommand("corpus", "Run a fixture manifest");
    corpus->add_option("manifest", manifest, "Manifest file")->required();
    corpus->add_option("--threads", threads, "Worker threads (0: one per hardware thread)");
    corpus->callback([&] { action = [&] { return cmd_corpus(opt, manifest, threads); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? kSuccess : kInput;
    }
    try {
        return action ? action() : kInput;
    } catch (const ApiFailure &f) {
        std::cout.flush();
        std::cerr << field("error", llw_status_name(f.status)) << ' ' << field("message", f.message) << '\n';
        return f.status == LLW_ERR_BUDGET ? kBudget : kInput;
    }
}
