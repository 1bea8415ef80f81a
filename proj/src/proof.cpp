#include "llw/proof.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace llw {

namespace {

struct RuleInfo {
    Rule rule;
    const char *name;
    std::size_t arity;
};

constexpr RuleInfo kRules[] = {
    {Rule::Axiom, "ax", 0},        {Rule::Cut, "cut", 2},
    {Rule::Tensor, "tensor", 2},   {Rule::Par, "par", 1},
    {Rule::One, "one", 0},         {Rule::Bot, "bot", 1},
    {Rule::Top, "top", 0},         {Rule::With, "with", 2},
    {Rule::PlusL, "plusl", 1},     {Rule::PlusR, "plusr", 1},
    {Rule::Dereliction, "der", 1}, {Rule::Promotion, "prom", 1},
    {Rule::Contraction, "contr", 1}, {Rule::Weakening, "weak", 1},
};

// Number of principal positions a rule expects.
std::size_t principal_count(Rule r) {
    switch (r) {
    case Rule::Axiom: return 2;
    case Rule::Cut: return 0;
    default: return 1;
    }
}

std::string quote(const Formula &f) { return "'" + f.text() + "'"; }

bool contains(const std::vector<int> &v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

} // namespace

const char *rule_name(Rule r) {
    for (const auto &info : kRules) {
        if (info.rule == r) {
            return info.name;
        }
    }
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    for (const auto &info : kRules) {
        if (name == info.name) {
            return info.rule;
        }
    }
    return std::nullopt;
}

std::size_t rule_arity(Rule r) {
    for (const auto &info : kRules) {
        if (info.rule == r) {
            return info.arity;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Rule shape

std::vector<Formula> active_formulas(const Proof &p, std::size_t premise) {
    const Sequent &c = p.conclusion;
    if (p.rule == Rule::Cut) {
        if (!p.cut_formula || !p.cut_formula->is_nnf()) {
            return {};
        }
        return {premise == 0 ? *p.cut_formula : dual(*p.cut_formula)};
    }
    if (p.principal.empty() || p.principal[0] < 0 || static_cast<std::size_t>(p.principal[0]) >= c.size()) {
        return {};
    }
    const Formula &f = c[static_cast<std::size_t>(p.principal[0])];
    switch (p.rule) {
    case Rule::Tensor:
        if (f.kind() != Connective::Tensor) return {};
        return {premise == 0 ? f.left() : f.right()};
    case Rule::Par:
        if (f.kind() != Connective::Par) return {};
        return {f.left(), f.right()};
    case Rule::With:
        if (f.kind() != Connective::With) return {};
        return {premise == 0 ? f.left() : f.right()};
    case Rule::PlusL:
        if (f.kind() != Connective::Plus) return {};
        return {f.left()};
    case Rule::PlusR:
        if (f.kind() != Connective::Plus) return {};
        return {f.right()};
    case Rule::Dereliction:
        if (f.kind() != Connective::WhyNot) return {};
        return {f.body()};
    case Rule::Promotion:
        if (f.kind() != Connective::OfCourse) return {};
        return {f.body()};
    case Rule::Contraction:
        if (f.kind() != Connective::WhyNot) return {};
        return {f, f};
    default:
        return {};
    }
}

namespace {

// Conclusion positions that premise k must supply from its context.
std::vector<int> designated_positions(const Proof &p, std::size_t k) {
    std::vector<int> out;
    const int n = static_cast<int>(p.conclusion.size());
    if (p.rule == Rule::Tensor || p.rule == Rule::Cut) {
        if (k == 0) {
            return p.split;
        }
        for (int t = 0; t < n; ++t) {
            if (!contains(p.principal, t) && !contains(p.split, t)) {
                out.push_back(t);
            }
        }
        return out;
    }
    for (int t = 0; t < n; ++t) {
        if (!contains(p.principal, t)) {
            out.push_back(t);
        }
    }
    return out;
}

} // namespace

std::optional<Wiring> default_wiring(const Proof &p, std::size_t premise) {
    if (premise >= p.premises.size() || !p.premises[premise]) {
        return std::nullopt;
    }
    const Sequent &pc = p.premises[premise]->conclusion;
    const std::vector<Formula> slots = active_formulas(p, premise);
    const std::vector<int> targets = designated_positions(p, premise);
    if (slots.size() + targets.size() != pc.size()) {
        return std::nullopt;
    }
    Wiring w(pc.size(), kUnwired);
    auto take = [&](const Formula &f, int target) {
        for (std::size_t j = 0; j < pc.size(); ++j) {
            if (w[j] == kUnwired && pc[j] == f) {
                w[j] = target;
                return true;
            }
        }
        return false;
    };
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (!take(slots[s], slot_target(static_cast<int>(s)))) {
            return std::nullopt;
        }
    }
    for (int t : targets) {
        if (t < 0 || static_cast<std::size_t>(t) >= p.conclusion.size() ||
            !take(p.conclusion[static_cast<std::size_t>(t)], t)) {
            return std::nullopt;
        }
    }
    return w;
}

ProofPtr make_proof(Rule rule, Sequent conclusion, std::vector<int> principal,
                    std::optional<Formula> cut_formula, std::vector<int> split,
                    std::vector<ProofPtr> premises, std::vector<Wiring> wiring) {
    auto node = std::make_shared<Proof>();
    node->conclusion = std::move(conclusion);
    node->rule = rule;
    node->principal = std::move(principal);
    node->cut_formula = std::move(cut_formula);
    node->split = std::move(split);
    std::sort(node->split.begin(), node->split.end());
    node->premises = std::move(premises);
    node->wiring = std::move(wiring);
    node->wiring.resize(node->premises.size());
    for (std::size_t k = 0; k < node->premises.size(); ++k) {
        if (!node->wiring[k].empty() || !node->premises[k]) {
            continue;
        }
        if (auto w = default_wiring(*node, k)) {
            node->wiring[k] = std::move(*w);
        } else {
            node->wiring[k].assign(node->premises[k]->conclusion.size(), kUnwired);
        }
    }
    return node;
}

// ---------------------------------------------------------------------------
// Smart constructors

namespace build {

namespace {

struct Entry {
    Formula formula;
    int premise;    // -1 for formulas introduced by the rule
    int position;   // position in that premise
    int principal;  // index into the principal list, or -1
};

struct Part {
    ProofPtr proof;
    std::vector<int> active; // premise positions in slot order
};

void check_position(const ProofPtr &p, int i, const char *what) {
    if (!p) {
        fail(ErrorKind::Invalid, std::string(what) + ": null premise");
    }
    if (i < 0 || static_cast<std::size_t>(i) >= p->conclusion.size()) {
        fail(ErrorKind::Invalid, std::string(what) + ": position " + std::to_string(i) +
                                     " outside " + p->conclusion.text());
    }
}

const Formula &at(const ProofPtr &p, int i) { return p->conclusion[static_cast<std::size_t>(i)]; }

ProofPtr assemble(Rule rule, std::vector<Part> parts, const std::vector<Formula> &principals,
                  std::optional<Formula> cut_formula = std::nullopt,
                  const std::vector<Formula> &extra_context = {}) {
    std::vector<Entry> entries;
    const bool shared_context = rule == Rule::With;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (shared_context && k > 0) {
            break;
        }
        const Sequent &pc = parts[k].proof->conclusion;
        for (std::size_t j = 0; j < pc.size(); ++j) {
            if (!contains(parts[k].active, static_cast<int>(j))) {
                entries.push_back({pc[j], static_cast<int>(k), static_cast<int>(j), -1});
            }
        }
    }
    for (const Formula &f : extra_context) {
        entries.push_back({f, -1, -1, -1});
    }
    for (std::size_t i = 0; i < principals.size(); ++i) {
        entries.push_back({principals[i], -1, -1, static_cast<int>(i)});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry &a, const Entry &b) { return a.formula < b.formula; });

    auto node = std::make_shared<Proof>();
    std::vector<Formula> formulas;
    formulas.reserve(entries.size());
    node->principal.assign(principals.size(), -1);
    node->wiring.resize(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
        node->wiring[k].assign(parts[k].proof->conclusion.size(), kUnwired);
        for (std::size_t s = 0; s < parts[k].active.size(); ++s) {
            node->wiring[k][static_cast<std::size_t>(parts[k].active[s])] = slot_target(static_cast<int>(s));
        }
    }
    for (std::size_t t = 0; t < entries.size(); ++t) {
        const Entry &e = entries[t];
        formulas.push_back(e.formula);
        if (e.principal >= 0) {
            node->principal[static_cast<std::size_t>(e.principal)] = static_cast<int>(t);
        } else if (e.premise >= 0) {
            node->wiring[static_cast<std::size_t>(e.premise)][static_cast<std::size_t>(e.position)] =
                static_cast<int>(t);
            if ((rule == Rule::Tensor || rule == Rule::Cut) && e.premise == 0) {
                node->split.push_back(static_cast<int>(t));
            }
        }
    }
    node->conclusion = Sequent(std::move(formulas));
    node->rule = rule;
    node->cut_formula = std::move(cut_formula);

    if (shared_context) {
        // The second premise must repeat the first one's context exactly.
        std::vector<bool> used(entries.size(), false);
        const Sequent &pc = parts[1].proof->conclusion;
        for (std::size_t j = 0; j < pc.size(); ++j) {
            if (contains(parts[1].active, static_cast<int>(j))) {
                continue;
            }
            bool found = false;
            for (std::size_t t = 0; t < entries.size(); ++t) {
                if (!used[t] && entries[t].premise == 0 && entries[t].formula == pc[j]) {
                    used[t] = true;
                    node->wiring[1][j] = static_cast<int>(t);
                    found = true;
                    break;
                }
            }
            if (!found) {
                fail(ErrorKind::Invalid, "with: premise contexts differ (" +
                                             parts[0].proof->conclusion.text() + " vs " + pc.text() + ")");
            }
        }
        for (std::size_t t = 0; t < entries.size(); ++t) {
            if (entries[t].premise == 0 && !used[t]) {
                fail(ErrorKind::Invalid, "with: premise contexts differ (" +
                                             parts[0].proof->conclusion.text() + " vs " + pc.text() + ")");
            }
        }
    }
    for (auto &part : parts) {
        node->premises.push_back(std::move(part.proof));
    }
    return node;
}

int find_other(const Sequent &s, const Formula &f, int exclude) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (static_cast<int>(i) != exclude && s[i] == f) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

int require(const ProofPtr &p, const Formula &f, const char *what, int exclude = -1) {
    if (!p) {
        fail(ErrorKind::Invalid, std::string(what) + ": null premise");
    }
    int i = find_other(p->conclusion, f, exclude);
    if (i < 0) {
        fail(ErrorKind::Invalid, std::string(what) + ": " + quote(f) + " not in " + p->conclusion.text());
    }
    return i;
}

} // namespace

ProofPtr ax(const Formula &a) {
    if (!a.is_nnf()) {
        fail(ErrorKind::Invalid, "ax: formula not in NNF");
    }
    return assemble(Rule::Axiom, {}, {a, dual(a)});
}

ProofPtr one() { return assemble(Rule::One, {}, {Formula::one()}); }

ProofPtr top(const std::vector<Formula> &context) {
    return assemble(Rule::Top, {}, {Formula::top()}, std::nullopt, context);
}

ProofPtr bot(const ProofPtr &p) {
    if (!p) fail(ErrorKind::Invalid, "bot: null premise");
    return assemble(Rule::Bot, {{p, {}}}, {Formula::bot()});
}

ProofPtr par(const ProofPtr &p, int a, int b) {
    check_position(p, a, "par");
    check_position(p, b, "par");
    if (a == b) fail(ErrorKind::Invalid, "par: both operands at the same position");
    return assemble(Rule::Par, {{p, {a, b}}}, {Formula::par(at(p, a), at(p, b))});
}

ProofPtr tensor(const ProofPtr &l, int a, const ProofPtr &r, int b) {
    check_position(l, a, "tensor");
    check_position(r, b, "tensor");
    return assemble(Rule::Tensor, {{l, {a}}, {r, {b}}}, {Formula::tensor(at(l, a), at(r, b))});
}

ProofPtr with(const ProofPtr &l, int a, const ProofPtr &r, int b) {
    check_position(l, a, "with");
    check_position(r, b, "with");
    return assemble(Rule::With, {{l, {a}}, {r, {b}}}, {Formula::with(at(l, a), at(r, b))});
}

ProofPtr plus_l(const ProofPtr &p, int a, const Formula &b) {
    check_position(p, a, "plusl");
    return assemble(Rule::PlusL, {{p, {a}}}, {Formula::plus(at(p, a), b)});
}

ProofPtr plus_r(const ProofPtr &p, const Formula &a, int b) {
    check_position(p, b, "plusr");
    return assemble(Rule::PlusR, {{p, {b}}}, {Formula::plus(a, at(p, b))});
}

ProofPtr cut(const ProofPtr &l, int a, const ProofPtr &r, int a_dual) {
    check_position(l, a, "cut");
    check_position(r, a_dual, "cut");
    if (!(dual(at(l, a)) == at(r, a_dual))) {
        fail(ErrorKind::Invalid, "cut: " + quote(at(l, a)) + " and " + quote(at(r, a_dual)) + " are not dual");
    }
    return assemble(Rule::Cut, {{l, {a}}, {r, {a_dual}}}, {}, at(l, a));
}

ProofPtr dereliction(const ProofPtr &p, int a) {
    check_position(p, a, "der");
    return assemble(Rule::Dereliction, {{p, {a}}}, {Formula::why_not(at(p, a))});
}

ProofPtr promotion(const ProofPtr &p, int a) {
    check_position(p, a, "prom");
    const Sequent &s = p->conclusion;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (static_cast<int>(j) != a && s[j].kind() != Connective::WhyNot) {
            fail(ErrorKind::Invalid, "prom: context formula " + quote(s[j]) + " is not a ?-formula");
        }
    }
    return assemble(Rule::Promotion, {{p, {a}}}, {Formula::of_course(at(p, a))});
}

ProofPtr contraction(const ProofPtr &p, int a, int b) {
    check_position(p, a, "contr");
    check_position(p, b, "contr");
    if (a == b || !(at(p, a) == at(p, b)) || at(p, a).kind() != Connective::WhyNot) {
        fail(ErrorKind::Invalid, "contr: needs two distinct occurrences of the same ?-formula");
    }
    return assemble(Rule::Contraction, {{p, {a, b}}}, {at(p, a)});
}

ProofPtr weakening(const ProofPtr &p, const Formula &why_not) {
    if (!p) fail(ErrorKind::Invalid, "weak: null premise");
    if (why_not.kind() != Connective::WhyNot || !why_not.is_nnf()) {
        fail(ErrorKind::Invalid, "weak: " + quote(why_not) + " is not an NNF ?-formula");
    }
    return assemble(Rule::Weakening, {{p, {}}}, {why_not});
}

ProofPtr par(const ProofPtr &p, const Formula &a, const Formula &b) {
    int i = require(p, a, "par");
    return par(p, i, require(p, b, "par", i));
}

ProofPtr tensor(const ProofPtr &l, const Formula &a, const ProofPtr &r, const Formula &b) {
    return tensor(l, require(l, a, "tensor"), r, require(r, b, "tensor"));
}

ProofPtr with(const ProofPtr &l, const Formula &a, const ProofPtr &r, const Formula &b) {
    return with(l, require(l, a, "with"), r, require(r, b, "with"));
}

ProofPtr plus_l(const ProofPtr &p, const Formula &a, const Formula &b) {
    return plus_l(p, require(p, a, "plusl"), b);
}

ProofPtr plus_r(const ProofPtr &p, const Formula &a, const Formula &b) {
    return plus_r(p, a, require(p, b, "plusr"));
}

ProofPtr cut(const ProofPtr &l, const Formula &a, const ProofPtr &r) {
    return cut(l, require(l, a, "cut"), r, require(r, dual(a), "cut"));
}

ProofPtr dereliction(const ProofPtr &p, const Formula &a) { return dereliction(p, require(p, a, "der")); }

ProofPtr promotion(const ProofPtr &p, const Formula &a) { return promotion(p, require(p, a, "prom")); }

ProofPtr contraction(const ProofPtr &p, const Formula &why_not) {
    int i = require(p, why_not, "contr");
    return contraction(p, i, require(p, why_not, "contr", i));
}

ProofPtr weaken_all(ProofPtr p, const std::vector<Formula> &why_nots) {
    for (const Formula &f : why_nots) {
        p = weakening(p, f);
    }
    return p;
}

ProofPtr contract_all(ProofPtr p, const std::vector<Formula> &why_nots) {
    for (const Formula &f : why_nots) {
        p = contraction(p, f);
    }
    return p;
}

ProofPtr replace_premise(const Proof &node, std::size_t k, ProofPtr premise, const std::vector<int> &perm) {
    if (k >= node.premises.size()) {
        fail(ErrorKind::Internal, "replace_premise: no premise " + std::to_string(k));
    }
    const Wiring &old = node.wiring[k];
    if (perm.size() != old.size() || premise->conclusion.size() != old.size()) {
        fail(ErrorKind::Internal, "replace_premise: premise size changed");
    }
    auto out = std::make_shared<Proof>(node);
    Wiring w(old.size(), kUnwired);
    for (std::size_t j = 0; j < old.size(); ++j) {
        w[static_cast<std::size_t>(perm[j])] = old[j];
    }
    out->wiring[k] = std::move(w);
    out->premises[k] = std::move(premise);
    return out;
}

} // namespace build

// ---------------------------------------------------------------------------
// Checker

std::vector<std::string> check_node(const Proof &p) {
    std::vector<std::string> errs;
    const Sequent &c = p.conclusion;
    const int n = static_cast<int>(c.size());
    const char *name = rule_name(p.rule);

    if (p.premises.size() != rule_arity(p.rule)) {
        errs.push_back(std::string(name) + " expects " + std::to_string(rule_arity(p.rule)) +
                       " premise(s), found " + std::to_string(p.premises.size()));
        return errs;
    }
    for (const auto &q : p.premises) {
        if (!q) {
            errs.push_back("missing premise");
            return errs;
        }
    }
    if (!c.is_nnf()) {
        errs.push_back("conclusion is not in negation normal form");
        return errs;
    }
    if (p.principal.size() != principal_count(p.rule)) {
        errs.push_back(std::string(name) + " expects " + std::to_string(principal_count(p.rule)) +
                       " principal position(s), found " + std::to_string(p.principal.size()));
        return errs;
    }
    for (int i : p.principal) {
        if (i < 0 || i >= n) {
            errs.push_back("principal position " + std::to_string(i) + " outside the conclusion");
            return errs;
        }
    }
    if (p.principal.size() == 2 && p.principal[0] == p.principal[1]) {
        errs.push_back("principal positions coincide");
        return errs;
    }

    auto principal_kind = [&](Connective k, const char *what) {
        const Formula &f = c[static_cast<std::size_t>(p.principal[0])];
        if (f.kind() != k) {
            errs.push_back(std::string(name) + ": principal formula " + quote(f) + " is not " + what);
            return false;
        }
        return true;
    };

    switch (p.rule) {
    case Rule::Axiom:
        if (n != 2) {
            errs.push_back("axiom conclusion must have exactly two formulas");
        } else if (!(dual(c[static_cast<std::size_t>(p.principal[0])]) == c[static_cast<std::size_t>(p.principal[1])])) {
            errs.push_back("axiom formulas " + quote(c[0]) + " and " + quote(c[1]) + " are not dual");
        }
        return errs;
    case Rule::One:
        if (n != 1 || c[0].kind() != Connective::One) {
            errs.push_back("one rule must conclude |- 1 alone");
        }
        return errs;
    case Rule::Top:
        principal_kind(Connective::Top, "top");
        return errs;
    case Rule::Cut:
        if (!p.cut_formula) {
            errs.push_back("cut without a cut formula");
            return errs;
        }
        if (!p.cut_formula->is_nnf()) {
            errs.push_back("cut formula is not in negation normal form");
            return errs;
        }
        break;
    case Rule::Tensor:
        if (!principal_kind(Connective::Tensor, "a tensor")) return errs;
        break;
    case Rule::Par:
        if (!principal_kind(Connective::Par, "a par")) return errs;
        break;
    case Rule::Bot:
        if (!principal_kind(Connective::Bot, "bot")) return errs;
        break;
    case Rule::With:
        if (!principal_kind(Connective::With, "a with")) return errs;
        break;
    case Rule::PlusL:
    case Rule::PlusR:
        if (!principal_kind(Connective::Plus, "a plus")) return errs;
        break;
    case Rule::Dereliction:
    case Rule::Contraction:
    case Rule::Weakening:
        if (!principal_kind(Connective::WhyNot, "a ?-formula")) return errs;
        break;
    case Rule::Promotion:
        if (!principal_kind(Connective::OfCourse, "a !-formula")) return errs;
        for (int t = 0; t < n; ++t) {
            if (t != p.principal[0] && c[static_cast<std::size_t>(t)].kind() != Connective::WhyNot) {
                errs.push_back("promotion context formula " + quote(c[static_cast<std::size_t>(t)]) +
                               " at position " + std::to_string(t) + " is not a ?-formula");
            }
        }
        if (!errs.empty()) return errs;
        break;
    }

    if (p.rule == Rule::Tensor || p.rule == Rule::Cut) {
        for (std::size_t i = 0; i < p.split.size(); ++i) {
            int t = p.split[i];
            if (t < 0 || t >= n || contains(p.principal, t) || (i > 0 && p.split[i - 1] >= t)) {
                errs.push_back("split entry " + std::to_string(t) + " is not a valid context position");
                return errs;
            }
        }
    } else if (!p.split.empty()) {
        errs.push_back(std::string(name) + " does not take a split");
        return errs;
    }

    if (p.wiring.size() != p.premises.size()) {
        errs.push_back("wiring does not cover every premise");
        return errs;
    }
    for (std::size_t k = 0; k < p.premises.size(); ++k) {
        const Sequent &pc = p.premises[k]->conclusion;
        const Wiring &w = p.wiring[k];
        const std::string which = "premise " + std::to_string(k);
        if (w.size() != pc.size()) {
            errs.push_back(which + " " + pc.text() + " does not fit the rule");
            continue;
        }
        const std::vector<Formula> slots = active_formulas(p, k);
        const std::vector<int> targets = designated_positions(p, k);
        std::vector<bool> slot_used(slots.size(), false);
        std::vector<bool> target_used(c.size(), false);
        bool broken = false;
        for (std::size_t j = 0; j < w.size() && !broken; ++j) {
            int t = w[j];
            if (t == kUnwired) {
                errs.push_back(which + " " + pc.text() + " does not fit the rule");
                broken = true;
            } else if (t >= 0) {
                if (t >= n || !contains(targets, t) || target_used[static_cast<std::size_t>(t)]) {
                    errs.push_back(which + " formula " + quote(pc[j]) + " is wired to a position it may not reach");
                    broken = true;
                } else if (!(pc[j] == c[static_cast<std::size_t>(t)])) {
                    errs.push_back(which + " formula " + quote(pc[j]) + " does not match conclusion formula " +
                                   quote(c[static_cast<std::size_t>(t)]));
                    broken = true;
                } else {
                    target_used[static_cast<std::size_t>(t)] = true;
                }
            } else {
                int s = target_slot(t);
                if (s < 0 || static_cast<std::size_t>(s) >= slots.size() || slot_used[static_cast<std::size_t>(s)]) {
                    errs.push_back(which + " formula " + quote(pc[j]) + " is wired to an invalid active slot");
                    broken = true;
                } else if (!(pc[j] == slots[static_cast<std::size_t>(s)])) {
                    errs.push_back(which + " active formula " + quote(pc[j]) + " should be " +
                                   quote(slots[static_cast<std::size_t>(s)]));
                    broken = true;
                } else {
                    slot_used[static_cast<std::size_t>(s)] = true;
                }
            }
        }
        if (broken) {
            continue;
        }
        for (std::size_t s = 0; s < slots.size(); ++s) {
            if (!slot_used[s]) {
                errs.push_back(which + " lacks active formula " + quote(slots[s]));
            }
        }
        for (int t : targets) {
            if (!target_used[static_cast<std::size_t>(t)]) {
                errs.push_back("conclusion formula " + quote(c[static_cast<std::size_t>(t)]) + " at position " +
                               std::to_string(t) + " is not supplied by " + which);
            }
        }
    }
    return errs;
}

CheckReport check_proof(const Proof &p) {
    CheckReport report;
    std::unordered_set<const Proof *> seen;
    std::vector<std::pair<const Proof *, std::string>> stack{{&p, "/"}};
    while (!stack.empty()) {
        auto [node, path] = stack.back();
        stack.pop_back();
        if (!seen.insert(node).second) {
            continue;
        }
        for (auto &msg : check_node(*node)) {
            report.failures.push_back({path, std::move(msg)});
        }
        for (std::size_t k = node->premises.size(); k-- > 0;) {
            if (node->premises[k]) {
                std::string child = (path == "/" ? "/" : path + "/") + std::to_string(k);
                stack.emplace_back(node->premises[k].get(), std::move(child));
            }
        }
    }
    report.ok = report.failures.empty();
    return report;
}

namespace {

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

template <class F>
std::size_t tree_sum(const Proof &p, std::unordered_map<const Proof *, std::size_t> &memo, F weight) {
    if (auto it = memo.find(&p); it != memo.end()) {
        return it->second;
    }
    std::size_t total = weight(p);
    for (const auto &q : p.premises) {
        if (q) {
            total = saturating_add(total, tree_sum(*q, memo, weight));
        }
    }
    memo.emplace(&p, total);
    return total;
}

} // namespace

std::size_t count_cuts(const Proof &p) {
    std::unordered_map<const Proof *, std::size_t> memo;
    return tree_sum(p, memo, [](const Proof &n) -> std::size_t { return n.rule == Rule::Cut ? 1 : 0; });
}

std::size_t node_count(const Proof &p) {
    std::unordered_map<const Proof *, std::size_t> memo;
    return tree_sum(p, memo, [](const Proof &) -> std::size_t { return 1; });
}

bool is_cut_free(const Proof &p) { return count_cuts(p) == 0; }

// ---------------------------------------------------------------------------
// File format

namespace {

void write_ints(std::ostringstream &out, const std::vector<int> &v) {
    out << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i ? " " : "") << v[i];
    }
    out << ')';
}

bool principal_is_default(const Proof &p) {
    if (p.rule == Rule::Axiom) {
        return p.principal == std::vector<int>{0, 1};
    }
    if (p.rule == Rule::One) {
        return p.principal == std::vector<int>{0};
    }
    return p.principal.empty();
}

void write_node(std::ostringstream &out, const Proof &p, int depth) {
    out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << '(' << rule_name(p.rule) << " \""
        << p.conclusion.text() << '"';
    if (!principal_is_default(p)) {
        for (int i : p.principal) {
            out << ' ' << i;
        }
    }
    if (p.cut_formula) {
        out << " :cut \"" << p.cut_formula->text() << '"';
    }
    if (p.rule == Rule::Tensor || p.rule == Rule::Cut) {
        out << " :split ";
        write_ints(out, p.split);
    }
    bool custom = false;
    for (std::size_t k = 0; k < p.premises.size(); ++k) {
        auto w = default_wiring(p, k);
        if (!w || *w != p.wiring[k]) {
            custom = true;
        }
    }
    if (custom) {
        out << " :wire (";
        for (std::size_t k = 0; k < p.wiring.size(); ++k) {
            if (k) out << ' ';
            write_ints(out, p.wiring[k]);
        }
        out << ')';
    }
    for (const auto &q : p.premises) {
        out << '\n';
        write_node(out, *q, depth + 1);
    }
    out << ')';
}

class Reader {
public:
    explicit Reader(std::string_view text) : s_(text) {}

    ProofPtr parse_file() {
        skip();
        ProofPtr p = parse_node();
        skip();
        if (i_ < s_.size()) {
            throw SyntaxError("trailing text after proof", i_);
        }
        return p;
    }

private:
    void skip() {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
                ++i_;
            } else if (s_[i_] == ';') {
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
    }

    bool peek(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }

    void expect(char c) {
        if (!peek(c)) {
            throw SyntaxError(std::string("expected '") + c + "'", i_);
        }
        ++i_;
    }

    std::string word() {
        skip();
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == ':')) {
            ++i_;
        }
        if (start == i_) {
            throw SyntaxError("expected a name", i_);
        }
        return std::string(s_.substr(start, i_ - start));
    }

    std::pair<std::string, std::size_t> string_literal() {
        skip();
        if (i_ >= s_.size() || s_[i_] != '"') {
            throw SyntaxError("expected a quoted string", i_);
        }
        std::size_t start = ++i_;
        while (i_ < s_.size() && s_[i_] != '"') ++i_;
        if (i_ >= s_.size()) {
            throw SyntaxError("unterminated string", start - 1);
        }
        return {std::string(s_.substr(start, i_++ - start)), start};
    }

    bool at_int() {
        skip();
        return i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) ||
                                  (s_[i_] == '-' && i_ + 1 < s_.size() &&
                                   std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))));
    }

    int integer() {
        skip();
        std::size_t start = i_;
        if (i_ < s_.size() && s_[i_] == '-') ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        try {
            return std::stoi(std::string(s_.substr(start, i_ - start)));
        } catch (const std::exception &) {
            throw SyntaxError("expected an integer", start);
        }
    }

    std::vector<int> int_list() {
        expect('(');
        std::vector<int> out;
        while (!peek(')')) {
            if (!at_int()) throw SyntaxError("expected an integer", i_);
            out.push_back(integer());
        }
        expect(')');
        return out;
    }

    // Sequent and formula errors are re-anchored to the file offset.
    template <class F>
    auto embedded(const std::string &text, std::size_t offset, F parse) {
        try {
            return parse(text);
        } catch (const SyntaxError &e) {
            std::string msg = e.what();
            auto cut = msg.rfind(" at column ");
            throw SyntaxError(msg.substr(0, cut), offset + e.position());
        }
    }

    ProofPtr parse_node() {
        expect('(');
        std::size_t name_pos = i_;
        std::string name = word();
        auto rule = rule_from_name(name);
        if (!rule) {
            throw SyntaxError("unknown rule '" + name + "'", name_pos);
        }
        auto [seq_text, seq_pos] = string_literal();
        Sequent conclusion = embedded(seq_text, seq_pos, [](const std::string &t) { return parse_sequent(t); });

        std::vector<int> principal;
        while (at_int()) {
            principal.push_back(integer());
        }
        std::optional<Formula> cut_formula;
        std::vector<int> split;
        std::vector<Wiring> wiring;
        bool has_split = false;
        while (peek(':')) {
            std::size_t key_pos = i_;
            std::string key = word();
            if (key == ":cut") {
                auto [f_text, f_pos] = string_literal();
                cut_formula = embedded(f_text, f_pos, [](const std::string &t) { return nnf(parse_formula(t)); });
            } else if (key == ":split") {
                split = int_list();
                has_split = true;
            } else if (key == ":wire") {
                expect('(');
                while (!peek(')')) {
                    wiring.push_back(int_list());
                }
                expect(')');
            } else {
                throw SyntaxError("unknown option '" + key + "'", key_pos);
            }
        }
        if ((*rule == Rule::Tensor || *rule == Rule::Cut) && !has_split) {
            throw SyntaxError(name + " needs a :split list", name_pos);
        }
        if (*rule == Rule::Cut && !cut_formula) {
            throw SyntaxError("cut needs a :cut formula", name_pos);
        }
        if (principal.empty() && *rule == Rule::Axiom && conclusion.size() == 2) {
            principal = {0, 1};
        } else if (principal.empty() && *rule == Rule::One && conclusion.size() == 1) {
            principal = {0};
        }
        std::vector<ProofPtr> premises;
        while (peek('(')) {
            premises.push_back(parse_node());
        }
        expect(')');
        if (!wiring.empty() && wiring.size() != premises.size()) {
            throw SyntaxError(":wire needs one list per premise", name_pos);
        }
        return make_proof(*rule, std::move(conclusion), std::move(principal), std::move(cut_formula),
                          std::move(split), std::move(premises), std::move(wiring));
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

} // namespace

std::string write_proof(const Proof &p) {
    std::ostringstream out;
    write_node(out, p, 0);
    out << '\n';
    return out.str();
}

ProofPtr read_proof(std::string_view text) { return Reader(text).parse_file(); }

// ---------------------------------------------------------------------------
// Pretty printer

namespace {

struct Block {
    std::vector<std::string> lines; // top to bottom, all padded to width
    std::size_t width = 0;
};

Block pad(Block b, std::size_t width) {
    for (auto &l : b.lines) {
        l.resize(width, ' ');
    }
    b.width = width;
    return b;
}

Block render(const Proof &p) {
    std::vector<Block> above;
    for (const auto &q : p.premises) {
        above.push_back(render(*q));
    }
    Block top;
    if (!above.empty()) {
        std::size_t height = 0;
        for (const auto &b : above) height = std::max(height, b.lines.size());
        for (std::size_t r = 0; r < height; ++r) {
            std::string line;
            for (std::size_t k = 0; k < above.size(); ++k) {
                const Block &b = above[k];
                std::size_t offset = height - b.lines.size();
                if (k) line += "    ";
                line += r >= offset ? b.lines[r - offset] : std::string(b.width, ' ');
            }
            top.lines.push_back(line);
        }
        top.width = top.lines.front().size();
    }
    const std::string concl = p.conclusion.text();
    const std::size_t bar = std::max(top.width, concl.size());
    std::string label = " " + std::string(rule_name(p.rule));
    const std::size_t width = bar + label.size();

    Block out;
    for (auto &l : top.lines) {
        out.lines.push_back(std::string((bar - top.width) / 2, ' ') + l);
    }
    out.lines.push_back(std::string(bar, '-') + label);
    out.lines.push_back(std::string((bar - concl.size()) / 2, ' ') + concl);
    return pad(std::move(out), width);
}

} // namespace

std::string pretty_proof(const Proof &p) {
    Block b = render(p);
    std::string out;
    for (auto &l : b.lines) {
        while (!l.empty() && l.back() == ' ') l.pop_back();
        out += l;
        out += '\n';
    }
    return out;
}

const Proof &subproof_at(const Proof &p, std::string_view path) {
    const Proof *node = &p;
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '/') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < path.size() && path[i] != '/') ++i;
        std::size_t k = 0;
        try {
            k = static_cast<std::size_t>(std::stoul(std::string(path.substr(start, i - start))));
        } catch (const std::exception &) {
            fail(ErrorKind::Invalid, "bad proof path '" + std::string(path) + "'");
        }
        if (k >= node->premises.size() || !node->premises[k]) {
            fail(ErrorKind::Invalid, "proof path '" + std::string(path) + "' leaves the proof");
        }
        node = node->premises[k].get();
    }
    return *node;
}

} // namespace llw
