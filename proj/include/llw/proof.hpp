#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llw/formula.hpp"

namespace llw {

enum class Rule : std::uint8_t {
    Axiom,
    Cut,
    Tensor,
    Par,
    One,
    Bot,
    Top,
    With,
    PlusL,
    PlusR,
    Dereliction,
    Promotion,
    Contraction,
    Weakening,
};

// Short names used by the proof file format ("ax", "cut", "tensor", ...).
const char *rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);
std::size_t rule_arity(Rule r);

// Where each formula occurrence of a premise goes: a conclusion position
// (>= 0) or one of the rule's active slots, encoded as -1 - slot. Sequents are
// multisets, so the wiring is what keeps track of which occurrence is which
// when a sequent holds the same formula twice.
using Wiring = std::vector<int>;

constexpr int slot_target(int slot) { return -1 - slot; }
constexpr int target_slot(int target) { return -1 - target; }
inline constexpr int kUnwired = -1000;

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

// One inference. `principal` and `split` are positions in the (canonically
// sorted) conclusion. `split` lists the conclusion positions fed by the first
// premise of a Tensor or Cut. `cut_formula` is the cut formula as it occurs in
// the first premise; the second premise holds its dual.
struct Proof {
    Sequent conclusion;
    Rule rule = Rule::Axiom;
    std::vector<int> principal;
    std::optional<Formula> cut_formula;
    std::vector<int> split;
    std::vector<ProofPtr> premises;
    std::vector<Wiring> wiring;
};

// Builds a node from file-level data. Missing wiring (empty vector) is
// resolved by first-fit matching; an unresolvable premise keeps kUnwired
// entries and is reported by check_proof.
ProofPtr make_proof(Rule rule, Sequent conclusion, std::vector<int> principal,
                    std::optional<Formula> cut_formula, std::vector<int> split,
                    std::vector<ProofPtr> premises, std::vector<Wiring> wiring = {});

// Formulas each premise must contribute through its active slots.
std::vector<Formula> active_formulas(const Proof &p, std::size_t premise);
// First-fit wiring of premise k, if the premise fits the node at all.
std::optional<Wiring> default_wiring(const Proof &p, std::size_t premise);

// Smart constructors. Positions index the premises' conclusions; the node's
// conclusion and wiring are computed. They throw Error(Invalid) when the
// premises do not fit the rule.
namespace build {

ProofPtr ax(const Formula &a);
ProofPtr one();
ProofPtr top(const std::vector<Formula> &context);
ProofPtr bot(const ProofPtr &p);
ProofPtr par(const ProofPtr &p, int a, int b);
ProofPtr tensor(const ProofPtr &l, int a, const ProofPtr &r, int b);
ProofPtr with(const ProofPtr &l, int a, const ProofPtr &r, int b);
ProofPtr plus_l(const ProofPtr &p, int a, const Formula &b);
ProofPtr plus_r(const ProofPtr &p, const Formula &a, int b);
ProofPtr cut(const ProofPtr &l, int a, const ProofPtr &r, int a_dual);
ProofPtr dereliction(const ProofPtr &p, int a);
ProofPtr promotion(const ProofPtr &p, int a);
ProofPtr contraction(const ProofPtr &p, int a, int b);
ProofPtr weakening(const ProofPtr &p, const Formula &why_not);

// Formula-addressed variants pick the first free occurrence.
ProofPtr par(const ProofPtr &p, const Formula &a, const Formula &b);
ProofPtr tensor(const ProofPtr &l, const Formula &a, const ProofPtr &r, const Formula &b);
ProofPtr with(const ProofPtr &l, const Formula &a, const ProofPtr &r, const Formula &b);
ProofPtr plus_l(const ProofPtr &p, const Formula &a, const Formula &b);
ProofPtr plus_r(const ProofPtr &p, const Formula &a, const Formula &b);
ProofPtr cut(const ProofPtr &l, const Formula &a, const ProofPtr &r);
ProofPtr dereliction(const ProofPtr &p, const Formula &a);
ProofPtr promotion(const ProofPtr &p, const Formula &a);
ProofPtr contraction(const ProofPtr &p, const Formula &why_not);
ProofPtr weaken_all(ProofPtr p, const std::vector<Formula> &why_nots);
ProofPtr contract_all(ProofPtr p, const std::vector<Formula> &why_nots);

// Rebuilds `node` with premise k replaced by a proof of the same multiset
// whose occurrences moved by `perm` (old premise position -> new position).
ProofPtr replace_premise(const Proof &node, std::size_t k, ProofPtr premise, const std::vector<int> &perm);

} // namespace build

struct CheckFailure {
    std::string path;     // "/" for the root, "/0/1" for premise 1 of premise 0
    std::string message;
};

struct CheckReport {
    bool ok = true;
    std::vector<CheckFailure> failures;
};

CheckReport check_proof(const Proof &p);
// Validates a single node against its premises' stored conclusions.
std::vector<std::string> check_node(const Proof &p);

inline const Sequent &conclusion(const Proof &p) { return p.conclusion; }
std::size_t count_cuts(const Proof &p);
// Number of nodes of the proof tree (shared subproofs counted per use).
std::size_t node_count(const Proof &p);
bool is_cut_free(const Proof &p);

// Proof files: (rule "<sequent>" idx... [:cut "F"] [:split (i...)]
//                    [:wire ((t...) ...)] premise...)
std::string write_proof(const Proof &p);
ProofPtr read_proof(std::string_view text);

// Two-dimensional ASCII rendering of the derivation.
std::string pretty_proof(const Proof &p);

// Follows path "/i/j/..." from the root.
const Proof &subproof_at(const Proof &p, std::string_view path);

} // namespace llw
