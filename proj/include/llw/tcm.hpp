#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llw/formula.hpp"
#include "llw/generators.hpp"
#include "llw/proof.hpp"

namespace llw::tcm {

enum class Op : std::uint8_t { IncA, DecA, IncB, DecB, Fork };

const char *to_string(Op op);   // "+A", "-A", "+B", "-B", "fork"

struct Instruction {
    Op op = Op::IncA;
    std::string from;
    std::string to;
    std::string to2;   // second target of a fork

    auto operator<=>(const Instruction &) const = default;
};

std::string to_string(const Instruction &i);

// Two counter machine with fork. The counter atoms "a" and "b" are reserved,
// so no state may use those names.
struct Machine {
    std::vector<std::string> states;
    std::string initial;
    std::string final;
    std::vector<Instruction> instructions;   // sorted, duplicate-free
};

// Throws Error(Invalid) for unknown states, reserved names or duplicates.
void validate(const Machine &m);

// "states: q0 q1", "init: q0", "final: q1", then one instruction per line
// ("q0 +A q1", "q0 fork q1 q2"); '#' starts a comment.
Machine parse_machine(std::string_view text);
std::string write_machine(const Machine &m);

struct Triplet {
    std::string state;
    unsigned m = 0;
    unsigned n = 0;

    auto operator<=>(const Triplet &) const = default;
};

std::string to_string(const Triplet &t);
// "(q, m, n)"
Triplet parse_triplet(std::string_view text);

// Instantaneous description: a multiset of triplets, kept sorted.
using Id = std::vector<Triplet>;

Id make_id(std::vector<Triplet> ts);
std::string to_string(const Id &s);
// "(q0,0,0) (q1,2,0)"
Id parse_id(std::string_view text);
bool is_accepting(const Machine &m, const Id &s);

// Result of applying `ins` to one copy of `t` in `s`, if it applies.
std::optional<Id> apply(const Id &s, const Triplet &t, const Instruction &ins);

struct TraceStep {
    Instruction instruction;
    Triplet affected;
    Id after;
};

struct RunTrace {
    Id initial;
    std::vector<TraceStep> steps;

    const Id &final_id() const { return steps.empty() ? initial : steps.back().after; }
};

struct SimulationResult {
    std::optional<RunTrace> trace;   // shortest accepting run, if found
    std::size_t explored = 0;        // IDs (or triplet states) visited
    bool truncated = false;          // the state cap stopped the search
};

// Shortest accepting run of at most `bound` transitions. Triplets evolve
// independently, so the cheapest run is assembled from per-triplet minimum
// costs; the steps of one triplet's descendants are kept together.
SimulationResult simulate(const Machine &m, const Id &s, std::size_t bound);
// Plain breadth-first search over whole IDs; exponential once forks appear.
SimulationResult simulate_bfs(const Machine &m, const Id &s, std::size_t bound,
                              std::size_t max_ids = 1'000'000);

// Problems with a trace: illegal transitions, wrong successor IDs.
std::vector<std::string> validate_trace(const Machine &m, const RunTrace &t);

// ---------------------------------------------------------------------------
// Encoding

// x^0 = 1, x^1 = x, x^(k+1) = x^k * x.
Formula power(const Formula &x, unsigned k);
// ?((L^ @ R)^) in negation normal form, for the rule L |- R of the instruction.
Formula encode_instruction(const Instruction &ins);

struct Encoding {
    Sequent goal;                 // |- q^, (a^m)^, (b^n)^, q_F
    std::vector<Formula> theory;  // one formula per instruction
    Sequent full() const;         // goal plus theory
};

Encoding encode(const Machine &m, const Triplet &t);

// Proof of encode(m, t).full() read off an accepting trace whose initial ID
// contains t. Throws Error(Invalid) when the trace does not fit.
ProofPtr synthesize_proof(const Machine &m, const RunTrace &trace, const Triplet &t);

// ---------------------------------------------------------------------------
// Generators

struct MachineShape {
    unsigned max_states = 4;
    unsigned max_instructions = 5;
    unsigned max_counter = 3;
    unsigned max_triplets = 2;
};

Machine random_machine(Rng &rng, const MachineShape &shape = {});
Id random_id(Rng &rng, const Machine &m, const MachineShape &shape = {});

// The two small reference machines: q_I +A q_1, q_1 -A q_F and q_I fork q_F, q_F.
Machine counter_example_machine();
Machine fork_example_machine();

} // namespace llw::tcm
