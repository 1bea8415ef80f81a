#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llw/proof.hpp"

namespace llw {

enum class ReductionKind {
    AxiomCut,
    TensorPar,
    WithPlus,
    OneBot,
    DerProm,
    WeakProm,
    ContrProm,
    PromProm,     // commuting a cut into a promotion whose other side is a promotion
    Commutative,
};

const char *to_string(ReductionKind k);

struct ReductionStep {
    std::string path;             // address of the reduced Cut node in the source proof
    ReductionKind kind = ReductionKind::Commutative;
    Rule commuted_rule = Rule::Cut; // for commutative steps: the rule the cut moved past
    bool duplicated = false;      // a subproof was copied
    // Position i of the source conclusion is position occurrence_map[i] of the
    // result (the multisets agree; only equal formulas can trade places).
    std::vector<int> occurrence_map;
};

struct StepResult {
    ProofPtr proof;
    ReductionStep step;
};

// One leftmost-innermost reduction, or nullopt when the proof is cut-free.
std::optional<StepResult> reduce_step(const ProofPtr &p);

struct NormalizationStats {
    std::size_t steps = 0;
    std::size_t duplications = 0;
    std::size_t final_cut_count = 0;
};

struct NormalizationResult {
    ProofPtr proof;               // normal form, or the partial proof on fuel exhaustion
    NormalizationStats stats;
    bool fuel_exhausted = false;
    std::vector<int> occurrence_map; // composed over all steps
};

using StepObserver = std::function<void(const Proof &before, const Proof &after, const ReductionStep &step)>;

NormalizationResult normalize(ProofPtr p, std::size_t fuel, const StepObserver &observer = {});

// Line-oriented log entry for a step.
std::string describe_step(std::size_t index, const ReductionStep &step, const Proof &after);

} // namespace llw
