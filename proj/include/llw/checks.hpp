#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "llw/coherence.hpp"
#include "llw/cut_elim.hpp"
#include "llw/generators.hpp"
#include "llw/proof.hpp"

// Property suites shared by the acceptance driver, the command line and the
// corpus runner. Each returns a tally instead of asserting.
namespace llw::checks {

struct Tally {
    std::size_t cases = 0;
    std::size_t violations = 0;
    std::size_t skipped = 0;             // cases abandoned on a budget error
    std::vector<std::string> messages;   // first few violations

    void fail(std::string message);
    void merge(const Tally &o);
    bool ok() const { return violations == 0; }
};

inline constexpr std::size_t kMessageCap = 20;

struct CompositionShape {
    FormulaShape formulas;
    std::size_t min_cut_formula = 1;
    std::size_t max_cut_formula = 5;
    std::size_t max_side = 5;            // total size of each side context
    std::size_t extra_cuts = 0;          // further cuts against the result
    std::size_t max_attempts = 2000;
};

// cut(p1, A, p2) where p1 and p2 are prover outputs for |- Gamma, A and
// |- Delta, A^. Each extra cut picks a formula B of the current conclusion
// and cuts it against a prover output for |- Theta, B^ (skipped when none is
// found). Null when no provable pair turns up within max_attempts.
ProofPtr random_cut_composition(Rng &rng, const CompositionShape &shape = {});

// Normalizes p and checks every intermediate proof with the kernel, the
// preserved conclusion and the cut-free result. With `env`, the coherence
// interpretation is also compared across every step.
Tally check_normalization(const ProofPtr &p, std::size_t fuel, const coh::AtomEnv *env = nullptr,
                          std::size_t *steps = nullptr);

// Comonad and comonoid laws over every space with at most max_web tokens.
Tally check_exponential_laws(int max_web);
// fun(trace f) = f, trace(fun phi) = phi and the stable order against trace
// inclusion, over all stable maps between spaces with at most max_web tokens.
Tally check_trace_fun(int max_web);
// Web bijection !(A&B) ~ !A * !B for all pairs of spaces up to max_web.
Tally check_bang_with(int max_web);

} // namespace llw::checks
