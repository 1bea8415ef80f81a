#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "llw/formula.hpp"

namespace llw {

using Rng = std::mt19937_64;

struct FormulaShape {
    std::vector<std::string> atoms{"a", "b"};
    bool units = true;
    bool exponentials = false;
    // Emit Dual nodes too (the result is then not in NNF).
    bool dual_nodes = false;
};

// Random formula with about `size` nodes (exactly `size` when every size is
// reachable under the shape, which holds whenever unary nodes are allowed or
// size is odd).
Formula random_formula(Rng &rng, std::size_t size, const FormulaShape &shape = {});

// Random NNF sequent whose total size is at most `max_total`.
Sequent random_sequent(Rng &rng, std::size_t max_total, const FormulaShape &shape = {});

} // namespace llw
