#include "llw/generators.hpp"

namespace llw {

namespace {

std::size_t pick(Rng &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Formula leaf(Rng &rng, const FormulaShape &shape) {
    const std::size_t literals = shape.atoms.size() * 2;
    const std::size_t choices = literals + (shape.units ? 4 : 0);
    std::size_t i = pick(rng, 0, choices - 1);
    if (i < literals) {
        const std::string &name = shape.atoms[i / 2];
        return i % 2 ? Formula::dual_atom(name) : Formula::atom(name);
    }
    switch (i - literals) {
    case 0: return Formula::one();
    case 1: return Formula::bot();
    case 2: return Formula::zero();
    default: return Formula::top();
    }
}

} // namespace

Formula random_formula(Rng &rng, std::size_t size, const FormulaShape &shape) {
    if (shape.dual_nodes && size >= 2 && pick(rng, 0, 5) == 0) {
        FormulaShape inner = shape;
        return Formula::dual_of(random_formula(rng, size - 1, inner));
    }
    if (size <= 1 || (size == 2 && !shape.exponentials)) {
        return leaf(rng, shape);
    }
    if (shape.exponentials && (size == 2 || pick(rng, 0, 4) == 0)) {
        Formula body = random_formula(rng, size - 1, shape);
        return pick(rng, 0, 1) ? Formula::of_course(body) : Formula::why_not(body);
    }
    std::size_t rest = size - 1;
    std::size_t l = pick(rng, 1, rest - 1);
    if (!shape.exponentials && !shape.dual_nodes && l % 2 == 0) {
        // Keep both sides odd so the requested size is hit exactly.
        l = l > 1 ? l - 1 : 1;
    }
    static constexpr Connective kBinary[] = {Connective::Tensor, Connective::Par, Connective::With,
                                             Connective::Plus};
    Connective c = kBinary[pick(rng, 0, 3)];
    return Formula::binary(c, random_formula(rng, l, shape), random_formula(rng, rest - l, shape));
}

Sequent random_sequent(Rng &rng, std::size_t max_total, const FormulaShape &shape) {
    FormulaShape s = shape;
    s.dual_nodes = false;
    std::vector<Formula> out;
    if (max_total == 0) return Sequent(std::move(out));
    std::size_t budget = pick(rng, 1, max_total);
    while (budget > 0) {
        std::size_t n = pick(rng, 1, budget);
        Formula f = random_formula(rng, n, s);
        if (f.size() > budget) {
            break;
        }
        budget -= f.size();
        out.push_back(f);
        if (pick(rng, 0, 2) == 0) {
            break;
        }
    }
    return Sequent(std::move(out));
}

} // namespace llw
