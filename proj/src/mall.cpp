#include "llw/mall.hpp"

#include <algorithm>

namespace llw {

using Id = FormulaPool::Id;

const char *to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Provable: return "provable";
    case SearchStatus::NotProvable: return "not-provable";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

std::size_t IdSequentHash::operator()(const IdSequent &s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Id id : s) {
        h = (h ^ id) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
}

IdSequent to_ids(FormulaPool &pool, const Sequent &s) {
    IdSequent out;
    out.reserve(s.size());
    for (const Formula &f : s) {
        out.push_back(pool.intern(f));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void insert_sorted(IdSequent &s, Id id) { s.insert(std::upper_bound(s.begin(), s.end(), id), id); }

IdSequent without(const IdSequent &s, std::size_t i) {
    IdSequent out;
    out.reserve(s.size() + 1);
    out.insert(out.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), s.begin() + static_cast<std::ptrdiff_t>(i) + 1, s.end());
    return out;
}

IdSequent with_added(IdSequent s, Id a) {
    insert_sorted(s, a);
    return s;
}

IdSequent with_added(IdSequent s, Id a, Id b) {
    insert_sorted(s, a);
    insert_sorted(s, b);
    return s;
}

bool is_axiom(const FormulaPool &pool, const IdSequent &s) {
    if (s.size() != 2) {
        return false;
    }
    Connective a = pool.kind(s[0]);
    Connective b = pool.kind(s[1]);
    return ((a == Connective::Atom && b == Connective::DualAtom) ||
            (a == Connective::DualAtom && b == Connective::Atom)) &&
           pool.atom_index(s[0]) == pool.atom_index(s[1]);
}

// Splits of `ctx` by bitmask: bit j set sends ctx[j] to the left premise.
void split(const IdSequent &ctx, std::uint32_t mask, IdSequent &left, IdSequent &right) {
    left.clear();
    right.clear();
    for (std::size_t j = 0; j < ctx.size(); ++j) {
        ((mask >> j) & 1u ? left : right).push_back(ctx[j]);
    }
}

void require_mall(const Sequent &s) {
    if (!s.is_nnf()) {
        fail(ErrorKind::Invalid, "sequent is not in negation normal form");
    }
    if (s.has_exponential()) {
        fail(ErrorKind::Invalid, "MALL search does not accept ! or ? formulas");
    }
}

} // namespace

// ---------------------------------------------------------------------------

MallEngine::MallEngine(FormulaPool &pool, SearchLimits limits) : pool_(pool), limits_(limits) { reset(); }

void MallEngine::reset() {
    memo_.clear();
    visited_ = 0;
    start_ = std::chrono::steady_clock::now();
}

std::size_t MallEngine::total(const IdSequent &s) const {
    std::size_t n = 0;
    for (Id id : s) n += pool_.size(id);
    return n;
}

SearchStatus MallEngine::decide(const IdSequent &s) {
    try {
        return search(s) ? SearchStatus::Provable : SearchStatus::NotProvable;
    } catch (const Budget &) {
        return SearchStatus::BudgetExceeded;
    }
}

bool MallEngine::child(const IdSequent &parent, const IdSequent &c) {
    if (total(c) >= total(parent)) {
        ++measure_violations_;
    }
    return search(c);
}

bool MallEngine::search(const IdSequent &s) {
    if (auto it = memo_.find(s); it != memo_.end()) {
        return it->second;
    }
    if (visited_ >= limits_.max_visited_sequents) {
        throw Budget{};
    }
    if ((visited_ & 1023u) == 1023u && std::chrono::steady_clock::now() - start_ > limits_.time_budget) {
        throw Budget{};
    }
    ++visited_;
    bool r = expand(s);
    memo_.emplace(s, r);
    return r;
}

bool MallEngine::expand(const IdSequent &s) {
    for (Id id : s) {
        if (pool_.kind(id) == Connective::Top) {
            return true;
        }
    }
    // Reversible connectives first: one decomposition decides the sequent.
    for (std::size_t i = 0; i < s.size(); ++i) {
        Id f = s[i];
        switch (pool_.kind(f)) {
        case Connective::Par:
            return child(s, with_added(without(s, i), pool_.left(f), pool_.right(f)));
        case Connective::Bot:
            return child(s, without(s, i));
        case Connective::With: {
            IdSequent ctx = without(s, i);
            return child(s, with_added(ctx, pool_.left(f))) && child(s, with_added(ctx, pool_.right(f)));
        }
        default:
            break;
        }
    }
    if (s.size() == 1 && pool_.kind(s[0]) == Connective::One) {
        return true;
    }
    if (is_axiom(pool_, s)) {
        return true;
    }
    IdSequent left, right;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Id f = s[i];
        if (i > 0 && s[i - 1] == f) {
            continue;
        }
        if (pool_.kind(f) == Connective::Tensor) {
            IdSequent ctx = without(s, i);
            const std::uint32_t masks = 1u << ctx.size();
            for (std::uint32_t m = 0; m < masks; ++m) {
                split(ctx, m, left, right);
                insert_sorted(left, pool_.left(f));
                insert_sorted(right, pool_.right(f));
                if (child(s, left) && child(s, right)) {
                    return true;
                }
            }
        } else if (pool_.kind(f) == Connective::Plus) {
            IdSequent ctx = without(s, i);
            if (child(s, with_added(ctx, pool_.left(f))) || child(s, with_added(ctx, pool_.right(f)))) {
                return true;
            }
        }
    }
    return false;
}

ProofPtr MallEngine::proof(const IdSequent &s) {
    if (decide(s) != SearchStatus::Provable) {
        fail(ErrorKind::Invalid, "proof requested for a sequent that was not proved");
    }
    auto F = [&](Id id) -> Formula { return pool_.formula(id); };
    std::vector<Formula> ctx_formulas;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (pool_.kind(s[i]) == Connective::Top) {
            std::vector<Formula> rest;
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (j != i) rest.push_back(F(s[j]));
            }
            return build::top(rest);
        }
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        Id f = s[i];
        switch (pool_.kind(f)) {
        case Connective::Par:
            return build::par(proof(with_added(without(s, i), pool_.left(f), pool_.right(f))), F(pool_.left(f)),
                              F(pool_.right(f)));
        case Connective::Bot:
            return build::bot(proof(without(s, i)));
        case Connective::With: {
            IdSequent ctx = without(s, i);
            return build::with(proof(with_added(ctx, pool_.left(f))), F(pool_.left(f)),
                               proof(with_added(ctx, pool_.right(f))), F(pool_.right(f)));
        }
        default:
            break;
        }
    }
    if (s.size() == 1 && pool_.kind(s[0]) == Connective::One) {
        return build::one();
    }
    if (is_axiom(pool_, s)) {
        return build::ax(F(pool_.kind(s[0]) == Connective::Atom ? s[0] : s[1]));
    }
    IdSequent left, right;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Id f = s[i];
        if (i > 0 && s[i - 1] == f) {
            continue;
        }
        if (pool_.kind(f) == Connective::Tensor) {
            IdSequent ctx = without(s, i);
            const std::uint32_t masks = 1u << ctx.size();
            for (std::uint32_t m = 0; m < masks; ++m) {
                split(ctx, m, left, right);
                insert_sorted(left, pool_.left(f));
                insert_sorted(right, pool_.right(f));
                if (decide(left) == SearchStatus::Provable && decide(right) == SearchStatus::Provable) {
                    return build::tensor(proof(left), F(pool_.left(f)), proof(right), F(pool_.right(f)));
                }
            }
        } else if (pool_.kind(f) == Connective::Plus) {
            IdSequent ctx = without(s, i);
            IdSequent l = with_added(ctx, pool_.left(f));
            if (decide(l) == SearchStatus::Provable) {
                return build::plus_l(proof(l), F(pool_.left(f)), F(pool_.right(f)));
            }
            IdSequent r = with_added(ctx, pool_.right(f));
            if (decide(r) == SearchStatus::Provable) {
                return build::plus_r(proof(r), F(pool_.left(f)), F(pool_.right(f)));
            }
        }
    }
    fail(ErrorKind::Internal, "proof reconstruction lost its way");
}

SearchResult prove_mall(const Sequent &s, const SearchLimits &limits) {
    require_mall(s);
    FormulaPool pool;
    MallEngine engine(pool, limits);
    IdSequent ids = to_ids(pool, s);
    SearchResult out;
    out.status = engine.decide(ids);
    out.visited = engine.visited();
    if (out.status == SearchStatus::Provable) {
        out.proof = engine.proof(ids);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracle: every rule at every position, no priorities.

bool MallOracle::provable(const IdSequent &s) {
    std::size_t n = 0;
    for (Id id : s) n += pool_.size(id);
    if (n > bound_) {
        fail(ErrorKind::Budget, "oracle: total size " + std::to_string(n) + " exceeds bound " +
                                    std::to_string(bound_));
    }
    memo_.clear();
    return enumerate(s);
}

bool MallOracle::enumerate(const IdSequent &s) {
    if (auto it = memo_.find(s); it != memo_.end()) {
        return it->second;
    }
    bool found = false;
    if (s.size() == 2) {
        Connective a = pool_.kind(s[0]);
        Connective b = pool_.kind(s[1]);
        bool literals = (a == Connective::Atom || a == Connective::DualAtom) &&
                        (b == Connective::Atom || b == Connective::DualAtom);
        found = literals && a != b && pool_.atom_index(s[0]) == pool_.atom_index(s[1]);
    }
    if (s.size() == 1 && pool_.kind(s[0]) == Connective::One) {
        found = true;
    }
    for (std::size_t i = 0; i < s.size() && !found; ++i) {
        Id f = s[i];
        IdSequent rest = without(s, i);
        switch (pool_.kind(f)) {
        case Connective::Top:
            found = true;
            break;
        case Connective::Bot:
            found = enumerate(rest);
            break;
        case Connective::Par:
            found = enumerate(with_added(rest, pool_.left(f), pool_.right(f)));
            break;
        case Connective::With:
            found = enumerate(with_added(rest, pool_.left(f))) && enumerate(with_added(rest, pool_.right(f)));
            break;
        case Connective::Plus:
            found = enumerate(with_added(rest, pool_.left(f))) || enumerate(with_added(rest, pool_.right(f)));
            break;
        case Connective::Tensor: {
            IdSequent l, r;
            for (std::uint32_t m = 0; m < (1u << rest.size()) && !found; ++m) {
                split(rest, m, l, r);
                insert_sorted(l, pool_.left(f));
                insert_sorted(r, pool_.right(f));
                found = enumerate(l) && enumerate(r);
            }
            break;
        }
        default:
            break;
        }
    }
    memo_.emplace(s, found);
    return found;
}

bool oracle_provable(const Sequent &s, std::size_t size_bound) {
    require_mall(s);
    FormulaPool pool;
    MallOracle oracle(pool, size_bound);
    return oracle.provable(to_ids(pool, s));
}

} // namespace llw

namespace llw {

std::vector<std::vector<FormulaPool::Id>> mall_formulas_by_size(FormulaPool &pool,
                                                                const std::vector<std::string> &atoms,
                                                                std::size_t max_size) {
    std::vector<std::vector<Id>> by_size(max_size + 1);
    if (max_size == 0) {
        return by_size;
    }
    for (const auto &a : atoms) {
        by_size[1].push_back(pool.atom(a, false));
        by_size[1].push_back(pool.atom(a, true));
    }
    for (Connective c : {Connective::One, Connective::Bot, Connective::Zero, Connective::Top}) {
        by_size[1].push_back(pool.unit(c));
    }
    static constexpr Connective kBinary[] = {Connective::Tensor, Connective::Par, Connective::With,
                                             Connective::Plus};
    for (std::size_t n = 3; n <= max_size; ++n) {
        for (Connective c : kBinary) {
            for (std::size_t l = 1; l + 1 < n; ++l) {
                for (Id a : by_size[l]) {
                    for (Id b : by_size[n - 1 - l]) {
                        by_size[n].push_back(pool.make(c, a, b));
                    }
                }
            }
        }
    }
    return by_size;
}

namespace {

struct MultisetWalker {
    const std::vector<std::vector<Id>> &by_size;
    const std::function<void(const IdSequent &)> &visit;
    IdSequent current;
    IdSequent sorted;
    std::size_t visited = 0;

    void emit() {
        if (current.empty()) {
            return;
        }
        sorted = current;
        std::sort(sorted.begin(), sorted.end());
        visit(sorted);
        ++visited;
    }

    // Chooses formulas of size class `n` (non-decreasing index from `from`),
    // then moves on to smaller classes.
    void walk(std::size_t n, std::size_t from, std::size_t budget) {
        if (n == 0) {
            emit();
            return;
        }
        walk(n - 1, 0, budget);
        if (n > budget) {
            return;
        }
        const auto &cls = by_size[n];
        for (std::size_t i = from; i < cls.size(); ++i) {
            current.push_back(cls[i]);
            walk(n, i, budget - n);
            current.pop_back();
        }
    }
};

} // namespace

std::size_t for_each_mall_sequent(FormulaPool &pool, const std::vector<std::string> &atoms,
                                  std::size_t max_total, const std::function<void(const IdSequent &)> &visit) {
    auto by_size = mall_formulas_by_size(pool, atoms, max_total);
    MultisetWalker w{by_size, visit, {}, {}, 0};
    w.walk(max_total, 0, max_total);
    return w.visited;
}

} // namespace llw
