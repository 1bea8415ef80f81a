#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>
#include <span>
#include <unordered_map>
#include <vector>

#include "llw/pool.hpp"
#include "llw/proof.hpp"

namespace llw {

struct SearchLimits {
    std::size_t max_visited_sequents = 2'000'000;
    std::chrono::milliseconds time_budget{10'000};
};

enum class SearchStatus { Provable, NotProvable, BudgetExceeded };

const char *to_string(SearchStatus s);

struct SearchResult {
    SearchStatus status = SearchStatus::NotProvable;
    ProofPtr proof;              // set when Provable
    std::size_t visited = 0;     // distinct sequents examined
};

// Cut-free MALL proof search. Throws Error(Invalid) on exponentials or
// non-NNF input.
SearchResult prove_mall(const Sequent &s, const SearchLimits &limits = {});

inline constexpr std::size_t kOracleSizeBound = 12;

// Strategy-free enumeration of cut-free proofs. Throws Error(Budget) when the
// sequent's total size exceeds `size_bound`.
bool oracle_provable(const Sequent &s, std::size_t size_bound = kOracleSizeBound);

using IdSequent = std::vector<FormulaPool::Id>;

struct IdSequentHash {
    std::size_t operator()(const IdSequent &s) const noexcept;
};

// The search behind prove_mall, reusable across many queries over a shared
// pool. Sequents are sorted id vectors.
class MallEngine {
public:
    explicit MallEngine(FormulaPool &pool, SearchLimits limits = {});

    // Forgets memoized subgoals and restarts the budget clock.
    void reset();
    SearchStatus decide(const IdSequent &s);
    // Proof of a sequent for which decide() returned Provable.
    ProofPtr proof(const IdSequent &s);

    std::size_t visited() const { return visited_; }
    // Premise sequents whose total size did not drop below the conclusion's.
    std::size_t measure_violations() const { return measure_violations_; }

private:
    struct Budget {};

    bool search(const IdSequent &s);
    bool expand(const IdSequent &s);
    bool child(const IdSequent &parent, const IdSequent &c);
    std::size_t total(const IdSequent &s) const;

    FormulaPool &pool_;
    SearchLimits limits_;
    std::unordered_map<IdSequent, bool, IdSequentHash> memo_;
    std::size_t visited_ = 0;
    std::size_t measure_violations_ = 0;
    std::chrono::steady_clock::time_point start_;
};

class MallOracle {
public:
    explicit MallOracle(FormulaPool &pool, std::size_t size_bound = kOracleSizeBound)
        : pool_(pool), bound_(size_bound) {}

    bool provable(const IdSequent &s);

private:
    bool enumerate(const IdSequent &s);

    FormulaPool &pool_;
    std::size_t bound_;
    std::unordered_map<IdSequent, bool, IdSequentHash> memo_;
};

IdSequent to_ids(FormulaPool &pool, const Sequent &s);

// All exponential-free NNF formulas over `atoms` (with units) of size at most
// max_size, interned into `pool`, indexed by size.
std::vector<std::vector<FormulaPool::Id>> mall_formulas_by_size(FormulaPool &pool,
                                                                const std::vector<std::string> &atoms,
                                                                std::size_t max_size);

// Calls `visit` once for every nonempty multiset of such formulas whose total
// size is at most max_total. Returns the number of sequents visited.
std::size_t for_each_mall_sequent(FormulaPool &pool, const std::vector<std::string> &atoms,
                                  std::size_t max_total, const std::function<void(const IdSequent &)> &visit);

} // namespace llw
