#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llw/formula.hpp"
#include "llw/generators.hpp"
#include "llw/mall.hpp"
#include "llw/pool.hpp"

namespace llw::phase {

// Subsets of the monoid as bitmasks over element indices.
using Subset = std::uint64_t;
inline constexpr std::size_t kMaxElements = 64;

// Finite commutative monoid given by its multiplication table.
class Monoid {
public:
    Monoid() : Monoid({"1"}, {{0}}, 0) {}
    // Throws Error(Invalid) unless the table is associative, commutative and
    // has `unit` as identity.
    Monoid(std::vector<std::string> names, std::vector<std::vector<int>> table, int unit);

    // (Z/kZ, +)
    static Monoid cyclic(int k);
    // {0..k} under addition capped at k.
    static Monoid truncated(int k);
    // {0..k} under max.
    static Monoid semilattice(int k);
    static Monoid product(const Monoid &a, const Monoid &b);

    std::size_t size() const { return names_.size(); }
    int unit() const { return unit_; }
    int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * size() + static_cast<std::size_t>(b)]; }
    Subset mul(Subset x, Subset y) const;
    Subset all() const { return size() == 64 ? ~Subset{0} : (Subset{1} << size()) - 1; }
    const std::string &name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    // -1 when absent.
    int index(std::string_view name) const;

private:
    std::vector<std::string> names_;
    std::vector<int> table_;
    int unit_ = 0;
};

struct Model {
    Monoid monoid;
    Subset bot = 0;
    std::map<std::string, Subset> atoms;
    std::optional<std::vector<Subset>> closed;
};

// Set algebra of one model, with per-element orthogonality masks cached.
class Algebra {
public:
    explicit Algebra(const Model &m);

    const Model &model() const { return m_; }
    Subset all() const { return m_.monoid.all(); }
    Subset orth(Subset x) const;
    Subset close(Subset x) const { return orth(orth(x)); }
    bool is_fact(Subset x) const { return close(x) == x; }

    Subset tensor(Subset f, Subset g) const { return close(m_.monoid.mul(f, g)); }
    Subset par(Subset f, Subset g) const;
    Subset with(Subset f, Subset g) const { return f & g; }
    Subset plus(Subset f, Subset g) const { return close(f | g); }
    Subset one() const { return orth(m_.bot); }
    Subset bot() const { return m_.bot; }
    Subset top() const { return all(); }
    Subset zero() const { return orth(all()); }
    // Smallest closed fact containing f (the whole monoid if none does).
    Subset why_not(Subset f) const;
    Subset of_course(Subset f) const { return orth(why_not(orth(f))); }

    // Throws Error(Invalid) for a missing atom, a non-NNF formula, or
    // exponentials without closed facts.
    Subset interp(const Formula &f) const;
    bool is_valid(const Sequent &s) const;

    // Interpretations of every pool id, indexed by id.
    std::vector<Subset> interpret_pool(FormulaPool &pool) const;
    bool is_valid(std::span<const FormulaPool::Id> s, const std::vector<Subset> &interp) const;

private:
    Model m_;
    std::vector<Subset> passes_;     // passes_[q] = {p | pq in bot}
    std::vector<Subset> par_table_;  // filled when the monoid has <= 6 elements
};

Subset orth(const Model &m, Subset x);
Subset interp_formula(const Model &m, const Formula &f);
bool is_valid(const Model &m, const Sequent &s);

// All facts of the model (requires at most 16 elements).
std::vector<Subset> all_facts(const Model &m);

struct TopolinearViolation {
    int axiom = 0;   // 1..4; 0 for a member that is not a fact
    std::string message;
};

struct TopolinearReport {
    std::vector<TopolinearViolation> violations;
    // Closed facts F with F par F != F. Axiom (4) only asks F par F to be
    // closed; contraction is validated when it equals F.
    std::vector<Subset> non_idempotent;
    bool ok() const { return violations.empty(); }
    bool fails(int axiom) const;
    bool validates_contraction() const { return non_idempotent.empty(); }
};

TopolinearReport check_topolinear(const Model &m);

// Problems with a model: atoms that are not facts, topolinear violations.
std::vector<std::string> validate_model(const Model &m);

// Closes `seeds` plus bot under pairwise intersection and par.
std::vector<Subset> closed_family(const Model &m, const std::vector<Subset> &seeds);

struct ModelShape {
    std::size_t max_elements = 6;
    std::vector<std::string> atoms{"a", "b"};
    // Require closed facts satisfying the topolinear axioms with par-idempotent
    // members.
    bool exponentials = false;
};

// Monoids with at most max_elements elements built from cyclic groups,
// truncated counters and max-semilattices, and their products.
std::vector<Monoid> monoid_catalogue(std::size_t max_elements);
Model random_model(Rng &rng, const ModelShape &shape = {});

std::string to_string(const Model &m, Subset x);
// Text format: "elements", "unit", "row", "bot:", "atom <name>:", "closed:".
Model parse_model(std::string_view text);
std::string write_model(const Model &m);

} // namespace llw::phase
