#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "llw/formula.hpp"

namespace llw {

// Hash-consed NNF formulas addressed by dense integer ids. Bulk searches work
// on ids; Formula objects are materialized on demand.
class FormulaPool {
public:
    using Id = std::uint32_t;
    static constexpr Id kNone = 0xffffffffu;

    // Literal ids carry the atom's name; every other id is structural.
    Id atom(const std::string &name, bool dual);
    Id unit(Connective c);
    Id make(Connective c, Id left, Id right = kNone);
    Id intern(const Formula &f);

    Connective kind(Id id) const { return nodes_[id].kind; }
    Id left(Id id) const { return nodes_[id].left; }
    Id right(Id id) const { return nodes_[id].right; }
    std::uint32_t size(Id id) const { return nodes_[id].size; }
    // Atom index shared by a literal and its dual.
    std::uint32_t atom_index(Id id) const { return nodes_[id].atom; }
    Id dual(Id id);
    const Formula &formula(Id id);
    std::size_t count() const { return nodes_.size(); }

private:
    struct Node {
        Connective kind;
        Id left;
        Id right;
        std::uint32_t size;
        std::uint32_t atom;
    };

    Id add(Node n, std::uint64_t key);

    std::vector<Node> nodes_;
    std::vector<std::optional<Formula>> formulas_;
    std::vector<Id> duals_;
    std::vector<std::string> atom_names_;
    std::unordered_map<std::string, std::uint32_t> atom_ids_;
    std::unordered_map<std::uint64_t, Id> index_;
};

} // namespace llw
