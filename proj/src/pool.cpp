#include "llw/pool.hpp"

namespace llw {

namespace {

std::uint64_t node_key(Connective c, std::uint64_t a, std::uint64_t b) {
    return (static_cast<std::uint64_t>(c) << 58) | (a << 29) | b;
}

} // namespace

FormulaPool::Id FormulaPool::add(Node n, std::uint64_t key) {
    auto [it, fresh] = index_.try_emplace(key, static_cast<Id>(nodes_.size()));
    if (fresh) {
        if (nodes_.size() >= (1u << 29) - 1) {
            fail(ErrorKind::Budget, "formula pool exhausted");
        }
        nodes_.push_back(n);
        formulas_.emplace_back();
        duals_.push_back(kNone);
    }
    return it->second;
}

FormulaPool::Id FormulaPool::atom(const std::string &name, bool dual) {
    auto [it, fresh] = atom_ids_.try_emplace(name, static_cast<std::uint32_t>(atom_names_.size()));
    if (fresh) {
        atom_names_.push_back(name);
    }
    Connective c = dual ? Connective::DualAtom : Connective::Atom;
    return add({c, kNone, kNone, 1, it->second}, node_key(c, it->second, 0));
}

FormulaPool::Id FormulaPool::unit(Connective c) { return add({c, kNone, kNone, 1, 0}, node_key(c, 0, 0)); }

FormulaPool::Id FormulaPool::make(Connective c, Id left, Id right) {
    switch (c) {
    case Connective::OfCourse:
    case Connective::WhyNot:
        return add({c, left, kNone, nodes_[left].size + 1, 0}, node_key(c, left, 0));
    case Connective::Tensor:
    case Connective::Par:
    case Connective::With:
    case Connective::Plus:
        return add({c, left, right, nodes_[left].size + nodes_[right].size + 1, 0}, node_key(c, left, right));
    case Connective::One:
    case Connective::Bot:
    case Connective::Zero:
    case Connective::Top:
        return unit(c);
    default:
        fail(ErrorKind::Invalid, "pool: literals and Dual nodes are built with atom()/intern()");
    }
}

FormulaPool::Id FormulaPool::intern(const Formula &f) {
    switch (f.kind()) {
    case Connective::Atom: return atom(f.name(), false);
    case Connective::DualAtom: return atom(f.name(), true);
    case Connective::Dual: return intern(nnf(f));
    case Connective::One:
    case Connective::Bot:
    case Connective::Zero:
    case Connective::Top:
        return unit(f.kind());
    case Connective::OfCourse:
    case Connective::WhyNot:
        return make(f.kind(), intern(f.body()));
    default:
        return make(f.kind(), intern(f.left()), intern(f.right()));
    }
}

FormulaPool::Id FormulaPool::dual(Id id) {
    if (duals_[id] != kNone) {
        return duals_[id];
    }
    Node n = nodes_[id];
    Id d = kNone;
    switch (n.kind) {
    case Connective::Atom: d = atom(atom_names_[n.atom], true); break;
    case Connective::DualAtom: d = atom(atom_names_[n.atom], false); break;
    case Connective::One: d = unit(Connective::Bot); break;
    case Connective::Bot: d = unit(Connective::One); break;
    case Connective::Zero: d = unit(Connective::Top); break;
    case Connective::Top: d = unit(Connective::Zero); break;
    case Connective::OfCourse: d = make(Connective::WhyNot, dual(n.left)); break;
    case Connective::WhyNot: d = make(Connective::OfCourse, dual(n.left)); break;
    case Connective::Tensor: d = make(Connective::Par, dual(n.left), dual(n.right)); break;
    case Connective::Par: d = make(Connective::Tensor, dual(n.left), dual(n.right)); break;
    case Connective::With: d = make(Connective::Plus, dual(n.left), dual(n.right)); break;
    case Connective::Plus: d = make(Connective::With, dual(n.left), dual(n.right)); break;
    case Connective::Dual: break;
    }
    duals_[id] = d;
    duals_[d] = id;
    return d;
}

const Formula &FormulaPool::formula(Id id) {
    if (!formulas_[id]) {
        Node n = nodes_[id];
        Formula f = Formula::one();
        switch (n.kind) {
        case Connective::Atom: f = Formula::atom(atom_names_[n.atom]); break;
        case Connective::DualAtom: f = Formula::dual_atom(atom_names_[n.atom]); break;
        case Connective::One: f = Formula::one(); break;
        case Connective::Bot: f = Formula::bot(); break;
        case Connective::Zero: f = Formula::zero(); break;
        case Connective::Top: f = Formula::top(); break;
        case Connective::OfCourse: f = Formula::of_course(formula(n.left)); break;
        case Connective::WhyNot: f = Formula::why_not(formula(n.left)); break;
        case Connective::Dual: break;
        default: {
            Formula l = formula(n.left);
            f = Formula::binary(n.kind, l, formula(n.right));
        }
        }
        formulas_[id] = std::move(f);
    }
    return *formulas_[id];
}

} // namespace llw
