#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "llw/error.hpp"

namespace llw {

enum class Connective : std::uint8_t {
    Atom,
    DualAtom,
    Dual,      // only produced by the parser; nnf() removes it
    Tensor,
    Par,
    With,
    Plus,
    OfCourse,
    WhyNot,
    One,
    Bot,
    Zero,
    Top,
};

enum class Polarity { Positive, Negative, Atomic };

const char *to_string(Polarity p);

// Immutable formula tree with shared structure. Every node caches its ASCII
// rendering, which doubles as the canonical ordering key.
class Formula {
public:
    static Formula atom(std::string_view name);
    static Formula dual_atom(std::string_view name);
    // Dual of an Atom collapses to DualAtom; any other operand keeps a Dual node.
    static Formula dual_of(const Formula &f);
    static Formula tensor(const Formula &l, const Formula &r);
    static Formula par(const Formula &l, const Formula &r);
    static Formula with(const Formula &l, const Formula &r);
    static Formula plus(const Formula &l, const Formula &r);
    static Formula of_course(const Formula &f);
    static Formula why_not(const Formula &f);
    static Formula binary(Connective c, const Formula &l, const Formula &r);
    static Formula one();
    static Formula bot();
    static Formula zero();
    static Formula top();

    Connective kind() const noexcept;
    // Atom name; empty for non-literals.
    const std::string &name() const noexcept;
    // Left operand of a binary node, or the body of Dual / OfCourse / WhyNot.
    const Formula &left() const;
    const Formula &body() const { return left(); }
    const Formula &right() const;

    bool is_binary() const noexcept;
    bool is_literal() const noexcept {
        return kind() == Connective::Atom || kind() == Connective::DualAtom;
    }
    bool is_unit() const noexcept;
    bool is_nnf() const noexcept;
    bool has_exponential() const noexcept;

    // Node count (connectives, literals and units).
    std::size_t size() const noexcept;
    const std::string &text() const noexcept;
    std::size_t hash() const noexcept;

    bool operator==(const Formula &o) const noexcept;
    std::strong_ordering operator<=>(const Formula &o) const noexcept;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(Connective kind, std::string name, std::vector<Formula> kids);

    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Connective kind;
    std::string name;
    std::vector<Formula> kids;
    std::string text;
    std::size_t size = 1;
    std::size_t hash = 0;
    bool nnf = true;
    bool exponential = false;
};

inline Connective Formula::kind() const noexcept { return node_->kind; }
inline const std::string &Formula::name() const noexcept { return node_->name; }
inline bool Formula::is_nnf() const noexcept { return node_->nnf; }
inline bool Formula::has_exponential() const noexcept { return node_->exponential; }
inline std::size_t Formula::size() const noexcept { return node_->size; }
inline const std::string &Formula::text() const noexcept { return node_->text; }
inline std::size_t Formula::hash() const noexcept { return node_->hash; }

inline bool Formula::operator==(const Formula &o) const noexcept {
    return node_ == o.node_ || node_->text == o.node_->text;
}

inline std::strong_ordering Formula::operator<=>(const Formula &o) const noexcept {
    if (node_ == o.node_) {
        return std::strong_ordering::equal;
    }
    int c = node_->text.compare(o.node_->text);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

struct FormulaHash {
    std::size_t operator()(const Formula &f) const noexcept { return f.hash(); }
};

// Grammar: atoms [a-z][a-z0-9_]*, units 1 bot 0 top, postfix ^, prefix ! ?,
// binary * @ & + (left associative; mixing needs parentheses), A -o B.
Formula parse_formula(std::string_view text);
std::string render_formula(const Formula &f);

// De Morgan normal form: pushes every Dual down to the literals.
Formula nnf(const Formula &f);
// Dual of an NNF formula, again in NNF. Throws Error(Invalid) otherwise.
Formula dual(const Formula &f);

std::size_t size(const Formula &f);
// Polarity of the top connective of an NNF formula.
Polarity polarity(const Formula &f);
bool is_multiplicative(Connective c);
bool is_additive(Connective c);

// Monolateral sequent: a multiset kept sorted by the canonical formula order.
class Sequent {
public:
    Sequent() = default;
    explicit Sequent(std::vector<Formula> formulas);

    const std::vector<Formula> &formulas() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const Formula &operator[](std::size_t i) const { return items_[i]; }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }

    // Sum of formula sizes.
    std::size_t total_size() const noexcept;
    bool is_nnf() const noexcept;
    bool has_exponential() const noexcept;
    std::string text() const;

    // Position of the first occurrence of f, or -1.
    int find(const Formula &f) const noexcept;

    bool operator==(const Sequent &o) const { return items_ == o.items_; }

private:
    std::vector<Formula> items_;
};

// "|- F1, ..., Fn"; the result is in NNF.
Sequent parse_sequent(std::string_view text);
std::string render_sequent(const Sequent &s);

} // namespace llw
