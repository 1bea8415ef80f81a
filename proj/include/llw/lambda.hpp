#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llw/error.hpp"
#include "llw/formula.hpp"
#include "llw/generators.hpp"
#include "llw/proof.hpp"

namespace llw::lam {

enum class TermKind : std::uint8_t { Var, Abs, App };

class Term {
public:
    static Term var(std::string_view name);
    static Term abs(std::string_view name, const Term &body);
    static Term app(const Term &fun, const Term &arg);

    TermKind kind() const noexcept;
    // Variable name, or the binder of an abstraction.
    const std::string &name() const noexcept;
    const Term &body() const;   // Abs
    const Term &fun() const;    // App
    const Term &arg() const;    // App

    // Node count: variables, abstractions and applications.
    std::size_t size() const noexcept;

    bool operator==(const Term &o) const;   // syntactic, names included

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Grammar: \x. M  (or λx. M), \x y. M, application by juxtaposition, parens.
// Variables are [a-z][a-zA-Z0-9_']*. Binders are renamed apart so that no
// two binders share a name and no binder reuses a free variable's name.
Term parse_term(std::string_view text);
std::string to_string(const Term &t);

std::vector<std::string> free_vars(const Term &t);   // sorted
bool alpha_equal(const Term &a, const Term &b);

// No variable occurs more than once.
bool is_affine(const Term &t);

// Capture-avoiding t[n/x].
Term substitute(const Term &t, const std::string &x, const Term &n);

// One leftmost-outermost step, or nullopt on a normal form.
std::optional<Term> beta_step(const Term &t);

struct NormalizeResult {
    Term term;
    std::size_t steps = 0;
    bool fuel_exhausted = false;
    std::vector<std::size_t> sizes;   // term size before each step, then the final size
};

NormalizeResult beta_normalize(const Term &t, std::size_t fuel);

// \f. \x. f (f ... (f x))
Term church(unsigned n);
// Random affine term of exactly `size` nodes. Abstractions bind fresh names;
// each bound variable is used at most once and the remaining leaves are
// distinct free variables. Redexes are favoured.
Term random_affine_term(Rng &rng, std::size_t size);
// Random closed term of at most `max_size` nodes (not necessarily typable).
Term random_closed_term(Rng &rng, std::size_t max_size);

// ---------------------------------------------------------------------------
// Simple types

enum class TypeKind : std::uint8_t { Atom, Arrow };

class Type {
public:
    static Type atom(std::string_view name);
    static Type arrow(const Type &from, const Type &to);

    TypeKind kind() const noexcept;
    const std::string &name() const noexcept;
    const Type &from() const;
    const Type &to() const;

    bool operator==(const Type &o) const;

private:
    struct Node;
    explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// a -> b -> c, right associative; atoms [a-z][a-z0-9_]*.
Type parse_type(std::string_view text);
std::string to_string(const Type &t);

using Context = std::map<std::string, Type>;
// "x: a, f: a -> b"
Context parse_context(std::string_view text);
std::string to_string(const Context &c);

enum class TypingRule : std::uint8_t { Variable, Abstraction, Application };

struct TypingDerivation {
    Context context;
    Term term;
    Type type;
    TypingRule rule = TypingRule::Variable;
    std::vector<TypingDerivation> premises;
};

class TypeError : public Error {
public:
    TypeError(const std::string &message, std::string subterm)
        : Error(ErrorKind::Invalid, message + " in " + subterm), subterm_(std::move(subterm)) {}
    const std::string &subterm() const noexcept { return subterm_; }

private:
    std::string subterm_;
};

// Syntax-directed: the types of application arguments are found by
// unification. Argument types left undetermined become the atom "o".
// Binders that clash with context names are renamed in the derivation.
TypingDerivation typecheck(const Context &ctx, const Term &t, const Type &ty);
// Most general type with its variables named a, b, c, ... in order of
// appearance; nullopt for untypable terms.
std::optional<Type> infer_type(const Context &ctx, const Term &t);
// Every node instantiates its rule and the premises fit.
std::vector<std::string> check_derivation(const TypingDerivation &d);
std::string pretty_derivation(const TypingDerivation &d);

// ---------------------------------------------------------------------------
// Translation into linear logic

// a* = a, (B -> C)* = ?(B*)^ @ C*, in negation normal form.
Formula star_type(const Type &t);
// ?(Gamma*)^, A* as a sequent.
Sequent translated_sequent(const Context &ctx, const Type &ty);

struct Translation {
    ProofPtr proof;
    std::map<std::string, int> var_position;   // conclusion position of ?(x*)^
    int result_position = -1;                  // conclusion position of A*
};

Translation translate(const TypingDerivation &d);

} // namespace llw::lam
