#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "llw/generators.hpp"
#include "llw/proof.hpp"

namespace llw::coh {

enum class TokenKind : std::uint8_t { Atom, Star, Inj, Pair, Set };

// Hash-consed structured token. Two tokens are equal exactly when they have
// the same structure; sets are compared extensionally. Tokens live for the
// whole process.
class Token {
public:
    Token() = default;

    static Token atom(std::string_view label);
    static Token star();
    // tag 0 prints as "x.1", tag 1 as "x.2".
    static Token inj(int tag, Token t);
    static Token pair(Token a, Token b);
    static Token set(std::vector<Token> elems);

    TokenKind kind() const;
    const std::string &label() const;
    int tag() const;
    Token inner() const;   // payload of an Inj
    Token first() const;
    Token second() const;
    std::vector<Token> elems() const;   // members of a Set, ordered by id
    std::size_t elem_count() const;

    std::uint32_t id() const noexcept { return id_; }
    bool valid() const noexcept { return id_ != 0; }
    bool operator==(const Token &o) const noexcept = default;
    std::strong_ordering operator<=>(const Token &o) const noexcept { return id_ <=> o.id_; }

private:
    explicit Token(std::uint32_t id) : id_(id) {}
    friend class TokenStore;
    std::uint32_t id_ = 0;
};

struct TokenHash {
    std::size_t operator()(const Token &t) const noexcept { return t.id(); }
};

// Structural order used for printing; independent of interning order.
bool canonical_less(Token a, Token b);
std::string to_string(Token t);
// Parses the printed syntax: label, *, x.1, x.2, (x,y), {x,y,...}.
Token parse_token(std::string_view text);

// A clique: token set sorted by id.
using Clique = std::vector<Token>;
Clique make_clique(std::vector<Token> tokens);
std::string to_string(const Clique &c);

inline constexpr std::size_t kWebLimit = std::size_t{1} << 16;
inline constexpr std::size_t kCliqueWebBound = 12;

enum class SpaceKind : std::uint8_t { Explicit, Unit, Empty, Tensor, Par, With, Plus, Bang, WhyNot, Dual };

// Finite coherence space. Composite spaces compute coherence from the token
// structure, so their webs are only materialized on demand.
class Space {
public:
    Space();   // the empty space

    // Tokens must be distinct; pairs list the strictly coherent tokens.
    static Space explicit_space(std::vector<Token> web, const std::vector<std::pair<Token, Token>> &coherent);
    static Space unit();
    static Space empty();
    static Space tensor(const Space &a, const Space &b);
    static Space par(const Space &a, const Space &b);
    static Space with(const Space &a, const Space &b);
    static Space plus(const Space &a, const Space &b);
    static Space bang(const Space &a);
    static Space why_not(const Space &a);
    static Space dual(const Space &a);
    static Space lollipop(const Space &a, const Space &b);

    SpaceKind kind() const;
    const Space &left() const;
    const Space &right() const;

    bool contains(Token t) const;
    // Reflexive coherence; both tokens are assumed to be in the web.
    bool coh(Token x, Token y) const;
    bool incoh(Token x, Token y) const { return x == y || !coh(x, y); }
    bool strict_coh(Token x, Token y) const { return x != y && coh(x, y); }
    bool strict_incoh(Token x, Token y) const { return !coh(x, y); }

    // Throws Error(Budget) past `limit` tokens.
    const std::vector<Token> &web(std::size_t limit = kWebLimit) const;
    bool is_clique(const Clique &c) const;

    std::string describe() const;

private:
    struct Node;
    static std::shared_ptr<Node> new_node(SpaceKind k);
    explicit Space(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Validates an explicit relation table: reflexive, symmetric. Returns the
// first problem found.
std::optional<std::string> validate_relation(const std::vector<Token> &web,
                                             const std::function<bool(Token, Token)> &coh);

// All cliques of a space with at most `max_web` tokens (Error(Budget) past it).
std::vector<Clique> enum_cliques(const Space &s, std::size_t max_web = kCliqueWebBound);
// Cliques of an arbitrary token list; stops with Error(Budget) past `max_count`.
std::vector<Clique> enum_cliques_of(const std::vector<Token> &web, const std::function<bool(Token, Token)> &coh,
                                    std::size_t max_count);

// Tokens 0..k pairwise incoherent.
Space nat_space(int k);
Space discrete_space(int n, std::string_view prefix = "e");
Space codiscrete_space(int n, std::string_view prefix = "e");
// Every labelled space on tokens prefix0..prefix{n-1}.
std::vector<Space> all_spaces(int n, std::string_view prefix = "e");
Space random_space(Rng &rng, int max_web, std::string_view prefix = "e");

using AtomEnv = std::map<std::string, Space>;

// Lines "name: tok tok ... | t1~t2 t3~t4"; '#' comments.
AtomEnv parse_atom_env(std::string_view text);
std::string write_atom_env(const AtomEnv &env);
// Binds every atom of `atoms` to a random web of 1..max_web tokens.
AtomEnv random_env(Rng &rng, const std::vector<std::string> &atoms, int max_web);
// Atom names of the formulas in a proof, sorted.
std::vector<std::string> proof_atoms(const Proof &p);

// Throws Error(Invalid) for non-NNF input or unbound atoms.
Space build_space(const Formula &f, const AtomEnv &env);

// A token of A1 par ... par An, kept as one token per conclusion position.
using Point = std::vector<Token>;

struct Interpretation {
    Sequent conclusion;
    std::vector<Point> points;   // sorted, duplicate-free
};

struct InterpretLimits {
    std::size_t max_points = 200'000;
    std::size_t max_web = 4096;
};

// Throws Error(Budget) when an intermediate clique or web outgrows the limits.
Interpretation interpret_proof(const Proof &p, const AtomEnv &env, const InterpretLimits &limits = {});
// Points p, q are coherent when equal or strictly coherent at some position.
bool is_clique(const Interpretation &in, const AtomEnv &env);
// Moves position i to map[i].
Interpretation permute(const Interpretation &in, const Sequent &target, const std::vector<int> &map);
// Right-nested pair token for the par of the conclusion.
Token fold_point(const Point &p);
std::string to_string(const Interpretation &in);

// Monotone candidate map D(E) -> D(E'), stored as a table over enum_cliques(E).
struct FunctionTable {
    Space domain;
    Space codomain;
    std::vector<Clique> inputs;
    std::vector<Clique> outputs;

    const Clique &operator()(const Clique &x) const;
};

// Wraps an arbitrary clique-to-clique function.
FunctionTable tabulate(const Space &e, const Space &e2, const std::function<Clique(const Clique &)> &f);
bool is_monotone(const FunctionTable &f);

struct StabilityViolation {
    Clique x;
    Clique y;
    std::string message;
};

std::optional<StabilityViolation> stability_violation(const FunctionTable &f);
bool is_stable(const FunctionTable &f);
// Stable and preserving compatible unions, the empty union included.
bool is_linear(const FunctionTable &f);
// f <=s g.
bool stable_le(const FunctionTable &f, const FunctionTable &g);

// Clique of !E -o E'; tokens (x, e'). Throws Error(Invalid) for unstable f.
Clique trace(const FunctionTable &f);
// Throws Error(Invalid) unless phi is a clique of !E -o E'.
FunctionTable fun(const Space &e, const Space &e2, const Clique &phi);
// All monotone tables between two small spaces.
std::vector<FunctionTable> all_monotone_functions(const Space &e, const Space &e2);

// Linear map given by its trace, a relation between the two webs.
struct LinearMap {
    Space from;
    Space to;
    std::set<std::pair<Token, Token>> trace;

    Clique apply(const Clique &x) const;
};

LinearMap identity_map(const Space &e, std::size_t limit = kWebLimit);
// g after f.
LinearMap compose(const LinearMap &g, const LinearMap &f);
LinearMap tensor_map(const LinearMap &f, const LinearMap &g);
bool is_clique_trace(const LinearMap &f);

// Comonad structure on !E.
LinearMap epsilon(const Space &e);
LinearMap delta(const Space &e, std::size_t max_out_card = SIZE_MAX);
// !f, with output tokens restricted to cliques of at most max_out_card tokens.
LinearMap bang_map(const LinearMap &f, std::size_t max_out_card = SIZE_MAX);
// Comonoid maps e: !E -> 1 and d: !E -> !E * !E, built from epsilon/delta.
LinearMap comonoid_unit(const Space &e);
LinearMap comonoid_mult(const Space &e);

struct LawReport {
    std::size_t checks = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    void merge(const LawReport &o);
};

// The three comonad equations; the third one compares the two maps on output
// tokens of !!!E holding at most `max_card` elements.
LawReport check_comonad_laws(const Space &e, std::size_t max_card = 2);
LawReport check_comonoid_laws(const Space &e);
// Coherence-preserving bijection web(!(A&B)) <-> web(!A * !B).
LawReport check_bang_with_iso(const Space &a, const Space &b);
// D(A&B) <-> D(A) x D(B).
LawReport check_with_cliques_iso(const Space &a, const Space &b);
// The two alternative coherence relations of A -o B against the definition.
LawReport check_lollipop_characterizations(const Space &a, const Space &b);

} // namespace llw::coh
