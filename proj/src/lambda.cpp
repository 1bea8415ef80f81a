#include "llw/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace llw::lam {

// ---------------------------------------------------------------------------
// Terms

struct Term::Node {
    TermKind kind;
    std::string name;
    std::vector<Term> kids;
    std::size_t size = 1;
};

Term Term::var(std::string_view name) {
    return Term(std::make_shared<const Node>(Node{TermKind::Var, std::string(name), {}, 1}));
}

Term Term::abs(std::string_view name, const Term &body) {
    return Term(std::make_shared<const Node>(Node{TermKind::Abs, std::string(name), {body}, 1 + body.size()}));
}

Term Term::app(const Term &fun, const Term &arg) {
    return Term(std::make_shared<const Node>(Node{TermKind::App, {}, {fun, arg}, 1 + fun.size() + arg.size()}));
}

TermKind Term::kind() const noexcept { return node_->kind; }
const std::string &Term::name() const noexcept { return node_->name; }
std::size_t Term::size() const noexcept { return node_->size; }

const Term &Term::body() const {
    if (kind() != TermKind::Abs) fail(ErrorKind::Internal, "body of a non-abstraction");
    return node_->kids[0];
}

const Term &Term::fun() const {
    if (kind() != TermKind::App) fail(ErrorKind::Internal, "operator of a non-application");
    return node_->kids[0];
}

const Term &Term::arg() const {
    if (kind() != TermKind::App) fail(ErrorKind::Internal, "operand of a non-application");
    return node_->kids[1];
}

bool Term::operator==(const Term &o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind() || name() != o.name() || size() != o.size()) return false;
    for (std::size_t i = 0; i < node_->kids.size(); ++i) {
        if (!(node_->kids[i] == o.node_->kids[i])) return false;
    }
    return true;
}

namespace {

bool is_var_start(char c) { return c >= 'a' && c <= 'z'; }
bool is_var_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

void collect_names(const Term &t, std::set<std::string> &out) {
    out.insert(t.name());
    if (t.kind() == TermKind::Abs) {
        collect_names(t.body(), out);
    } else if (t.kind() == TermKind::App) {
        collect_names(t.fun(), out);
        collect_names(t.arg(), out);
    }
}

void free_vars_into(const Term &t, std::set<std::string> &bound, std::set<std::string> &out) {
    switch (t.kind()) {
    case TermKind::Var:
        if (!bound.count(t.name())) out.insert(t.name());
        return;
    case TermKind::Abs: {
        const bool fresh = bound.insert(t.name()).second;
        free_vars_into(t.body(), bound, out);
        if (fresh) bound.erase(t.name());
        return;
    }
    case TermKind::App:
        free_vars_into(t.fun(), bound, out);
        free_vars_into(t.arg(), bound, out);
        return;
    }
}

std::set<std::string> free_set(const Term &t) {
    std::set<std::string> bound, out;
    free_vars_into(t, bound, out);
    return out;
}

// Strips trailing digits and appends the first counter not in `avoid`.
std::string fresh_name(const std::string &base, const std::set<std::string> &avoid) {
    if (!avoid.count(base)) return base;
    std::string stem = base;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.empty()) stem = "v";
    for (unsigned i = 1;; ++i) {
        std::string cand = stem + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

class TermParser {
public:
    explicit TermParser(std::string_view text) : s_(text) {}

    Term parse() {
        Term t = term();
        skip();
        if (i_ != s_.size()) error("unexpected '" + std::string(1, s_[i_]) + "'");
        return t;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    [[noreturn]] void error(const std::string &msg) const { throw SyntaxError(msg, i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool lambda_ahead() {
        skip();
        if (i_ < s_.size() && s_[i_] == '\\') return true;
        return s_.substr(i_, 2) == "\xCE\xBB";   // UTF-8 lambda
    }

    std::string name() {
        skip();
        if (i_ >= s_.size() || !is_var_start(s_[i_])) error("expected a variable");
        const std::size_t start = i_;
        while (i_ < s_.size() && is_var_char(s_[i_])) ++i_;
        return std::string(s_.substr(start, i_ - start));
    }

    Term term() {
        if (lambda_ahead()) {
            i_ += s_[i_] == '\\' ? 1 : 2;
            std::vector<std::string> binders{name()};
            skip();
            while (i_ < s_.size() && is_var_start(s_[i_])) {
                binders.push_back(name());
                skip();
            }
            if (i_ >= s_.size() || s_[i_] != '.') error("expected '.' after the binders");
            ++i_;
            Term body = term();
            for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::abs(*it, body);
            return body;
        }
        std::optional<Term> acc;
        for (;;) {
            skip();
            if (i_ >= s_.size() || s_[i_] == ')') break;
            Term next = lambda_ahead() ? term() : atom();
            acc = acc ? Term::app(*acc, next) : next;
        }
        if (!acc) error("expected a term");
        return *acc;
    }

    Term atom() {
        skip();
        if (i_ < s_.size() && s_[i_] == '(') {
            ++i_;
            Term t = term();
            skip();
            if (i_ >= s_.size() || s_[i_] != ')') error("expected ')'");
            ++i_;
            return t;
        }
        return Term::var(name());
    }
};

Term rename_apart(const Term &t, std::map<std::string, std::string> &env, std::set<std::string> &used) {
    switch (t.kind()) {
    case TermKind::Var: {
        auto it = env.find(t.name());
        return it == env.end() ? t : Term::var(it->second);
    }
    case TermKind::Abs: {
        const std::string fresh = fresh_name(t.name(), used);
        used.insert(fresh);
        auto saved = env.find(t.name()) == env.end() ? std::optional<std::string>() : env[t.name()];
        env[t.name()] = fresh;
        Term body = rename_apart(t.body(), env, used);
        if (saved) env[t.name()] = *saved; else env.erase(t.name());
        return Term::abs(fresh, body);
    }
    case TermKind::App: {
        Term f = rename_apart(t.fun(), env, used);
        return Term::app(f, rename_apart(t.arg(), env, used));
    }
    }
    fail(ErrorKind::Internal, "unknown term kind");
}

void print(const Term &t, std::string &out) {
    switch (t.kind()) {
    case TermKind::Var:
        out += t.name();
        return;
    case TermKind::Abs:
        out += '\\';
        out += t.name();
        out += ". ";
        print(t.body(), out);
        return;
    case TermKind::App: {
        const bool wrap_fun = t.fun().kind() == TermKind::Abs;
        const bool wrap_arg = t.arg().kind() != TermKind::Var;
        if (wrap_fun) out += '(';
        print(t.fun(), out);
        if (wrap_fun) out += ')';
        out += ' ';
        if (wrap_arg) out += '(';
        print(t.arg(), out);
        if (wrap_arg) out += ')';
        return;
    }
    }
}

bool alpha_eq(const Term &a, const Term &b, std::map<std::string, std::string> &la,
              std::map<std::string, std::string> &lb, int depth) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case TermKind::Var: {
        auto ia = la.find(a.name());
        auto ib = lb.find(b.name());
        if (ia == la.end() || ib == lb.end()) return ia == la.end() && ib == lb.end() && a.name() == b.name();
        return ia->second == ib->second;
    }
    case TermKind::Abs: {
        auto sa = la.count(a.name()) ? std::optional<std::string>(la[a.name()]) : std::nullopt;
        auto sb = lb.count(b.name()) ? std::optional<std::string>(lb[b.name()]) : std::nullopt;
        const std::string level = std::to_string(depth);
        la[a.name()] = level;
        lb[b.name()] = level;
        const bool r = alpha_eq(a.body(), b.body(), la, lb, depth + 1);
        if (sa) la[a.name()] = *sa; else la.erase(a.name());
        if (sb) lb[b.name()] = *sb; else lb.erase(b.name());
        return r;
    }
    case TermKind::App:
        return alpha_eq(a.fun(), b.fun(), la, lb, depth) && alpha_eq(a.arg(), b.arg(), la, lb, depth);
    }
    return false;
}

bool affine_into(const Term &t, std::set<std::string> &seen) {
    switch (t.kind()) {
    case TermKind::Var:
        return seen.insert(t.name()).second;
    case TermKind::Abs:
        return affine_into(t.body(), seen);
    case TermKind::App:
        return affine_into(t.fun(), seen) && affine_into(t.arg(), seen);
    }
    return false;
}

Term subst(const Term &t, const std::string &x, const Term &n, const std::set<std::string> &fv_n) {
    switch (t.kind()) {
    case TermKind::Var:
        return t.name() == x ? n : t;
    case TermKind::App:
        return Term::app(subst(t.fun(), x, n, fv_n), subst(t.arg(), x, n, fv_n));
    case TermKind::Abs: {
        if (t.name() == x) return t;
        const std::set<std::string> fv_body = free_set(t.body());
        if (!fv_body.count(x)) return t;
        if (!fv_n.count(t.name())) return Term::abs(t.name(), subst(t.body(), x, n, fv_n));
        std::set<std::string> avoid = fv_n;
        avoid.insert(fv_body.begin(), fv_body.end());
        avoid.insert(x);
        const std::string z = fresh_name(t.name(), avoid);
        Term body = subst(t.body(), t.name(), Term::var(z), {z});
        return Term::abs(z, subst(body, x, n, fv_n));
    }
    }
    fail(ErrorKind::Internal, "unknown term kind");
}

} // namespace

Term parse_term(std::string_view text) {
    Term raw = TermParser(text).parse();
    std::set<std::string> used = free_set(raw);
    std::map<std::string, std::string> env;
    return rename_apart(raw, env, used);
}

std::string to_string(const Term &t) {
    std::string out;
    print(t, out);
    return out;
}

std::vector<std::string> free_vars(const Term &t) {
    auto s = free_set(t);
    return {s.begin(), s.end()};
}

bool alpha_equal(const Term &a, const Term &b) {
    std::map<std::string, std::string> la, lb;
    return alpha_eq(a, b, la, lb, 0);
}

bool is_affine(const Term &t) {
    std::set<std::string> seen;
    return affine_into(t, seen);
}

Term substitute(const Term &t, const std::string &x, const Term &n) { return subst(t, x, n, free_set(n)); }

std::optional<Term> beta_step(const Term &t) {
    switch (t.kind()) {
    case TermKind::Var:
        return std::nullopt;
    case TermKind::Abs:
        if (auto b = beta_step(t.body())) return Term::abs(t.name(), *b);
        return std::nullopt;
    case TermKind::App:
        if (t.fun().kind() == TermKind::Abs) {
            return substitute(t.fun().body(), t.fun().name(), t.arg());
        }
        if (auto f = beta_step(t.fun())) return Term::app(*f, t.arg());
        if (auto a = beta_step(t.arg())) return Term::app(t.fun(), *a);
        return std::nullopt;
    }
    return std::nullopt;
}

NormalizeResult beta_normalize(const Term &t, std::size_t fuel) {
    NormalizeResult r{t, 0, false, {}};
    for (;;) {
        r.sizes.push_back(r.term.size());
        std::optional<Term> next = beta_step(r.term);
        if (!next) return r;
        if (r.steps == fuel) {
            r.fuel_exhausted = true;
            return r;
        }
        r.term = *next;
        ++r.steps;
    }
}

Term church(unsigned n) {
    Term body = Term::var("x");
    for (unsigned i = 0; i < n; ++i) body = Term::app(Term::var("f"), body);
    return Term::abs("f", Term::abs("x", body));
}

namespace {

struct AffineGen {
    Rng &rng;
    std::vector<std::string> scope;   // bound and still unused
    unsigned binders = 0;
    unsigned frees = 0;

    bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

    Term leaf() {
        if (!scope.empty() && coin(0.85)) {
            std::size_t i = rng() % scope.size();
            std::string x = scope[i];
            scope.erase(scope.begin() + static_cast<std::ptrdiff_t>(i));
            return Term::var(x);
        }
        return Term::var("y" + std::to_string(frees++));
    }

    Term abs(std::size_t size) {
        const std::string x = "x" + std::to_string(binders++);
        scope.push_back(x);
        Term body = gen(size - 1);
        std::erase(scope, x);
        return Term::abs(x, body);
    }

    Term gen(std::size_t size) {
        if (size == 1) return leaf();
        if (size == 2) return abs(2);
        if (coin(0.35)) return abs(size);
        // Application; the operator is an abstraction half of the time.
        if (size >= 4 && coin(0.5)) {
            std::size_t k = 2 + rng() % (size - 3);
            Term f = abs(k);
            return Term::app(f, gen(size - 1 - k));
        }
        std::size_t k = 1 + rng() % (size - 2);
        Term f = gen(k);
        return Term::app(f, gen(size - 1 - k));
    }
};

struct ClosedGen {
    Rng &rng;
    std::vector<std::string> scope;
    unsigned binders = 0;

    Term gen(std::size_t size) {
        if (scope.empty() || (size >= 2 && rng() % 3 == 0)) {
            const std::string x = "x" + std::to_string(binders++);
            scope.push_back(x);
            Term body = gen(std::max<std::size_t>(size, 2) - 1);
            scope.pop_back();
            return Term::abs(x, body);
        }
        if (size < 3) return Term::var(scope[rng() % scope.size()]);
        std::size_t k = 1 + rng() % (size - 2);
        Term f = gen(k);
        return Term::app(f, gen(size - 1 - k));
    }
};

} // namespace

Term random_affine_term(Rng &rng, std::size_t size) {
    if (size == 0) fail(ErrorKind::Invalid, "terms have at least one node");
    AffineGen g{rng, {}, 0, 0};
    return g.gen(size);
}

Term random_closed_term(Rng &rng, std::size_t max_size) {
    if (max_size < 2) fail(ErrorKind::Invalid, "closed terms have at least two nodes");
    ClosedGen g{rng, {}, 0};
    Term t = g.gen(1 + rng() % max_size);
    while (t.size() > max_size) t = g.gen(1 + rng() % max_size);
    return t;
}

// ---------------------------------------------------------------------------
// Types

struct Type::Node {
    TypeKind kind;
    std::string name;
    std::vector<Type> kids;
};

Type Type::atom(std::string_view name) {
    return Type(std::make_shared<const Node>(Node{TypeKind::Atom, std::string(name), {}}));
}

Type Type::arrow(const Type &from, const Type &to) {
    return Type(std::make_shared<const Node>(Node{TypeKind::Arrow, {}, {from, to}}));
}

TypeKind Type::kind() const noexcept { return node_->kind; }
const std::string &Type::name() const noexcept { return node_->name; }

const Type &Type::from() const {
    if (kind() != TypeKind::Arrow) fail(ErrorKind::Internal, "domain of an atomic type");
    return node_->kids[0];
}

const Type &Type::to() const {
    if (kind() != TypeKind::Arrow) fail(ErrorKind::Internal, "codomain of an atomic type");
    return node_->kids[1];
}

bool Type::operator==(const Type &o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    if (kind() == TypeKind::Atom) return name() == o.name();
    return from() == o.from() && to() == o.to();
}

namespace {

class TypeParser {
public:
    explicit TypeParser(std::string_view text, std::size_t offset = 0) : s_(text), offset_(offset) {}

    Type parse() {
        Type t = type();
        skip();
        if (i_ != s_.size()) error("unexpected '" + std::string(1, s_[i_]) + "'");
        return t;
    }

private:
    std::string_view s_;
    std::size_t offset_;
    std::size_t i_ = 0;

    [[noreturn]] void error(const std::string &msg) const { throw SyntaxError(msg, offset_ + i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    Type type() {
        Type left = atomic();
        skip();
        if (s_.substr(i_, 2) == "->") {
            i_ += 2;
            return Type::arrow(left, type());
        }
        return left;
    }

    Type atomic() {
        skip();
        if (i_ < s_.size() && s_[i_] == '(') {
            ++i_;
            Type t = type();
            skip();
            if (i_ >= s_.size() || s_[i_] != ')') error("expected ')'");
            ++i_;
            return t;
        }
        if (i_ >= s_.size() || !is_var_start(s_[i_])) error("expected a type");
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        return Type::atom(s_.substr(start, i_ - start));
    }
};

void print(const Type &t, std::string &out) {
    if (t.kind() == TypeKind::Atom) {
        out += t.name();
        return;
    }
    const bool wrap = t.from().kind() == TypeKind::Arrow;
    if (wrap) out += '(';
    print(t.from(), out);
    if (wrap) out += ')';
    out += " -> ";
    print(t.to(), out);
}

} // namespace

Type parse_type(std::string_view text) { return TypeParser(text).parse(); }

std::string to_string(const Type &t) {
    std::string out;
    print(t, out);
    return out;
}

Context parse_context(std::string_view text) {
    Context ctx;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        const std::size_t colon = item.find(':');
        std::size_t b = 0;
        while (b < item.size() && std::isspace(static_cast<unsigned char>(item[b]))) ++b;
        if (b == item.size() && comma == text.size() && ctx.empty()) break;   // empty context
        if (colon == std::string_view::npos) throw SyntaxError("expected 'name: type'", pos + b);
        std::string name(item.substr(0, colon));
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        if (name.empty() || !is_var_start(name[0]) ||
            !std::all_of(name.begin(), name.end(), [](char c) { return is_var_char(c); })) {
            throw SyntaxError("bad variable name '" + name + "'", pos + b);
        }
        Type ty = TypeParser(item.substr(colon + 1), pos + colon + 1).parse();
        if (!ctx.emplace(name, ty).second) {
            throw SyntaxError("variable '" + name + "' declared twice", pos + b);
        }
        pos = comma + 1;
    }
    return ctx;
}

std::string to_string(const Context &c) {
    std::string out;
    for (const auto &[x, ty] : c) {
        if (!out.empty()) out += ", ";
        out += x + ": " + to_string(ty);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Typing

namespace {

// Type terms with unification variables, stored in a union-find arena.
class Unifier {
public:
    int fresh() {
        nodes_.push_back({Kind::Var, {}, -1, -1, static_cast<int>(nodes_.size())});
        return nodes_.back().parent;
    }

    int from_type(const Type &t) {
        if (t.kind() == TypeKind::Atom) {
            nodes_.push_back({Kind::Atom, t.name(), -1, -1, static_cast<int>(nodes_.size())});
            return nodes_.back().parent;
        }
        const int a = from_type(t.from());
        const int b = from_type(t.to());
        return arrow(a, b);
    }

    int arrow(int a, int b) {
        nodes_.push_back({Kind::Arrow, {}, a, b, static_cast<int>(nodes_.size())});
        return nodes_.back().parent;
    }

    int find(int x) {
        while (nodes_[static_cast<std::size_t>(x)].parent != x) {
            int &p = nodes_[static_cast<std::size_t>(x)].parent;
            p = nodes_[static_cast<std::size_t>(p)].parent;
            x = p;
        }
        return x;
    }

    bool unify(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return true;
        Node nx = node(x);
        Node ny = node(y);
        if (nx.kind == Kind::Var) return bind(x, y);
        if (ny.kind == Kind::Var) return bind(y, x);
        if (nx.kind != ny.kind) return false;
        if (nx.kind == Kind::Atom) return nx.name == ny.name;
        // Merging only after the children keeps the occurs check sound.
        if (!unify(nx.from, ny.from) || !unify(nx.to, ny.to)) return false;
        x = find(x);
        y = find(y);
        if (x != y) nodes_[static_cast<std::size_t>(x)].parent = y;
        return true;
    }

    bool is_arrow_or_var(int x) { return node(find(x)).kind != Kind::Atom; }

    // Variables are named by `var_name`.
    Type resolve(int x, const std::function<std::string(int)> &var_name) {
        x = find(x);
        const Node n = node(x);
        switch (n.kind) {
        case Kind::Atom:
            return Type::atom(n.name);
        case Kind::Var:
            return Type::atom(var_name(x));
        case Kind::Arrow: {
            Type from = resolve(n.from, var_name);
            return Type::arrow(from, resolve(n.to, var_name));
        }
        }
        fail(ErrorKind::Internal, "bad type node");
    }

    std::string show(int x) {
        return to_string(resolve(x, [](int v) { return "?" + std::to_string(v); }));
    }

private:
    enum class Kind { Var, Atom, Arrow };
    struct Node {
        Kind kind;
        std::string name;
        int from;
        int to;
        int parent;
    };
    std::vector<Node> nodes_;

    Node node(int x) const { return nodes_[static_cast<std::size_t>(x)]; }

    bool occurs(int v, int x) {
        x = find(x);
        if (x == v) return true;
        const Node n = node(x);
        return n.kind == Kind::Arrow && (occurs(v, n.from) || occurs(v, n.to));
    }

    bool bind(int v, int x) {
        if (occurs(v, x)) return false;
        nodes_[static_cast<std::size_t>(v)].parent = x;
        return true;
    }
};

// Derivation skeleton with unification variables.
struct Ann {
    std::map<std::string, int> ctx;
    Term term;
    int type;
    TypingRule rule;
    std::vector<Ann> kids;
};

struct Checker {
    Unifier u;
    std::set<std::string> names;   // every name seen, for fresh binders

    Ann check(const std::map<std::string, int> &ctx, const Term &t, int expected) {
        switch (t.kind()) {
        case TermKind::Var: {
            auto it = ctx.find(t.name());
            if (it == ctx.end()) throw TypeError("unbound variable " + t.name(), to_string(t));
            if (!u.unify(it->second, expected)) {
                throw TypeError(t.name() + " has type " + u.show(it->second) + " but " + u.show(expected) +
                                    " is expected",
                                to_string(t));
            }
            return {ctx, t, expected, TypingRule::Variable, {}};
        }
        case TermKind::Abs: {
            std::string x = t.name();
            Term body = t.body();
            if (ctx.count(x)) {
                x = fresh_name(x, names);
                names.insert(x);
                body = substitute(body, t.name(), Term::var(x));
            }
            if (!u.is_arrow_or_var(expected)) {
                throw TypeError("an abstraction cannot have atomic type " + u.show(expected), to_string(t));
            }
            const int a = u.fresh();
            const int b = u.fresh();
            if (!u.unify(expected, u.arrow(a, b))) {
                throw TypeError("an abstraction cannot have type " + u.show(expected), to_string(t));
            }
            auto inner = ctx;
            inner[x] = a;
            Ann kid = check(inner, body, b);
            Term renamed = Term::abs(x, body);
            return {ctx, renamed, expected, TypingRule::Abstraction, {std::move(kid)}};
        }
        case TermKind::App: {
            const int a = u.fresh();
            Ann f = check(ctx, t.fun(), u.arrow(a, expected));
            Ann n = check(ctx, t.arg(), a);
            Term rebuilt = Term::app(f.term, n.term);
            return {ctx, rebuilt, expected, TypingRule::Application, {std::move(f), std::move(n)}};
        }
        }
        fail(ErrorKind::Internal, "unknown term kind");
    }
};

TypingDerivation finish(Checker &c, const Ann &a, const std::function<std::string(int)> &var_name) {
    TypingDerivation d{{}, a.term, c.u.resolve(a.type, var_name), a.rule, {}};
    for (const auto &[x, ty] : a.ctx) d.context.emplace(x, c.u.resolve(ty, var_name));
    for (const Ann &k : a.kids) d.premises.push_back(finish(c, k, var_name));
    return d;
}

void atoms_of(const Type &t, std::set<std::string> &out) {
    if (t.kind() == TypeKind::Atom) {
        out.insert(t.name());
    } else {
        atoms_of(t.from(), out);
        atoms_of(t.to(), out);
    }
}

} // namespace

TypingDerivation typecheck(const Context &ctx, const Term &t, const Type &ty) {
    Checker c;
    collect_names(t, c.names);
    std::map<std::string, int> env;
    for (const auto &[x, xt] : ctx) {
        env[x] = c.u.from_type(xt);
        c.names.insert(x);
    }
    Ann a = c.check(env, t, c.u.from_type(ty));
    return finish(c, a, [](int) { return std::string("o"); });
}

std::optional<Type> infer_type(const Context &ctx, const Term &t) {
    Checker c;
    collect_names(t, c.names);
    std::map<std::string, int> env;
    std::set<std::string> taken;
    for (const auto &[x, xt] : ctx) {
        env[x] = c.u.from_type(xt);
        atoms_of(xt, taken);
        c.names.insert(x);
    }
    const int top = c.u.fresh();
    try {
        c.check(env, t, top);
    } catch (const TypeError &) {
        return std::nullopt;
    }
    std::map<int, std::string> names;
    char next = 'a';
    auto var_name = [&](int v) {
        auto it = names.find(v);
        if (it != names.end()) return it->second;
        std::string n;
        do {
            n = next <= 'z' ? std::string(1, next) : "t" + std::to_string(next - 'z');
            ++next;
        } while (taken.count(n));
        names[v] = n;
        return n;
    };
    return c.u.resolve(top, var_name);
}

std::vector<std::string> check_derivation(const TypingDerivation &d) {
    std::vector<std::string> errs;
    const std::string where = to_string(d.term) + ": ";
    switch (d.rule) {
    case TypingRule::Variable: {
        auto it = d.context.find(d.term.kind() == TermKind::Var ? d.term.name() : std::string());
        if (d.term.kind() != TermKind::Var || it == d.context.end() || !(it->second == d.type) ||
            !d.premises.empty()) {
            errs.push_back(where + "not an instance of the variable rule");
        }
        break;
    }
    case TypingRule::Abstraction: {
        if (d.term.kind() != TermKind::Abs || d.type.kind() != TypeKind::Arrow || d.premises.size() != 1 ||
            d.context.count(d.term.name())) {
            errs.push_back(where + "not an instance of the abstraction rule");
            break;
        }
        const TypingDerivation &p = d.premises[0];
        Context want = d.context;
        want.emplace(d.term.name(), d.type.from());
        if (p.context != want || !(p.term == d.term.body()) || !(p.type == d.type.to())) {
            errs.push_back(where + "abstraction premise does not match");
        }
        break;
    }
    case TypingRule::Application: {
        if (d.term.kind() != TermKind::App || d.premises.size() != 2) {
            errs.push_back(where + "not an instance of the application rule");
            break;
        }
        const TypingDerivation &f = d.premises[0];
        const TypingDerivation &n = d.premises[1];
        if (f.context != d.context || n.context != d.context || !(f.term == d.term.fun()) ||
            !(n.term == d.term.arg()) || !(f.type == Type::arrow(n.type, d.type))) {
            errs.push_back(where + "application premises do not match");
        }
        break;
    }
    }
    for (const auto &p : d.premises) {
        auto sub = check_derivation(p);
        errs.insert(errs.end(), sub.begin(), sub.end());
    }
    return errs;
}

namespace {

void pretty(const TypingDerivation &d, int depth, std::string &out) {
    static const char *names[] = {"var", "abs", "app"};
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
    out += to_string(d.context);
    out += d.context.empty() ? "|- " : " |- ";
    out += to_string(d.term) + " : " + to_string(d.type) + "   [" + names[static_cast<int>(d.rule)] + "]\n";
    for (const auto &p : d.premises) pretty(p, depth + 1, out);
}

} // namespace

std::string pretty_derivation(const TypingDerivation &d) {
    std::string out;
    pretty(d, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Translation

Formula star_type(const Type &t) {
    if (t.kind() == TypeKind::Atom) return Formula::atom(t.name());
    return Formula::par(Formula::why_not(dual(star_type(t.from()))), star_type(t.to()));
}

Sequent translated_sequent(const Context &ctx, const Type &ty) {
    std::vector<Formula> fs;
    for (const auto &[x, xt] : ctx) fs.push_back(Formula::why_not(dual(star_type(xt))));
    fs.push_back(star_type(ty));
    return Sequent(std::move(fs));
}

namespace {

int through(const Proof &node, std::size_t premise, int pos) {
    const int t = node.wiring[premise][static_cast<std::size_t>(pos)];
    if (t < 0) fail(ErrorKind::Internal, "tracked occurrence consumed by " + std::string(rule_name(node.rule)));
    return t;
}

void move_all(std::map<std::string, int> &pos, const Proof &node, std::size_t premise) {
    for (auto &[x, p] : pos) p = through(node, premise, p);
}

Translation translate_rec(const TypingDerivation &d) {
    switch (d.rule) {
    case TypingRule::Variable: {
        const Formula a = star_type(d.type);
        ProofPtr p = build::ax(a);
        int res = p->conclusion.find(a);
        int hyp = p->conclusion.find(dual(a));
        std::map<std::string, int> pos;
        for (const auto &[y, yt] : d.context) {
            if (y == d.term.name()) continue;
            p = build::weakening(p, Formula::why_not(dual(star_type(yt))));
            move_all(pos, *p, 0);
            res = through(*p, 0, res);
            hyp = through(*p, 0, hyp);
            pos[y] = p->principal[0];
        }
        p = build::dereliction(p, hyp);
        move_all(pos, *p, 0);
        res = through(*p, 0, res);
        pos[d.term.name()] = p->principal[0];
        return {p, pos, res};
    }
    case TypingRule::Abstraction: {
        Translation sub = translate_rec(d.premises[0]);
        const std::string &x = d.term.name();
        ProofPtr p = build::par(sub.proof, sub.var_position.at(x), sub.result_position);
        sub.var_position.erase(x);
        move_all(sub.var_position, *p, 0);
        return {p, sub.var_position, p->principal[0]};
    }
    case TypingRule::Application: {
        Translation m = translate_rec(d.premises[0]);
        Translation n = translate_rec(d.premises[1]);
        ProofPtr prom = build::promotion(n.proof, n.result_position);
        move_all(n.var_position, *prom, 0);
        const Formula b = star_type(d.type);
        ProofPtr axb = build::ax(b);
        ProofPtr ten = build::tensor(prom, prom->principal[0], axb, axb->conclusion.find(dual(b)));
        move_all(n.var_position, *ten, 0);
        int res = through(*ten, 1, axb->conclusion.find(b));
        ProofPtr c = build::cut(m.proof, m.result_position, ten, ten->principal[0]);
        move_all(m.var_position, *c, 0);
        move_all(n.var_position, *c, 1);
        res = through(*c, 1, res);
        std::map<std::string, int> pos;
        for (const auto &[y, yt] : d.context) {
            const int from_m = m.var_position.at(y);
            const int from_n = n.var_position.at(y);
            m.var_position.erase(y);
            n.var_position.erase(y);
            c = build::contraction(c, from_m, from_n);
            move_all(m.var_position, *c, 0);
            move_all(n.var_position, *c, 0);
            move_all(pos, *c, 0);
            res = through(*c, 0, res);
            pos[y] = c->principal[0];
        }
        return {c, pos, res};
    }
    }
    fail(ErrorKind::Internal, "unknown typing rule");
}

} // namespace

Translation translate(const TypingDerivation &d) {
    auto errs = check_derivation(d);
    if (!errs.empty()) fail(ErrorKind::Invalid, "invalid derivation: " + errs.front());
    return translate_rec(d);
}

} // namespace llw::lam
