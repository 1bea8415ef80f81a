#include "llw/coherence.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "llw/error.hpp"

namespace llw::coh {

// ---------------------------------------------------------------------------
// Token store

struct TokenNode {
    TokenKind kind = TokenKind::Star;
    int tag = 0;
    std::string label;
    std::vector<std::uint32_t> kids;
    std::size_t hash = 0;

    bool same(const TokenNode &o) const {
        return kind == o.kind && tag == o.tag && label == o.label && kids == o.kids;
    }
};

class TokenStore {
public:
    static TokenStore &get() {
        static TokenStore store;
        return store;
    }

    Token make(TokenNode n) {
        std::size_t h = std::hash<std::string>{}(n.label) ^ (static_cast<std::size_t>(n.kind) * 0x9e3779b97f4a7c15ULL) ^
                        (static_cast<std::size_t>(n.tag) << 7);
        for (std::uint32_t k : n.kids) {
            h = h * 1000003u ^ k;
        }
        n.hash = h;
        std::lock_guard<std::mutex> lock(mu_);
        auto [lo, hi] = index_.equal_range(h);
        for (auto it = lo; it != hi; ++it) {
            if (node(it->second).same(n)) {
                return Token(it->second);
            }
        }
        const std::uint32_t id = next_++;
        const std::size_t chunk = id >> kChunkBits;
        if (chunk >= kMaxChunks) {
            fail(ErrorKind::Budget, "token store exhausted");
        }
        if (!chunks_[chunk]) {
            chunks_[chunk] = std::make_unique<TokenNode[]>(kChunkSize);
        }
        chunks_[chunk][id & (kChunkSize - 1)] = std::move(n);
        index_.emplace(h, id);
        return Token(id);
    }

    const TokenNode &node(std::uint32_t id) const {
        return chunks_[id >> kChunkBits][id & (kChunkSize - 1)];
    }

private:
    static constexpr std::size_t kChunkBits = 12;
    static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
    static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

    TokenStore() : chunks_(std::make_unique<std::unique_ptr<TokenNode[]>[]>(kMaxChunks)) {}

    std::mutex mu_;
    std::unique_ptr<std::unique_ptr<TokenNode[]>[]> chunks_;
    std::uint32_t next_ = 1;
    std::unordered_multimap<std::size_t, std::uint32_t> index_;
};

namespace {

const TokenNode &node_of(Token t) {
    if (!t.valid()) {
        fail(ErrorKind::Internal, "use of an empty token");
    }
    return TokenStore::get().node(t.id());
}

} // namespace

Token Token::atom(std::string_view label) {
    TokenNode n;
    n.kind = TokenKind::Atom;
    n.label = std::string(label);
    return TokenStore::get().make(std::move(n));
}

Token Token::star() {
    TokenNode n;
    n.kind = TokenKind::Star;
    return TokenStore::get().make(std::move(n));
}

Token Token::inj(int tag, Token t) {
    TokenNode n;
    n.kind = TokenKind::Inj;
    n.tag = tag;
    n.kids = {t.id()};
    return TokenStore::get().make(std::move(n));
}

Token Token::pair(Token a, Token b) {
    TokenNode n;
    n.kind = TokenKind::Pair;
    n.kids = {a.id(), b.id()};
    return TokenStore::get().make(std::move(n));
}

Token Token::set(std::vector<Token> elems) {
    TokenNode n;
    n.kind = TokenKind::Set;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    n.kids.reserve(elems.size());
    for (Token e : elems) {
        n.kids.push_back(e.id());
    }
    return TokenStore::get().make(std::move(n));
}

TokenKind Token::kind() const { return node_of(*this).kind; }
const std::string &Token::label() const { return node_of(*this).label; }
int Token::tag() const { return node_of(*this).tag; }
Token Token::inner() const { return Token(node_of(*this).kids.at(0)); }
Token Token::first() const { return Token(node_of(*this).kids.at(0)); }
Token Token::second() const { return Token(node_of(*this).kids.at(1)); }

std::vector<Token> Token::elems() const {
    const auto &kids = node_of(*this).kids;
    std::vector<Token> out;
    out.reserve(kids.size());
    for (std::uint32_t k : kids) {
        out.push_back(Token(k));
    }
    return out;
}

std::size_t Token::elem_count() const { return node_of(*this).kids.size(); }

namespace {

int canonical_cmp(Token a, Token b) {
    if (a == b) {
        return 0;
    }
    const TokenNode &x = node_of(a);
    const TokenNode &y = node_of(b);
    if (x.kind != y.kind) {
        return x.kind < y.kind ? -1 : 1;
    }
    switch (x.kind) {
    case TokenKind::Atom: {
        // Numeric labels order numerically so Nat tokens print 0,1,...,10.
        const bool xn = !x.label.empty() && std::all_of(x.label.begin(), x.label.end(), ::isdigit);
        const bool yn = !y.label.empty() && std::all_of(y.label.begin(), y.label.end(), ::isdigit);
        if (xn && yn && x.label.size() != y.label.size()) {
            return x.label.size() < y.label.size() ? -1 : 1;
        }
        return x.label < y.label ? -1 : (x.label > y.label ? 1 : 0);
    }
    case TokenKind::Star:
        return 0;
    case TokenKind::Inj:
        if (x.tag != y.tag) {
            return x.tag < y.tag ? -1 : 1;
        }
        return canonical_cmp(a.inner(), b.inner());
    case TokenKind::Pair: {
        int c = canonical_cmp(a.first(), b.first());
        return c != 0 ? c : canonical_cmp(a.second(), b.second());
    }
    case TokenKind::Set: {
        std::vector<Token> xs = a.elems();
        std::vector<Token> ys = b.elems();
        auto less = [](Token u, Token v) { return canonical_cmp(u, v) < 0; };
        std::sort(xs.begin(), xs.end(), less);
        std::sort(ys.begin(), ys.end(), less);
        if (xs.size() != ys.size()) {
            return xs.size() < ys.size() ? -1 : 1;
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            int c = canonical_cmp(xs[i], ys[i]);
            if (c != 0) {
                return c;
            }
        }
        return 0;
    }
    }
    return 0;
}

void render(Token t, std::string &out) {
    switch (t.kind()) {
    case TokenKind::Atom:
        out += t.label();
        return;
    case TokenKind::Star:
        out += '*';
        return;
    case TokenKind::Inj:
        render(t.inner(), out);
        out += t.tag() == 0 ? ".1" : ".2";
        return;
    case TokenKind::Pair:
        out += '(';
        render(t.first(), out);
        out += ',';
        render(t.second(), out);
        out += ')';
        return;
    case TokenKind::Set: {
        std::vector<Token> xs = t.elems();
        std::sort(xs.begin(), xs.end(), canonical_less);
        out += '{';
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            render(xs[i], out);
        }
        out += '}';
        return;
    }
    }
}

class TokenParser {
public:
    explicit TokenParser(std::string_view text) : s_(text) {}

    Token parse_all() {
        Token t = parse();
        skip();
        if (i_ != s_.size()) {
            throw SyntaxError("unexpected '" + std::string(1, s_[i_]) + "' after token", i_);
        }
        return t;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
        }
    }

    bool label_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    Token parse() {
        skip();
        if (i_ >= s_.size()) {
            throw SyntaxError("expected a token", i_);
        }
        Token t;
        const char c = s_[i_];
        if (c == '*') {
            ++i_;
            t = Token::star();
        } else if (c == '(') {
            ++i_;
            Token a = parse();
            expect(',');
            Token b = parse();
            expect(')');
            t = Token::pair(a, b);
        } else if (c == '{') {
            ++i_;
            std::vector<Token> xs;
            skip();
            if (i_ < s_.size() && s_[i_] == '}') {
                ++i_;
            } else {
                xs.push_back(parse());
                skip();
                while (i_ < s_.size() && s_[i_] == ',') {
                    ++i_;
                    xs.push_back(parse());
                    skip();
                }
                expect('}');
            }
            t = Token::set(std::move(xs));
        } else if (label_char(c)) {
            const std::size_t start = i_;
            while (i_ < s_.size() && label_char(s_[i_])) {
                ++i_;
            }
            t = Token::atom(s_.substr(start, i_ - start));
        } else {
            throw SyntaxError("unexpected '" + std::string(1, c) + "' in token", i_);
        }
        while (i_ + 1 < s_.size() && s_[i_] == '.' && (s_[i_ + 1] == '1' || s_[i_ + 1] == '2')) {
            t = Token::inj(s_[i_ + 1] - '1', t);
            i_ += 2;
        }
        return t;
    }

    void expect(char c) {
        skip();
        if (i_ >= s_.size() || s_[i_] != c) {
            throw SyntaxError(std::string("expected '") + c + "'", i_);
        }
        ++i_;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

} // namespace

bool canonical_less(Token a, Token b) { return canonical_cmp(a, b) < 0; }

std::string to_string(Token t) {
    std::string out;
    render(t, out);
    return out;
}

Token parse_token(std::string_view text) { return TokenParser(text).parse_all(); }

Clique make_clique(std::vector<Token> tokens) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

std::string to_string(const Clique &c) {
    std::vector<Token> xs = c;
    std::sort(xs.begin(), xs.end(), canonical_less);
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += to_string(xs[i]);
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Spaces

struct Space::Node {
    SpaceKind kind = SpaceKind::Empty;
    std::vector<Space> kids;
    std::vector<Token> explicit_web;
    std::unordered_map<Token, std::size_t, TokenHash> index;
    std::vector<char> matrix;

    mutable std::mutex mu;
    mutable std::optional<std::vector<Token>> web_cache;
};

namespace {

// x union y is a clique of s (x and y are cliques already).
bool compatible(const Space &s, const std::vector<Token> &x, const std::vector<Token> &y) {
    for (Token a : x) {
        for (Token b : y) {
            if (!s.coh(a, b)) {
                return false;
            }
        }
    }
    return true;
}

// Same, for the dual of s.
bool co_compatible(const Space &s, const std::vector<Token> &x, const std::vector<Token> &y) {
    for (Token a : x) {
        for (Token b : y) {
            if (!s.incoh(a, b)) {
                return false;
            }
        }
    }
    return true;
}

bool clique_in(const Space &s, const std::vector<Token> &x, bool dual) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!s.contains(x[i])) {
            return false;
        }
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            if (dual ? !s.incoh(x[i], x[j]) : !s.coh(x[i], x[j])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

std::shared_ptr<Space::Node> Space::new_node(SpaceKind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

Space::Space() : node_(new_node(SpaceKind::Empty)) {}

Space Space::explicit_space(std::vector<Token> web, const std::vector<std::pair<Token, Token>> &coherent) {
    auto n = new_node(SpaceKind::Explicit);
    for (std::size_t i = 0; i < web.size(); ++i) {
        if (!n->index.emplace(web[i], i).second) {
            fail(ErrorKind::Invalid, "duplicate token " + to_string(web[i]) + " in web");
        }
    }
    const std::size_t sz = web.size();
    n->matrix.assign(sz * sz, 0);
    for (std::size_t i = 0; i < sz; ++i) {
        n->matrix[i * sz + i] = 1;
    }
    for (const auto &[x, y] : coherent) {
        auto ix = n->index.find(x);
        auto iy = n->index.find(y);
        if (ix == n->index.end() || iy == n->index.end()) {
            fail(ErrorKind::Invalid, "coherent pair " + to_string(x) + "~" + to_string(y) + " outside the web");
        }
        n->matrix[ix->second * sz + iy->second] = 1;
        n->matrix[iy->second * sz + ix->second] = 1;
    }
    n->explicit_web = std::move(web);
    return Space(n);
}

Space Space::unit() { return Space(new_node(SpaceKind::Unit)); }
Space Space::empty() { return Space(new_node(SpaceKind::Empty)); }

Space Space::tensor(const Space &a, const Space &b) {
    auto n = new_node(SpaceKind::Tensor);
    n->kids = {a, b};
    return Space(n);
}

Space Space::par(const Space &a, const Space &b) {
    auto n = new_node(SpaceKind::Par);
    n->kids = {a, b};
    return Space(n);
}

Space Space::with(const Space &a, const Space &b) {
    auto n = new_node(SpaceKind::With);
    n->kids = {a, b};
    return Space(n);
}

Space Space::plus(const Space &a, const Space &b) {
    auto n = new_node(SpaceKind::Plus);
    n->kids = {a, b};
    return Space(n);
}

Space Space::bang(const Space &a) {
    auto n = new_node(SpaceKind::Bang);
    n->kids = {a};
    return Space(n);
}

Space Space::why_not(const Space &a) {
    auto n = new_node(SpaceKind::WhyNot);
    n->kids = {a};
    return Space(n);
}

Space Space::dual(const Space &a) {
    if (a.kind() == SpaceKind::Dual) {
        return a.left();
    }
    auto n = new_node(SpaceKind::Dual);
    n->kids = {a};
    return Space(n);
}

Space Space::lollipop(const Space &a, const Space &b) { return par(dual(a), b); }

SpaceKind Space::kind() const { return node_->kind; }
const Space &Space::left() const { return node_->kids.at(0); }
const Space &Space::right() const { return node_->kids.at(1); }

bool Space::contains(Token t) const {
    const Node &n = *node_;
    switch (n.kind) {
    case SpaceKind::Explicit:
        return n.index.count(t) != 0;
    case SpaceKind::Unit:
        return t.kind() == TokenKind::Star;
    case SpaceKind::Empty:
        return false;
    case SpaceKind::Tensor:
    case SpaceKind::Par:
        return t.kind() == TokenKind::Pair && left().contains(t.first()) && right().contains(t.second());
    case SpaceKind::With:
    case SpaceKind::Plus:
        return t.kind() == TokenKind::Inj && n.kids[static_cast<std::size_t>(t.tag())].contains(t.inner());
    case SpaceKind::Bang:
        return t.kind() == TokenKind::Set && clique_in(left(), t.elems(), false);
    case SpaceKind::WhyNot:
        return t.kind() == TokenKind::Set && clique_in(left(), t.elems(), true);
    case SpaceKind::Dual:
        return left().contains(t);
    }
    return false;
}

bool Space::coh(Token x, Token y) const {
    if (x == y) {
        return true;
    }
    const Node &n = *node_;
    switch (n.kind) {
    case SpaceKind::Explicit: {
        const std::size_t sz = n.explicit_web.size();
        return n.matrix[n.index.at(x) * sz + n.index.at(y)] != 0;
    }
    case SpaceKind::Unit:
    case SpaceKind::Empty:
        return true;
    case SpaceKind::Tensor:
        return left().coh(x.first(), y.first()) && right().coh(x.second(), y.second());
    case SpaceKind::Par:
        return left().strict_coh(x.first(), y.first()) || right().strict_coh(x.second(), y.second());
    case SpaceKind::With:
        return x.tag() != y.tag() || n.kids[static_cast<std::size_t>(x.tag())].coh(x.inner(), y.inner());
    case SpaceKind::Plus:
        return x.tag() == y.tag() && n.kids[static_cast<std::size_t>(x.tag())].coh(x.inner(), y.inner());
    case SpaceKind::Bang:
        return compatible(left(), x.elems(), y.elems());
    case SpaceKind::WhyNot:
        return !co_compatible(left(), x.elems(), y.elems());
    case SpaceKind::Dual:
        return !left().coh(x, y);
    }
    return false;
}

const std::vector<Token> &Space::web(std::size_t limit) const {
    const Node &n = *node_;
    if (n.kind == SpaceKind::Explicit) {
        if (n.explicit_web.size() > limit) {
            fail(ErrorKind::Budget, "web of " + describe() + " exceeds " + std::to_string(limit) + " tokens");
        }
        return n.explicit_web;
    }
    {
        std::lock_guard<std::mutex> lock(n.mu);
        if (n.web_cache) {
            if (n.web_cache->size() > limit) {
                fail(ErrorKind::Budget, "web of " + describe() + " exceeds " + std::to_string(limit) + " tokens");
            }
            return *n.web_cache;
        }
    }
    std::vector<Token> out;
    auto over = [&](std::size_t count) {
        if (count > limit) {
            fail(ErrorKind::Budget, "web of " + describe() + " exceeds " + std::to_string(limit) + " tokens");
        }
    };
    switch (n.kind) {
    case SpaceKind::Explicit:
    case SpaceKind::Empty:
        break;
    case SpaceKind::Unit:
        out.push_back(Token::star());
        break;
    case SpaceKind::Tensor:
    case SpaceKind::Par: {
        const auto &l = left().web(limit);
        const auto &r = right().web(limit);
        over(l.size() * r.size());
        for (Token a : l) {
            for (Token b : r) {
                out.push_back(Token::pair(a, b));
            }
        }
        break;
    }
    case SpaceKind::With:
    case SpaceKind::Plus: {
        const auto &l = left().web(limit);
        const auto &r = right().web(limit);
        over(l.size() + r.size());
        for (Token a : l) {
            out.push_back(Token::inj(0, a));
        }
        for (Token b : r) {
            out.push_back(Token::inj(1, b));
        }
        break;
    }
    case SpaceKind::Bang:
    case SpaceKind::WhyNot: {
        const Space &a = left();
        const bool dual = n.kind == SpaceKind::WhyNot;
        std::function<bool(Token, Token)> rel;
        if (dual) {
            rel = [&a](Token x, Token y) { return a.incoh(x, y); };
        } else {
            rel = [&a](Token x, Token y) { return a.coh(x, y); };
        }
        for (const Clique &c : enum_cliques_of(a.web(limit), rel, limit)) {
            out.push_back(Token::set(c));
        }
        break;
    }
    case SpaceKind::Dual:
        out = left().web(limit);
        break;
    }
    std::lock_guard<std::mutex> lock(n.mu);
    if (!n.web_cache) {
        n.web_cache = std::move(out);
    }
    return *n.web_cache;
}

bool Space::is_clique(const Clique &c) const { return clique_in(*this, c, false); }

std::string Space::describe() const {
    const Node &n = *node_;
    switch (n.kind) {
    case SpaceKind::Explicit: {
        std::vector<Token> w = n.explicit_web;
        std::sort(w.begin(), w.end(), canonical_less);
        std::string out = "[";
        for (std::size_t i = 0; i < w.size(); ++i) {
            out += (i ? " " : "") + to_string(w[i]);
        }
        std::string pairs;
        for (std::size_t i = 0; i < w.size(); ++i) {
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                if (coh(w[i], w[j])) {
                    pairs += " " + to_string(w[i]) + "~" + to_string(w[j]);
                }
            }
        }
        return out + (pairs.empty() ? "" : " |" + pairs) + "]";
    }
    case SpaceKind::Unit:
        return "1";
    case SpaceKind::Empty:
        return "top";
    case SpaceKind::Tensor:
        return "(" + left().describe() + " * " + right().describe() + ")";
    case SpaceKind::Par:
        return "(" + left().describe() + " @ " + right().describe() + ")";
    case SpaceKind::With:
        return "(" + left().describe() + " & " + right().describe() + ")";
    case SpaceKind::Plus:
        return "(" + left().describe() + " + " + right().describe() + ")";
    case SpaceKind::Bang:
        return "!" + left().describe();
    case SpaceKind::WhyNot:
        return "?" + left().describe();
    case SpaceKind::Dual:
        return left().describe() + "^";
    }
    return "?";
}

std::optional<std::string> validate_relation(const std::vector<Token> &web,
                                             const std::function<bool(Token, Token)> &coh) {
    for (Token x : web) {
        if (!coh(x, x)) {
            return "not reflexive at " + to_string(x);
        }
        for (Token y : web) {
            if (coh(x, y) != coh(y, x)) {
                return "not symmetric at " + to_string(x) + ", " + to_string(y);
            }
        }
    }
    return std::nullopt;
}

std::vector<Clique> enum_cliques_of(const std::vector<Token> &web, const std::function<bool(Token, Token)> &coh,
                                    std::size_t max_count) {
    const std::size_t n = web.size();
    std::vector<char> adj(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const bool c = i == j || coh(web[i], web[j]);
            adj[i * n + j] = adj[j * n + i] = c ? 1 : 0;
        }
    }
    std::vector<Clique> out;
    std::vector<std::size_t> cur;
    auto emit = [&] {
        if (out.size() >= max_count) {
            fail(ErrorKind::Budget, "more than " + std::to_string(max_count) + " cliques");
        }
        std::vector<Token> c;
        c.reserve(cur.size());
        for (std::size_t i : cur) {
            c.push_back(web[i]);
        }
        out.push_back(make_clique(std::move(c)));
    };
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        for (std::size_t i = from; i < n; ++i) {
            bool ok = true;
            for (std::size_t j : cur) {
                if (!adj[i * n + j]) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                continue;
            }
            cur.push_back(i);
            emit();
            grow(i + 1);
            cur.pop_back();
        }
    };
    emit();
    grow(0);
    return out;
}

std::vector<Clique> enum_cliques(const Space &s, std::size_t max_web) {
    const auto &web = s.web(max_web);
    return enum_cliques_of(web, [&s](Token x, Token y) { return s.coh(x, y); }, std::size_t{1} << max_web);
}

namespace {

std::vector<Token> labelled(int n, std::string_view prefix) {
    std::vector<Token> web;
    for (int i = 0; i < n; ++i) {
        web.push_back(Token::atom(std::string(prefix) + std::to_string(i)));
    }
    return web;
}

} // namespace

Space nat_space(int k) {
    std::vector<Token> web;
    for (int i = 0; i <= k; ++i) {
        web.push_back(Token::atom(std::to_string(i)));
    }
    return Space::explicit_space(std::move(web), {});
}

Space discrete_space(int n, std::string_view prefix) { return Space::explicit_space(labelled(n, prefix), {}); }

Space codiscrete_space(int n, std::string_view prefix) {
    std::vector<Token> web = labelled(n, prefix);
    std::vector<std::pair<Token, Token>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            pairs.emplace_back(web[static_cast<std::size_t>(i)], web[static_cast<std::size_t>(j)]);
        }
    }
    return Space::explicit_space(std::move(web), pairs);
}

std::vector<Space> all_spaces(int n, std::string_view prefix) {
    std::vector<Token> web = labelled(n, prefix);
    std::vector<std::pair<Token, Token>> slots;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            slots.emplace_back(web[static_cast<std::size_t>(i)], web[static_cast<std::size_t>(j)]);
        }
    }
    std::vector<Space> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
        std::vector<std::pair<Token, Token>> pairs;
        for (std::size_t k = 0; k < slots.size(); ++k) {
            if (mask >> k & 1) {
                pairs.push_back(slots[k]);
            }
        }
        out.push_back(Space::explicit_space(web, pairs));
    }
    return out;
}

Space random_space(Rng &rng, int max_web, std::string_view prefix) {
    std::uniform_int_distribution<int> size(1, std::max(1, max_web));
    std::bernoulli_distribution coin(0.5);
    std::vector<Token> web = labelled(size(rng), prefix);
    std::vector<std::pair<Token, Token>> pairs;
    for (std::size_t i = 0; i < web.size(); ++i) {
        for (std::size_t j = i + 1; j < web.size(); ++j) {
            if (coin(rng)) {
                pairs.emplace_back(web[i], web[j]);
            }
        }
    }
    return Space::explicit_space(std::move(web), pairs);
}

// ---------------------------------------------------------------------------
// Atom environments

AtomEnv parse_atom_env(std::string_view text) {
    AtomEnv env;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto bad = [&](const std::string &msg) -> Error {
            return Error(ErrorKind::Syntax, "line " + std::to_string(line_no) + ": " + msg);
        };
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw bad("expected 'name: tokens | pairs'");
        }
        std::string name = line.substr(0, colon);
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t\r") + 1);
        if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) {
            throw bad("bad atom name '" + name + "'");
        }
        if (env.count(name)) {
            throw bad("atom '" + name + "' bound twice");
        }
        std::string rest = line.substr(colon + 1);
        std::string tokens_part = rest;
        std::string pairs_part;
        if (auto bar = rest.find('|'); bar != std::string::npos) {
            tokens_part = rest.substr(0, bar);
            pairs_part = rest.substr(bar + 1);
        }
        std::vector<Token> web;
        std::istringstream ts(tokens_part);
        for (std::string w; ts >> w;) {
            try {
                web.push_back(parse_token(w));
            } catch (const SyntaxError &e) {
                throw bad(e.what());
            }
        }
        std::vector<std::pair<Token, Token>> pairs;
        std::istringstream ps(pairs_part);
        for (std::string w; ps >> w;) {
            const auto tilde = w.find('~');
            if (tilde == std::string::npos) {
                throw bad("expected 'x~y', got '" + w + "'");
            }
            try {
                pairs.emplace_back(parse_token(w.substr(0, tilde)), parse_token(w.substr(tilde + 1)));
            } catch (const SyntaxError &e) {
                throw bad(e.what());
            }
        }
        try {
            env.emplace(name, Space::explicit_space(std::move(web), pairs));
        } catch (const Error &e) {
            throw bad(e.what());
        }
    }
    return env;
}

std::string write_atom_env(const AtomEnv &env) {
    std::string out;
    for (const auto &[name, space] : env) {
        std::vector<Token> web = space.web();
        std::sort(web.begin(), web.end(), canonical_less);
        out += name + ":";
        for (Token t : web) {
            out += " " + to_string(t);
        }
        std::string pairs;
        for (std::size_t i = 0; i < web.size(); ++i) {
            for (std::size_t j = i + 1; j < web.size(); ++j) {
                if (space.coh(web[i], web[j])) {
                    pairs += " " + to_string(web[i]) + "~" + to_string(web[j]);
                }
            }
        }
        if (!pairs.empty()) {
            out += " |" + pairs;
        }
        out += "\n";
    }
    return out;
}

AtomEnv random_env(Rng &rng, const std::vector<std::string> &atoms, int max_web) {
    AtomEnv env;
    for (const std::string &a : atoms) {
        env.emplace(a, random_space(rng, max_web, a));
    }
    return env;
}

namespace {

void collect_atoms(const Formula &f, std::set<std::string> &out) {
    if (f.is_literal()) {
        out.insert(f.name());
        return;
    }
    switch (f.kind()) {
    case Connective::Tensor:
    case Connective::Par:
    case Connective::With:
    case Connective::Plus:
        collect_atoms(f.left(), out);
        collect_atoms(f.right(), out);
        return;
    case Connective::OfCourse:
    case Connective::WhyNot:
    case Connective::Dual:
        collect_atoms(f.body(), out);
        return;
    default:
        return;
    }
}

} // namespace

std::vector<std::string> proof_atoms(const Proof &p) {
    std::set<std::string> names;
    std::unordered_set<const Proof *> seen;
    std::vector<const Proof *> stack{&p};
    while (!stack.empty()) {
        const Proof *q = stack.back();
        stack.pop_back();
        if (!seen.insert(q).second) {
            continue;
        }
        for (const Formula &f : q->conclusion) {
            collect_atoms(f, names);
        }
        if (q->cut_formula) {
            collect_atoms(*q->cut_formula, names);
        }
        for (const auto &k : q->premises) {
            if (k) {
                stack.push_back(k.get());
            }
        }
    }
    return {names.begin(), names.end()};
}

Space build_space(const Formula &f, const AtomEnv &env) {
    auto atom = [&](const std::string &name) -> const Space & {
        auto it = env.find(name);
        if (it == env.end()) {
            fail(ErrorKind::Invalid, "unbound atom '" + name + "'");
        }
        return it->second;
    };
    switch (f.kind()) {
    case Connective::Atom:
        return atom(f.name());
    case Connective::DualAtom:
        return Space::dual(atom(f.name()));
    case Connective::Dual:
        fail(ErrorKind::Invalid, "formula is not in negation normal form: " + f.text());
    case Connective::Tensor:
        return Space::tensor(build_space(f.left(), env), build_space(f.right(), env));
    case Connective::Par:
        return Space::par(build_space(f.left(), env), build_space(f.right(), env));
    case Connective::With:
        return Space::with(build_space(f.left(), env), build_space(f.right(), env));
    case Connective::Plus:
        return Space::plus(build_space(f.left(), env), build_space(f.right(), env));
    case Connective::OfCourse:
        return Space::bang(build_space(f.body(), env));
    case Connective::WhyNot:
        return Space::why_not(build_space(f.body(), env));
    case Connective::One:
    case Connective::Bot:
        return Space::unit();
    case Connective::Zero:
    case Connective::Top:
        return Space::empty();
    }
    fail(ErrorKind::Internal, "unknown connective");
}

// ---------------------------------------------------------------------------
// Proof interpretation

namespace {

class Interpreter {
public:
    Interpreter(const AtomEnv &env, const InterpretLimits &limits) : env_(env), limits_(limits) {}

    const std::vector<Point> &run(const Proof &p) {
        if (auto it = memo_.find(&p); it != memo_.end()) {
            return it->second;
        }
        std::vector<const std::vector<Point> *> prem;
        for (const auto &k : p.premises) {
            prem.push_back(&run(*k));
        }
        std::vector<Point> out = node(p, prem);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return memo_.emplace(&p, std::move(out)).first->second;
    }

    const Space &space(const Formula &f) {
        auto it = spaces_.find(f.text());
        if (it == spaces_.end()) {
            it = spaces_.emplace(f.text(), build_space(f, env_)).first;
        }
        return it->second;
    }

private:
    struct Placed {
        Point point;
        std::array<Token, 2> slots;
    };

    // Carries a premise point to the conclusion, collecting slot tokens.
    static Placed place(const Wiring &w, const Point &src, std::size_t width) {
        Placed out{Point(width), {}};
        for (std::size_t i = 0; i < src.size(); ++i) {
            const int t = w[i];
            if (t >= 0) {
                out.point[static_cast<std::size_t>(t)] = src[i];
            } else {
                out.slots[static_cast<std::size_t>(target_slot(t))] = src[i];
            }
        }
        return out;
    }

    static void merge_into(Point &dst, const Point &src) {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            if (src[i].valid()) {
                dst[i] = src[i];
            }
        }
    }

    void grow(std::vector<Point> &out) const {
        if (out.size() > limits_.max_points) {
            fail(ErrorKind::Budget, "interpretation exceeds " + std::to_string(limits_.max_points) + " points");
        }
    }

    std::vector<Point> node(const Proof &p, const std::vector<const std::vector<Point> *> &prem) {
        const std::size_t width = p.conclusion.size();
        const std::size_t pr = p.principal.empty() ? 0 : static_cast<std::size_t>(p.principal[0]);
        std::vector<Point> out;
        auto unary = [&](const std::function<std::optional<Token>(const Placed &)> &principal) {
            for (const Point &q : *prem[0]) {
                Placed pl = place(p.wiring[0], q, width);
                if (auto t = principal(pl)) {
                    pl.point[pr] = *t;
                    out.push_back(std::move(pl.point));
                    grow(out);
                }
            }
        };
        switch (p.rule) {
        case Rule::Axiom:
            for (Token a : space(p.conclusion[0]).web(limits_.max_web)) {
                out.push_back({a, a});
                grow(out);
            }
            break;
        case Rule::One:
            out.push_back({Token::star()});
            break;
        case Rule::Top:
            break;
        case Rule::Bot:
            unary([](const Placed &) { return Token::star(); });
            break;
        case Rule::Par:
            unary([](const Placed &pl) { return Token::pair(pl.slots[0], pl.slots[1]); });
            break;
        case Rule::PlusL:
            unary([](const Placed &pl) { return Token::inj(0, pl.slots[0]); });
            break;
        case Rule::PlusR:
            unary([](const Placed &pl) { return Token::inj(1, pl.slots[0]); });
            break;
        case Rule::Dereliction:
            unary([](const Placed &pl) { return Token::set({pl.slots[0]}); });
            break;
        case Rule::Weakening:
            unary([](const Placed &) { return Token::set({}); });
            break;
        case Rule::Contraction: {
            const Space &body = space(p.conclusion[pr].body());
            unary([&](const Placed &pl) -> std::optional<Token> {
                std::vector<Token> x = pl.slots[0].elems();
                std::vector<Token> y = pl.slots[1].elems();
                if (!co_compatible(body, x, y)) {
                    return std::nullopt;
                }
                x.insert(x.end(), y.begin(), y.end());
                return Token::set(std::move(x));
            });
            break;
        }
        case Rule::With:
            for (std::size_t k = 0; k < 2; ++k) {
                for (const Point &q : *prem[k]) {
                    Placed pl = place(p.wiring[k], q, width);
                    pl.point[pr] = Token::inj(static_cast<int>(k), pl.slots[0]);
                    out.push_back(std::move(pl.point));
                    grow(out);
                }
            }
            break;
        case Rule::Tensor: {
            std::vector<Placed> left;
            for (const Point &q : *prem[0]) {
                left.push_back(place(p.wiring[0], q, width));
            }
            for (const Point &q : *prem[1]) {
                Placed r = place(p.wiring[1], q, width);
                for (const Placed &l : left) {
                    Point pt = r.point;
                    merge_into(pt, l.point);
                    pt[pr] = Token::pair(l.slots[0], r.slots[0]);
                    out.push_back(std::move(pt));
                    grow(out);
                }
            }
            break;
        }
        case Rule::Cut: {
            std::unordered_map<Token, std::vector<Point>, TokenHash> by_slot;
            for (const Point &q : *prem[0]) {
                Placed l = place(p.wiring[0], q, width);
                by_slot[l.slots[0]].push_back(std::move(l.point));
            }
            for (const Point &q : *prem[1]) {
                Placed r = place(p.wiring[1], q, width);
                auto it = by_slot.find(r.slots[0]);
                if (it == by_slot.end()) {
                    continue;
                }
                for (const Point &l : it->second) {
                    Point pt = r.point;
                    merge_into(pt, l);
                    out.push_back(std::move(pt));
                    grow(out);
                }
            }
            break;
        }
        case Rule::Promotion:
            promote(p, *prem[0], out);
            break;
        }
        return out;
    }

    // Every finite family of premise points whose ?-components stay jointly
    // compatible and whose A-components form a clique yields one token.
    void promote(const Proof &p, const std::vector<Point> &prem, std::vector<Point> &out) {
        const std::size_t width = p.conclusion.size();
        const std::size_t pr = static_cast<std::size_t>(p.principal[0]);
        const Space &body = space(p.conclusion[pr].body());
        std::vector<std::size_t> ctx;
        std::vector<const Space *> ctx_body;
        for (std::size_t i = 0; i < width; ++i) {
            if (i != pr) {
                ctx.push_back(i);
                ctx_body.push_back(&space(p.conclusion[i].body()));
            }
        }
        struct Item {
            Token a;
            std::vector<std::vector<Token>> parts;
        };
        std::vector<Item> items;
        for (const Point &q : prem) {
            Placed pl = place(p.wiring[0], q, width);
            Item it{pl.slots[0], {}};
            for (std::size_t i : ctx) {
                it.parts.push_back(pl.point[i].elems());
            }
            items.push_back(std::move(it));
        }
        std::vector<Token> chosen;
        std::vector<std::vector<Token>> unions(ctx.size());
        auto emit = [&] {
            Point pt(width);
            for (std::size_t c = 0; c < ctx.size(); ++c) {
                pt[ctx[c]] = Token::set(unions[c]);
            }
            pt[pr] = Token::set(chosen);
            out.push_back(std::move(pt));
            grow(out);
        };
        std::function<void(std::size_t)> dfs = [&](std::size_t from) {
            for (std::size_t k = from; k < items.size(); ++k) {
                const Item &it = items[k];
                bool ok = std::find(chosen.begin(), chosen.end(), it.a) == chosen.end();
                for (std::size_t j = 0; ok && j < chosen.size(); ++j) {
                    ok = body.coh(it.a, chosen[j]);
                }
                for (std::size_t c = 0; ok && c < ctx.size(); ++c) {
                    ok = co_compatible(*ctx_body[c], it.parts[c], unions[c]);
                }
                if (!ok) {
                    continue;
                }
                std::vector<std::size_t> sizes;
                for (std::size_t c = 0; c < ctx.size(); ++c) {
                    sizes.push_back(unions[c].size());
                    for (Token t : it.parts[c]) {
                        if (std::find(unions[c].begin(), unions[c].end(), t) == unions[c].end()) {
                            unions[c].push_back(t);
                        }
                    }
                }
                chosen.push_back(it.a);
                emit();
                dfs(k + 1);
                chosen.pop_back();
                for (std::size_t c = 0; c < ctx.size(); ++c) {
                    unions[c].resize(sizes[c]);
                }
            }
        };
        emit();
        dfs(0);
    }

    const AtomEnv &env_;
    InterpretLimits limits_;
    std::unordered_map<const Proof *, std::vector<Point>> memo_;
    std::unordered_map<std::string, Space> spaces_;
};

} // namespace

Interpretation interpret_proof(const Proof &p, const AtomEnv &env, const InterpretLimits &limits) {
    Interpreter in(env, limits);
    for (const Formula &f : p.conclusion) {
        in.space(f);   // reports unbound atoms before any work
    }
    return {p.conclusion, in.run(p)};
}

bool is_clique(const Interpretation &in, const AtomEnv &env) {
    std::vector<Space> spaces;
    for (const Formula &f : in.conclusion) {
        spaces.push_back(build_space(f, env));
    }
    for (std::size_t i = 0; i < in.points.size(); ++i) {
        const Point &p = in.points[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!spaces[k].contains(p[k])) {
                return false;
            }
        }
        for (std::size_t j = i + 1; j < in.points.size(); ++j) {
            const Point &q = in.points[j];
            bool strict = false;
            for (std::size_t k = 0; k < p.size() && !strict; ++k) {
                strict = spaces[k].strict_coh(p[k], q[k]);
            }
            if (!strict && p != q) {
                return false;
            }
        }
    }
    return true;
}

Interpretation permute(const Interpretation &in, const Sequent &target, const std::vector<int> &map) {
    Interpretation out{target, {}};
    out.points.reserve(in.points.size());
    for (const Point &p : in.points) {
        Point q(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[static_cast<std::size_t>(map[i])] = p[i];
        }
        out.points.push_back(std::move(q));
    }
    std::sort(out.points.begin(), out.points.end());
    return out;
}

Token fold_point(const Point &p) {
    if (p.empty()) {
        return Token::star();
    }
    Token acc = p.back();
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        acc = Token::pair(p[i], acc);
    }
    return acc;
}

std::string to_string(const Interpretation &in) {
    std::vector<Token> toks;
    for (const Point &p : in.points) {
        toks.push_back(fold_point(p));
    }
    return to_string(make_clique(std::move(toks)));
}

// ---------------------------------------------------------------------------
// Stable functions

namespace {

bool subset(const Clique &x, const Clique &y) { return std::includes(y.begin(), y.end(), x.begin(), x.end()); }

Clique meet(const Clique &x, const Clique &y) {
    Clique out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out;
}

Clique join(const Clique &x, const Clique &y) {
    Clique out;
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out;
}

} // namespace

const Clique &FunctionTable::operator()(const Clique &x) const {
    auto it = std::lower_bound(inputs.begin(), inputs.end(), x);
    if (it == inputs.end() || *it != x) {
        fail(ErrorKind::Invalid, "function applied outside its domain: " + to_string(x));
    }
    return outputs[static_cast<std::size_t>(it - inputs.begin())];
}

FunctionTable tabulate(const Space &e, const Space &e2, const std::function<Clique(const Clique &)> &f) {
    FunctionTable t{e, e2, enum_cliques(e), {}};
    std::sort(t.inputs.begin(), t.inputs.end());
    for (const Clique &x : t.inputs) {
        Clique y = make_clique(f(x));
        if (!e2.is_clique(y)) {
            fail(ErrorKind::Invalid, "value " + to_string(y) + " is not a clique of the codomain");
        }
        t.outputs.push_back(std::move(y));
    }
    return t;
}

bool is_monotone(const FunctionTable &f) {
    for (std::size_t i = 0; i < f.inputs.size(); ++i) {
        for (std::size_t j = 0; j < f.inputs.size(); ++j) {
            if (subset(f.inputs[i], f.inputs[j]) && !subset(f.outputs[i], f.outputs[j])) {
                return false;
            }
        }
    }
    return true;
}

std::optional<StabilityViolation> stability_violation(const FunctionTable &f) {
    for (std::size_t i = 0; i < f.inputs.size(); ++i) {
        for (std::size_t j = 0; j < f.inputs.size(); ++j) {
            const Clique &x = f.inputs[i];
            const Clique &y = f.inputs[j];
            if (subset(x, y) && !subset(f.outputs[i], f.outputs[j])) {
                return StabilityViolation{x, y, "not monotone: " + to_string(x) + " <= " + to_string(y)};
            }
            if (j < i || !f.domain.is_clique(join(x, y))) {
                continue;
            }
            if (f(meet(x, y)) != meet(f.outputs[i], f.outputs[j])) {
                return StabilityViolation{x, y,
                                          "f(x^y) != f(x)^f(y) for x=" + to_string(x) + " y=" + to_string(y)};
            }
        }
    }
    return std::nullopt;
}

bool is_stable(const FunctionTable &f) { return !stability_violation(f); }

bool is_linear(const FunctionTable &f) {
    if (!is_stable(f) || !f(Clique{}).empty()) {
        return false;
    }
    for (std::size_t i = 0; i < f.inputs.size(); ++i) {
        for (std::size_t j = i + 1; j < f.inputs.size(); ++j) {
            Clique u = join(f.inputs[i], f.inputs[j]);
            if (f.domain.is_clique(u) && f(u) != join(f.outputs[i], f.outputs[j])) {
                return false;
            }
        }
    }
    return true;
}

bool stable_le(const FunctionTable &f, const FunctionTable &g) {
    for (std::size_t i = 0; i < f.inputs.size(); ++i) {
        if (!subset(f.outputs[i], g(f.inputs[i]))) {
            return false;
        }
    }
    for (std::size_t i = 0; i < f.inputs.size(); ++i) {
        for (std::size_t j = 0; j < f.inputs.size(); ++j) {
            if (subset(f.inputs[i], f.inputs[j]) && f.outputs[i] != meet(g(f.inputs[i]), f.outputs[j])) {
                return false;
            }
        }
    }
    return true;
}

Clique trace(const FunctionTable &f) {
    if (auto v = stability_violation(f)) {
        fail(ErrorKind::Invalid, "trace of an unstable function: " + v->message);
    }
    std::vector<Token> out;
    for (std::size_t i = 0; i < f.inputs.size(); ++i) {
        for (Token e : f.outputs[i]) {
            bool minimal = true;
            for (std::size_t j = 0; j < f.inputs.size() && minimal; ++j) {
                if (j != i && subset(f.inputs[j], f.inputs[i]) &&
                    std::binary_search(f.outputs[j].begin(), f.outputs[j].end(), e)) {
                    minimal = false;
                }
            }
            if (minimal) {
                out.push_back(Token::pair(Token::set(f.inputs[i]), e));
            }
        }
    }
    return make_clique(std::move(out));
}

FunctionTable fun(const Space &e, const Space &e2, const Clique &phi) {
    const Space arrow = Space::lollipop(Space::bang(e), e2);
    for (Token t : phi) {
        if (!arrow.contains(t)) {
            fail(ErrorKind::Invalid, "token " + to_string(t) + " is not in the web of !E -o E'");
        }
    }
    if (!arrow.is_clique(phi)) {
        fail(ErrorKind::Invalid, "not a clique of !E -o E'");
    }
    return tabulate(e, e2, [&](const Clique &z) {
        std::vector<Token> out;
        for (Token t : phi) {
            if (subset(t.first().elems(), z)) {
                out.push_back(t.second());
            }
        }
        return Clique(out);
    });
}

std::vector<FunctionTable> all_monotone_functions(const Space &e, const Space &e2) {
    std::vector<Clique> ins = enum_cliques(e);
    std::sort(ins.begin(), ins.end());
    std::vector<Clique> outs = enum_cliques(e2);
    std::vector<std::size_t> order(ins.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ins[a].size() < ins[b].size(); });
    std::vector<FunctionTable> result;
    std::vector<Clique> vals(ins.size());
    std::function<void(std::size_t)> go = [&](std::size_t k) {
        if (k == order.size()) {
            FunctionTable t{e, e2, ins, vals};
            result.push_back(std::move(t));
            return;
        }
        const std::size_t i = order[k];
        for (const Clique &v : outs) {
            bool ok = true;
            for (std::size_t m = 0; m < k && ok; ++m) {
                const std::size_t j = order[m];
                if (subset(ins[j], ins[i])) {
                    ok = subset(vals[j], v);
                }
            }
            if (ok) {
                vals[i] = v;
                go(k + 1);
            }
        }
    };
    go(0);
    return result;
}

// ---------------------------------------------------------------------------
// Linear maps

Clique LinearMap::apply(const Clique &x) const {
    std::vector<Token> out;
    for (const auto &[a, b] : trace) {
        if (std::binary_search(x.begin(), x.end(), a)) {
            out.push_back(b);
        }
    }
    return make_clique(std::move(out));
}

LinearMap identity_map(const Space &e, std::size_t limit) {
    LinearMap m{e, e, {}};
    for (Token t : e.web(limit)) {
        m.trace.emplace(t, t);
    }
    return m;
}

LinearMap compose(const LinearMap &g, const LinearMap &f) {
    std::unordered_map<Token, std::vector<Token>, TokenHash> by_first;
    for (const auto &[b, c] : g.trace) {
        by_first[b].push_back(c);
    }
    LinearMap m{f.from, g.to, {}};
    for (const auto &[a, b] : f.trace) {
        auto it = by_first.find(b);
        if (it == by_first.end()) {
            continue;
        }
        for (Token c : it->second) {
            m.trace.emplace(a, c);
        }
    }
    return m;
}

LinearMap tensor_map(const LinearMap &f, const LinearMap &g) {
    LinearMap m{Space::tensor(f.from, g.from), Space::tensor(f.to, g.to), {}};
    for (const auto &[a, b] : f.trace) {
        for (const auto &[c, d] : g.trace) {
            m.trace.emplace(Token::pair(a, c), Token::pair(b, d));
        }
    }
    return m;
}

bool is_clique_trace(const LinearMap &f) {
    const Space arrow = Space::lollipop(f.from, f.to);
    std::vector<Token> toks;
    for (const auto &[a, b] : f.trace) {
        toks.push_back(Token::pair(a, b));
    }
    return arrow.is_clique(make_clique(std::move(toks)));
}

namespace {

// Cliques of `s` with at most `max_card` tokens.
std::vector<Clique> small_cliques(const Space &s, std::size_t max_card) {
    const auto &web = s.web();
    std::vector<Clique> out{{}};
    std::vector<Token> cur;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
        if (cur.size() == max_card) {
            return;
        }
        for (std::size_t i = from; i < web.size(); ++i) {
            bool ok = true;
            for (Token t : cur) {
                if (!s.coh(t, web[i])) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                continue;
            }
            cur.push_back(web[i]);
            out.push_back(make_clique(cur));
            if (out.size() > kWebLimit) {
                fail(ErrorKind::Budget, "too many bounded cliques");
            }
            grow(i + 1);
            cur.pop_back();
        }
    };
    grow(0);
    return out;
}

Clique union_of(const std::vector<Token> &sets) {
    std::vector<Token> out;
    for (Token s : sets) {
        for (Token t : s.elems()) {
            out.push_back(t);
        }
    }
    return make_clique(std::move(out));
}

} // namespace

LinearMap epsilon(const Space &e) {
    LinearMap m{Space::bang(e), e, {}};
    for (Token t : e.web()) {
        m.trace.emplace(Token::set({t}), t);
    }
    return m;
}

LinearMap delta(const Space &e, std::size_t max_out_card) {
    const Space b = Space::bang(e);
    LinearMap m{b, Space::bang(b), {}};
    for (const Clique &y : small_cliques(b, max_out_card)) {
        m.trace.emplace(Token::set(union_of(y)), Token::set(y));
    }
    return m;
}

LinearMap bang_map(const LinearMap &f, std::size_t max_out_card) {
    LinearMap m{Space::bang(f.from), Space::bang(f.to), {}};
    std::unordered_map<Token, std::vector<Token>, TokenHash> sources;
    for (const auto &[a, b] : f.trace) {
        sources[b].push_back(a);
    }
    for (const Clique &y : small_cliques(f.to, max_out_card)) {
        std::vector<Token> chosen;
        std::function<void(std::size_t)> pick = [&](std::size_t k) {
            if (k == y.size()) {
                Clique x = make_clique(chosen);
                if (f.from.is_clique(x)) {
                    m.trace.emplace(Token::set(x), Token::set(y));
                }
                return;
            }
            auto it = sources.find(y[k]);
            if (it == sources.end()) {
                return;
            }
            for (Token a : it->second) {
                chosen.push_back(a);
                pick(k + 1);
                chosen.pop_back();
            }
        };
        pick(0);
    }
    return m;
}

LinearMap comonoid_unit(const Space &e) {
    const Space b = Space::bang(e);
    const Space top = Space::empty();
    const LinearMap erase{b, top, {}};
    const LinearMap p_inv{Space::bang(top), Space::unit(), {{Token::set({}), Token::star()}}};
    return compose(p_inv, compose(bang_map(erase), delta(e)));
}

LinearMap comonoid_mult(const Space &e) {
    const Space b = Space::bang(e);
    const Space ee = Space::with(e, e);
    LinearMap diag{b, ee, {}};
    for (Token t : e.web()) {
        diag.trace.emplace(Token::set({t}), Token::inj(0, t));
        diag.trace.emplace(Token::set({t}), Token::inj(1, t));
    }
    LinearMap n_inv{Space::bang(ee), Space::tensor(b, b), {}};
    for (Token z : n_inv.from.web()) {
        std::vector<Token> l;
        std::vector<Token> r;
        for (Token t : z.elems()) {
            (t.tag() == 0 ? l : r).push_back(t.inner());
        }
        n_inv.trace.emplace(z, Token::pair(Token::set(l), Token::set(r)));
    }
    return compose(n_inv, compose(bang_map(diag), delta(e)));
}

void LawReport::merge(const LawReport &o) {
    checks += o.checks;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
}

namespace {

void expect_equal(LawReport &r, const std::string &law, const LinearMap &f, const LinearMap &g,
                  const std::string &where) {
    ++r.checks;
    if (f.trace == g.trace) {
        return;
    }
    std::string diff;
    for (const auto &pr : f.trace) {
        if (!g.trace.count(pr)) {
            diff = "(" + to_string(pr.first) + " -> " + to_string(pr.second) + ") only on the left";
            break;
        }
    }
    if (diff.empty()) {
        for (const auto &pr : g.trace) {
            if (!f.trace.count(pr)) {
                diff = "(" + to_string(pr.first) + " -> " + to_string(pr.second) + ") only on the right";
                break;
            }
        }
    }
    r.violations.push_back(law + " fails on " + where + ": " + diff);
}

} // namespace

LawReport check_comonad_laws(const Space &e, std::size_t max_card) {
    LawReport r;
    const std::string where = e.describe();
    const Space b = Space::bang(e);
    const LinearMap eps = epsilon(e);
    const LinearMap del = delta(e);
    const LinearMap id = identity_map(b);
    const Space bb = Space::bang(b);
    const std::vector<Token> &bb_web = bb.web();

    // The maps must agree with their closed forms on every state of !E.
    for (const Clique &x : enum_cliques(b, std::max<std::size_t>(b.web().size(), kCliqueWebBound))) {
        std::vector<Token> ev;
        for (Token t : x) {
            if (t.elem_count() == 1) {
                ev.push_back(t.elems()[0]);
            }
        }
        ++r.checks;
        if (eps.apply(x) != make_clique(ev)) {
            r.violations.push_back("epsilon closed form fails at " + to_string(x) + " on " + where);
        }
        std::vector<Token> dv;
        for (Token y : bb_web) {
            if (std::binary_search(x.begin(), x.end(), Token::set(union_of(y.elems())))) {
                dv.push_back(y);
            }
        }
        ++r.checks;
        if (del.apply(x) != make_clique(dv)) {
            r.violations.push_back("delta closed form fails at " + to_string(x) + " on " + where);
        }
    }
    ++r.checks;
    if (!is_clique_trace(eps) || !is_clique_trace(del)) {
        r.violations.push_back("epsilon or delta is not a clique of its arrow space on " + where);
    }
    expect_equal(r, "eps_!E . delta = id", compose(epsilon(b), del), id, where);
    expect_equal(r, "!eps . delta = id", compose(bang_map(eps), del), id, where);
    expect_equal(r, "delta_!E . delta = !delta . delta", compose(delta(b, max_card), del),
                 compose(bang_map(del, max_card), del), where);
    return r;
}

LawReport check_comonoid_laws(const Space &e) {
    LawReport r;
    const std::string where = e.describe();
    const Space b = Space::bang(e);
    const Space one = Space::unit();
    const LinearMap unit = comonoid_unit(e);
    const LinearMap mult = comonoid_mult(e);
    const LinearMap id = identity_map(b);
    const Token star = Token::star();

    LinearMap unit_closed{b, one, {{Token::set({}), star}}};
    expect_equal(r, "e = {(empty, *)}", unit, unit_closed, where);
    LinearMap mult_closed{b, Space::tensor(b, b), {}};
    for (Token x : b.web()) {
        for (Token y : b.web()) {
            Clique u = union_of({x, y});
            if (e.is_clique(u)) {
                mult_closed.trace.emplace(Token::set(u), Token::pair(x, y));
            }
        }
    }
    expect_equal(r, "d = {(x u y, (x,y))}", mult, mult_closed, where);

    LinearMap iota_l{Space::tensor(one, b), b, {}};
    LinearMap iota_r{Space::tensor(b, one), b, {}};
    LinearMap gamma{Space::tensor(b, b), Space::tensor(b, b), {}};
    LinearMap alpha{Space::tensor(b, Space::tensor(b, b)), Space::tensor(Space::tensor(b, b), b), {}};
    for (Token x : b.web()) {
        iota_l.trace.emplace(Token::pair(star, x), x);
        iota_r.trace.emplace(Token::pair(x, star), x);
        for (Token y : b.web()) {
            gamma.trace.emplace(Token::pair(x, y), Token::pair(y, x));
            for (Token z : b.web()) {
                alpha.trace.emplace(Token::pair(x, Token::pair(y, z)), Token::pair(Token::pair(x, y), z));
            }
        }
    }
    expect_equal(r, "iota_l . (e * id) . d = id", compose(iota_l, compose(tensor_map(unit, id), mult)), id, where);
    expect_equal(r, "iota_r . (id * e) . d = id", compose(iota_r, compose(tensor_map(id, unit), mult)), id, where);
    expect_equal(r, "alpha . (id * d) . d = (d * id) . d", compose(alpha, compose(tensor_map(id, mult), mult)),
                 compose(tensor_map(mult, id), mult), where);
    expect_equal(r, "gamma . d = d", compose(gamma, mult), mult, where);
    return r;
}

LawReport check_bang_with_iso(const Space &a, const Space &b) {
    LawReport r;
    const std::string where = a.describe() + ", " + b.describe();
    const Space lhs = Space::bang(Space::with(a, b));
    const Space rhs = Space::tensor(Space::bang(a), Space::bang(b));
    const auto &lw = lhs.web();
    const auto &rw = rhs.web();
    std::vector<Token> image;
    for (Token z : lw) {
        std::vector<Token> l;
        std::vector<Token> rr;
        for (Token t : z.elems()) {
            (t.tag() == 0 ? l : rr).push_back(t.inner());
        }
        image.push_back(Token::pair(Token::set(l), Token::set(rr)));
    }
    ++r.checks;
    if (lw.size() != rw.size()) {
        r.violations.push_back("web sizes differ on " + where);
        return r;
    }
    std::unordered_set<Token, TokenHash> seen;
    for (Token t : image) {
        ++r.checks;
        if (!rhs.contains(t) || !seen.insert(t).second) {
            r.violations.push_back("map is not a bijection at " + to_string(t) + " on " + where);
        }
    }
    for (std::size_t i = 0; i < lw.size(); ++i) {
        for (std::size_t j = i + 1; j < lw.size(); ++j) {
            ++r.checks;
            if (lhs.coh(lw[i], lw[j]) != rhs.coh(image[i], image[j])) {
                r.violations.push_back("coherence not preserved between " + to_string(lw[i]) + " and " +
                                       to_string(lw[j]) + " on " + where);
            }
        }
    }
    return r;
}

LawReport check_with_cliques_iso(const Space &a, const Space &b) {
    LawReport r;
    const std::string where = a.describe() + ", " + b.describe();
    const std::vector<Clique> both = enum_cliques(Space::with(a, b));
    const std::size_t na = enum_cliques(a).size();
    const std::size_t nb = enum_cliques(b).size();
    std::set<std::pair<Clique, Clique>> images;
    for (const Clique &z : both) {
        std::vector<Token> l;
        std::vector<Token> rr;
        for (Token t : z) {
            (t.tag() == 0 ? l : rr).push_back(t.inner());
        }
        Clique lc = make_clique(l);
        Clique rc = make_clique(rr);
        ++r.checks;
        if (!a.is_clique(lc) || !b.is_clique(rc) || !images.emplace(lc, rc).second) {
            r.violations.push_back("projection of " + to_string(z) + " is not injective into D(A) x D(B) on " + where);
        }
    }
    ++r.checks;
    if (images.size() != na * nb) {
        r.violations.push_back("D(A&B) has " + std::to_string(images.size()) + " states, D(A) x D(B) has " +
                               std::to_string(na * nb) + " on " + where);
    }
    return r;
}

LawReport check_lollipop_characterizations(const Space &a, const Space &b) {
    LawReport r;
    const Space arrow = Space::lollipop(a, b);
    const auto &wa = a.web();
    const auto &wb = b.web();
    for (Token e1 : wa) {
        for (Token f1 : wb) {
            for (Token e2 : wa) {
                for (Token f2 : wb) {
                    const bool same = e1 == e2 && f1 == f2;
                    const bool def = same || !(a.coh(e1, e2) && b.incoh(f1, f2));
                    const bool structural = arrow.coh(Token::pair(e1, f1), Token::pair(e2, f2));
                    const bool alt1 = !a.coh(e1, e2) || (b.coh(f1, f2) && (e1 == e2 || f1 != f2));
                    const bool alt2 = (!a.coh(e1, e2) || b.coh(f1, f2)) && (!b.incoh(f1, f2) || a.incoh(e1, e2));
                    ++r.checks;
                    if (def != structural || def != alt1 || def != alt2) {
                        r.violations.push_back("characterizations disagree at (" + to_string(e1) + "," +
                                               to_string(f1) + ") vs (" + to_string(e2) + "," + to_string(f2) +
                                               ") on " + a.describe() + " -o " + b.describe());
                    }
                }
            }
        }
    }
    return r;
}

} // namespace llw::coh
