#include "llw/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace llw {

namespace {

const char *binary_symbol(Connective c) {
    switch (c) {
    case Connective::Tensor: return "*";
    case Connective::Par: return "@";
    case Connective::With: return "&";
    case Connective::Plus: return "+";
    default: return "?";
    }
}

bool binary_kind(Connective c) {
    return c == Connective::Tensor || c == Connective::Par || c == Connective::With ||
           c == Connective::Plus;
}

// Operand of a postfix ^: literals, units and Duals print bare.
std::string postfix_operand(const Formula &f) {
    switch (f.kind()) {
    case Connective::Atom:
    case Connective::DualAtom:
    case Connective::Dual:
    case Connective::One:
    case Connective::Bot:
    case Connective::Zero:
    case Connective::Top:
        return f.text();
    default:
        return "(" + f.text() + ")";
    }
}

std::string render_node(Connective kind, const std::string &name, const std::vector<Formula> &kids) {
    switch (kind) {
    case Connective::Atom: return name;
    case Connective::DualAtom: return name + "^";
    case Connective::Dual: return postfix_operand(kids[0]) + "^";
    case Connective::One: return "1";
    case Connective::Bot: return "bot";
    case Connective::Zero: return "0";
    case Connective::Top: return "top";
    case Connective::OfCourse:
    case Connective::WhyNot: {
        std::string out = kind == Connective::OfCourse ? "!" : "?";
        if (kids[0].is_binary()) {
            return out + "(" + kids[0].text() + ")";
        }
        return out + kids[0].text();
    }
    default: {
        const Formula &l = kids[0];
        const Formula &r = kids[1];
        std::string out;
        if (l.is_binary() && l.kind() != kind) {
            out = "(" + l.text() + ")";
        } else {
            out = l.text();
        }
        out += ' ';
        out += binary_symbol(kind);
        out += ' ';
        if (r.is_binary()) {
            out += "(" + r.text() + ")";
        } else {
            out += r.text();
        }
        return out;
    }
    }
}

bool valid_atom_name(std::string_view name) {
    if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) {
        return false;
    }
    for (char c : name) {
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) {
            return false;
        }
    }
    return name != "bot" && name != "top";
}

} // namespace

const char *to_string(Polarity p) {
    switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Atomic: return "atomic";
    }
    return "?";
}

Formula Formula::make(Connective kind, std::string name, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->name = std::move(name);
    n->text = render_node(kind, n->name, kids);
    n->hash = std::hash<std::string>{}(n->text);
    n->nnf = kind != Connective::Dual;
    n->exponential = kind == Connective::OfCourse || kind == Connective::WhyNot;
    for (const Formula &k : kids) {
        n->size += k.size();
        n->nnf = n->nnf && k.is_nnf();
        n->exponential = n->exponential || k.has_exponential();
    }
    n->kids = std::move(kids);
    return Formula(std::move(n));
}

Formula Formula::atom(std::string_view name) {
    if (!valid_atom_name(name)) {
        fail(ErrorKind::Invalid, "invalid atom name '" + std::string(name) + "'");
    }
    return make(Connective::Atom, std::string(name), {});
}

Formula Formula::dual_atom(std::string_view name) {
    if (!valid_atom_name(name)) {
        fail(ErrorKind::Invalid, "invalid atom name '" + std::string(name) + "'");
    }
    return make(Connective::DualAtom, std::string(name), {});
}

Formula Formula::dual_of(const Formula &f) {
    if (f.kind() == Connective::Atom) {
        return make(Connective::DualAtom, f.name(), {});
    }
    return make(Connective::Dual, "", {f});
}

Formula Formula::binary(Connective c, const Formula &l, const Formula &r) {
    if (!binary_kind(c)) {
        fail(ErrorKind::Invalid, "not a binary connective");
    }
    return make(c, "", {l, r});
}

Formula Formula::tensor(const Formula &l, const Formula &r) { return make(Connective::Tensor, "", {l, r}); }
Formula Formula::par(const Formula &l, const Formula &r) { return make(Connective::Par, "", {l, r}); }
Formula Formula::with(const Formula &l, const Formula &r) { return make(Connective::With, "", {l, r}); }
Formula Formula::plus(const Formula &l, const Formula &r) { return make(Connective::Plus, "", {l, r}); }
Formula Formula::of_course(const Formula &f) { return make(Connective::OfCourse, "", {f}); }
Formula Formula::why_not(const Formula &f) { return make(Connective::WhyNot, "", {f}); }

Formula Formula::one() {
    static const Formula f = make(Connective::One, "", {});
    return f;
}
Formula Formula::bot() {
    static const Formula f = make(Connective::Bot, "", {});
    return f;
}
Formula Formula::zero() {
    static const Formula f = make(Connective::Zero, "", {});
    return f;
}
Formula Formula::top() {
    static const Formula f = make(Connective::Top, "", {});
    return f;
}

const Formula &Formula::left() const {
    if (node_->kids.empty()) {
        fail(ErrorKind::Invalid, "formula '" + text() + "' has no operand");
    }
    return node_->kids[0];
}

const Formula &Formula::right() const {
    if (node_->kids.size() < 2) {
        fail(ErrorKind::Invalid, "formula '" + text() + "' has no right operand");
    }
    return node_->kids[1];
}

bool Formula::is_binary() const noexcept { return binary_kind(kind()); }

bool Formula::is_unit() const noexcept {
    switch (kind()) {
    case Connective::One:
    case Connective::Bot:
    case Connective::Zero:
    case Connective::Top:
        return true;
    default:
        return false;
    }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, One, Zero, Bot, Top, LParen, RParen, Caret, Bang, Quest, Star, At, Amp, PlusSign, Lolli, Comma, Turnstile, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (c >= 'a' && c <= 'z') {
            while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= '0' && s[i] <= '9') || s[i] == '_')) {
                ++i;
            }
            std::string word(s.substr(start, i - start));
            Tok k = word == "bot" ? Tok::Bot : word == "top" ? Tok::Top : Tok::Ident;
            out.push_back({k, word, start});
            continue;
        }
        switch (c) {
        case '1': out.push_back({Tok::One, "1", i}); ++i; break;
        case '0': out.push_back({Tok::Zero, "0", i}); ++i; break;
        case '(': out.push_back({Tok::LParen, "(", i}); ++i; break;
        case ')': out.push_back({Tok::RParen, ")", i}); ++i; break;
        case '^': out.push_back({Tok::Caret, "^", i}); ++i; break;
        case '!': out.push_back({Tok::Bang, "!", i}); ++i; break;
        case '?': out.push_back({Tok::Quest, "?", i}); ++i; break;
        case '*': out.push_back({Tok::Star, "*", i}); ++i; break;
        case '@': out.push_back({Tok::At, "@", i}); ++i; break;
        case '&': out.push_back({Tok::Amp, "&", i}); ++i; break;
        case '+': out.push_back({Tok::PlusSign, "+", i}); ++i; break;
        case ',': out.push_back({Tok::Comma, ",", i}); ++i; break;
        case '-':
            if (i + 1 < s.size() && s[i + 1] == 'o') {
                out.push_back({Tok::Lolli, "-o", i});
                i += 2;
                break;
            }
            throw SyntaxError("expected '-o'", i);
        case '|':
            if (i + 1 < s.size() && s[i + 1] == '-') {
                out.push_back({Tok::Turnstile, "|-", i});
                i += 2;
                break;
            }
            throw SyntaxError("expected '|-'", i);
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", i);
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Formula parse_single() {
        Formula f = implication();
        expect(Tok::End, "end of input");
        return f;
    }

    std::vector<Formula> parse_sequent() {
        expect(Tok::Turnstile, "'|-'");
        std::vector<Formula> out;
        if (peek().kind == Tok::End) {
            return out;
        }
        out.push_back(implication());
        while (peek().kind == Tok::Comma) {
            next();
            out.push_back(implication());
        }
        expect(Tok::End, "',' or end of input");
        return out;
    }

private:
    const Token &peek() const { return toks_[i_]; }
    const Token &next() { return toks_[i_++]; }

    void expect(Tok k, const char *what) {
        if (peek().kind != k) {
            throw SyntaxError(std::string("expected ") + what + ", found " + describe(peek()), peek().pos);
        }
        next();
    }

    static std::string describe(const Token &t) {
        return t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
    }

    static std::optional<Connective> binary_of(Tok k) {
        switch (k) {
        case Tok::Star: return Connective::Tensor;
        case Tok::At: return Connective::Par;
        case Tok::Amp: return Connective::With;
        case Tok::PlusSign: return Connective::Plus;
        default: return std::nullopt;
        }
    }

    // impl := chain ('-o' impl)?
    Formula implication() {
        Formula lhs = chain();
        if (peek().kind == Tok::Lolli) {
            next();
            Formula rhs = implication();
            return Formula::par(Formula::dual_of(lhs), rhs);
        }
        return lhs;
    }

    Formula chain() {
        Formula acc = prefix();
        std::optional<Connective> op;
        while (auto c = binary_of(peek().kind)) {
            if (op && *op != *c) {
                throw SyntaxError("mixing '" + std::string(binary_symbol(*op)) + "' and '" +
                                      binary_symbol(*c) + "' requires parentheses",
                                  peek().pos);
            }
            op = c;
            next();
            Formula rhs = prefix();
            acc = Formula::binary(*c, acc, rhs);
        }
        return acc;
    }

    Formula prefix() {
        if (peek().kind == Tok::Bang) {
            next();
            return Formula::of_course(prefix());
        }
        if (peek().kind == Tok::Quest) {
            next();
            return Formula::why_not(prefix());
        }
        Formula f = primary();
        while (peek().kind == Tok::Caret) {
            next();
            f = Formula::dual_of(f);
        }
        return f;
    }

    Formula primary() {
        const Token &t = next();
        switch (t.kind) {
        case Tok::Ident: return Formula::atom(t.text);
        case Tok::One: return Formula::one();
        case Tok::Zero: return Formula::zero();
        case Tok::Bot: return Formula::bot();
        case Tok::Top: return Formula::top();
        case Tok::LParen: {
            Formula f = implication();
            expect(Tok::RParen, "')'");
            return f;
        }
        default:
            throw SyntaxError("expected a formula, found " + describe(t), t.pos);
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

Formula negate(const Formula &f);

Formula to_nnf(const Formula &f) {
    if (f.is_nnf()) {
        return f;
    }
    switch (f.kind()) {
    case Connective::Dual: return negate(f.body());
    case Connective::OfCourse: return Formula::of_course(to_nnf(f.body()));
    case Connective::WhyNot: return Formula::why_not(to_nnf(f.body()));
    default: return Formula::binary(f.kind(), to_nnf(f.left()), to_nnf(f.right()));
    }
}

// NNF of the dual of f (f arbitrary).
Formula negate(const Formula &f) {
    switch (f.kind()) {
    case Connective::Atom: return Formula::dual_atom(f.name());
    case Connective::DualAtom: return Formula::atom(f.name());
    case Connective::Dual: return to_nnf(f.body());
    case Connective::Tensor: return Formula::par(negate(f.left()), negate(f.right()));
    case Connective::Par: return Formula::tensor(negate(f.left()), negate(f.right()));
    case Connective::With: return Formula::plus(negate(f.left()), negate(f.right()));
    case Connective::Plus: return Formula::with(negate(f.left()), negate(f.right()));
    case Connective::OfCourse: return Formula::why_not(negate(f.body()));
    case Connective::WhyNot: return Formula::of_course(negate(f.body()));
    case Connective::One: return Formula::bot();
    case Connective::Bot: return Formula::one();
    case Connective::Zero: return Formula::top();
    case Connective::Top: return Formula::zero();
    }
    fail(ErrorKind::Internal, "unknown connective");
}

} // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_single(); }

std::string render_formula(const Formula &f) { return f.text(); }

Formula nnf(const Formula &f) { return to_nnf(f); }

Formula dual(const Formula &f) {
    if (!f.is_nnf()) {
        fail(ErrorKind::Invalid, "dual: '" + f.text() + "' is not in negation normal form");
    }
    return negate(f);
}

std::size_t size(const Formula &f) { return f.size(); }

Polarity polarity(const Formula &f) {
    switch (f.kind()) {
    case Connective::Tensor:
    case Connective::Plus:
    case Connective::One:
    case Connective::Zero:
    case Connective::OfCourse:
        return Polarity::Positive;
    case Connective::Par:
    case Connective::With:
    case Connective::Bot:
    case Connective::Top:
    case Connective::WhyNot:
        return Polarity::Negative;
    case Connective::Atom:
    case Connective::DualAtom:
        return Polarity::Atomic;
    case Connective::Dual:
        break;
    }
    fail(ErrorKind::Invalid, "polarity: '" + f.text() + "' is not in negation normal form");
}

bool is_multiplicative(Connective c) {
    return c == Connective::Tensor || c == Connective::Par || c == Connective::One || c == Connective::Bot;
}

bool is_additive(Connective c) {
    return c == Connective::With || c == Connective::Plus || c == Connective::Top || c == Connective::Zero;
}

// ---------------------------------------------------------------------------

Sequent::Sequent(std::vector<Formula> formulas) : items_(std::move(formulas)) {
    std::stable_sort(items_.begin(), items_.end());
}

std::size_t Sequent::total_size() const noexcept {
    std::size_t n = 0;
    for (const Formula &f : items_) {
        n += f.size();
    }
    return n;
}

bool Sequent::is_nnf() const noexcept {
    return std::all_of(items_.begin(), items_.end(), [](const Formula &f) { return f.is_nnf(); });
}

bool Sequent::has_exponential() const noexcept {
    return std::any_of(items_.begin(), items_.end(), [](const Formula &f) { return f.has_exponential(); });
}

std::string Sequent::text() const {
    std::string out = "|-";
    for (std::size_t i = 0; i < items_.size(); ++i) {
        out += i == 0 ? " " : ", ";
        out += items_[i].text();
    }
    return out;
}

int Sequent::find(const Formula &f) const noexcept {
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i] == f) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Sequent parse_sequent(std::string_view text) {
    std::vector<Formula> fs = Parser(text).parse_sequent();
    for (Formula &f : fs) {
        f = nnf(f);
    }
    return Sequent(std::move(fs));
}

std::string render_sequent(const Sequent &s) { return s.text(); }

} // namespace llw
