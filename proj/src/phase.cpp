#include "llw/phase.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "llw/error.hpp"

namespace llw::phase {

namespace {

inline bool has(Subset x, int i) { return (x >> i & 1) != 0; }
inline Subset bit(int i) { return Subset{1} << i; }

template <typename F>
void for_each_bit(Subset x, F &&f) {
    while (x != 0) {
        const int i = std::countr_zero(x);
        f(i);
        x &= x - 1;
    }
}

} // namespace

Monoid::Monoid(std::vector<std::string> names, std::vector<std::vector<int>> table, int unit)
    : names_(std::move(names)), unit_(unit) {
    const std::size_t n = names_.size();
    if (n == 0 || n > kMaxElements) {
        fail(ErrorKind::Invalid, "a monoid needs between 1 and 64 elements");
    }
    if (table.size() != n) {
        fail(ErrorKind::Invalid, "multiplication table has " + std::to_string(table.size()) + " rows for " +
                                     std::to_string(n) + " elements");
    }
    table_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].size() != n) {
            fail(ErrorKind::Invalid, "row " + names_[i] + " has the wrong length");
        }
        for (int v : table[i]) {
            if (v < 0 || static_cast<std::size_t>(v) >= n) {
                fail(ErrorKind::Invalid, "row " + names_[i] + " mentions an unknown element");
            }
            table_.push_back(v);
        }
    }
    const int sz = static_cast<int>(n);
    if (unit < 0 || unit >= sz) {
        fail(ErrorKind::Invalid, "unit out of range");
    }
    for (int a = 0; a < sz; ++a) {
        if (mul(unit, a) != a || mul(a, unit) != a) {
            fail(ErrorKind::Invalid, names_[static_cast<std::size_t>(unit)] + " is not a unit");
        }
        for (int b = 0; b < sz; ++b) {
            if (mul(a, b) != mul(b, a)) {
                fail(ErrorKind::Invalid, "not commutative at " + name(a) + ", " + name(b));
            }
            for (int c = 0; c < sz; ++c) {
                if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
                    fail(ErrorKind::Invalid, "not associative at " + name(a) + ", " + name(b) + ", " + name(c));
                }
            }
        }
    }
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != n) {
        fail(ErrorKind::Invalid, "duplicate element names");
    }
}

namespace {

Monoid from_op(int n, const std::string &prefix, int unit, int (*op)(int, int, int)) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        names.push_back(prefix + std::to_string(i));
        for (int j = 0; j < n; ++j) {
            table[static_cast<std::size_t>(i)].push_back(op(i, j, n));
        }
    }
    return Monoid(std::move(names), std::move(table), unit);
}

} // namespace

Monoid Monoid::cyclic(int k) {
    return from_op(k, "z", 0, [](int a, int b, int n) { return (a + b) % n; });
}

Monoid Monoid::truncated(int k) {
    return from_op(k + 1, "t", 0, [](int a, int b, int n) { return std::min(a + b, n - 1); });
}

Monoid Monoid::semilattice(int k) {
    return from_op(k + 1, "s", 0, [](int a, int b, int) { return std::max(a, b); });
}

Monoid Monoid::product(const Monoid &a, const Monoid &b) {
    const int na = static_cast<int>(a.size());
    const int nb = static_cast<int>(b.size());
    std::vector<std::string> names;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            names.push_back(a.name(i) + b.name(j));
        }
    }
    std::vector<std::vector<int>> table(names.size());
    for (int x = 0; x < na * nb; ++x) {
        for (int y = 0; y < na * nb; ++y) {
            table[static_cast<std::size_t>(x)].push_back(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
        }
    }
    return Monoid(std::move(names), std::move(table), a.unit() * nb + b.unit());
}

Subset Monoid::mul(Subset x, Subset y) const {
    Subset out = 0;
    for_each_bit(x, [&](int p) { for_each_bit(y, [&](int q) { out |= bit(mul(p, q)); }); });
    return out;
}

int Monoid::index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Algebra::Algebra(const Model &m) : m_(m) {
    const int n = static_cast<int>(m_.monoid.size());
    passes_.assign(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < n; ++p) {
            if (has(m_.bot, m_.monoid.mul(p, q))) {
                passes_[static_cast<std::size_t>(q)] |= bit(p);
            }
        }
    }
    if (n <= 6) {
        const std::size_t cells = std::size_t{1} << n;
        std::vector<Subset> orths(cells);
        for (Subset x = 0; x < cells; ++x) {
            orths[x] = orth(x);
        }
        par_table_.resize(cells * cells);
        for (Subset f = 0; f < cells; ++f) {
            for (Subset g = f; g < cells; ++g) {
                const Subset v = orth(m_.monoid.mul(orths[f], orths[g]));
                par_table_[f * cells + g] = v;
                par_table_[g * cells + f] = v;
            }
        }
    }
}

Subset Algebra::orth(Subset x) const {
    Subset out = 0;
    for (std::size_t q = 0; q < passes_.size(); ++q) {
        if ((x & ~passes_[q]) == 0) {
            out |= bit(static_cast<int>(q));
        }
    }
    return out;
}

Subset Algebra::par(Subset f, Subset g) const {
    if (!par_table_.empty()) {
        return par_table_[f * (Subset{1} << m_.monoid.size()) + g];
    }
    return orth(m_.monoid.mul(orth(f), orth(g)));
}

Subset Algebra::why_not(Subset f) const {
    if (!m_.closed) {
        fail(ErrorKind::Invalid, "exponentials need a model with closed facts");
    }
    Subset out = all();
    for (Subset c : *m_.closed) {
        if ((f & ~c) == 0) {
            out &= c;
        }
    }
    return out;
}

Subset Algebra::interp(const Formula &f) const {
    switch (f.kind()) {
    case Connective::Atom:
    case Connective::DualAtom: {
        auto it = m_.atoms.find(f.name());
        if (it == m_.atoms.end()) {
            fail(ErrorKind::Invalid, "atom '" + f.name() + "' has no interpretation");
        }
        return f.kind() == Connective::Atom ? it->second : orth(it->second);
    }
    case Connective::Dual:
        fail(ErrorKind::Invalid, "formula is not in negation normal form: " + f.text());
    case Connective::Tensor:
        return tensor(interp(f.left()), interp(f.right()));
    case Connective::Par:
        return par(interp(f.left()), interp(f.right()));
    case Connective::With:
        return with(interp(f.left()), interp(f.right()));
    case Connective::Plus:
        return plus(interp(f.left()), interp(f.right()));
    case Connective::OfCourse:
        return of_course(interp(f.body()));
    case Connective::WhyNot:
        return why_not(interp(f.body()));
    case Connective::One:
        return one();
    case Connective::Bot:
        return bot();
    case Connective::Zero:
        return zero();
    case Connective::Top:
        return top();
    }
    fail(ErrorKind::Internal, "unknown connective");
}

bool Algebra::is_valid(const Sequent &s) const {
    Subset acc = bot();
    for (const Formula &f : s) {
        acc = par(acc, interp(f));
    }
    return has(acc, m_.monoid.unit());
}

std::vector<Subset> Algebra::interpret_pool(FormulaPool &pool) const {
    std::vector<Subset> out(pool.count());
    for (FormulaPool::Id id = 0; id < pool.count(); ++id) {
        const auto l = pool.left(id);
        const auto r = pool.right(id);
        switch (pool.kind(id)) {
        case Connective::Atom:
        case Connective::DualAtom:
        case Connective::OfCourse:
        case Connective::WhyNot:
            out[id] = interp(pool.formula(id));
            break;
        case Connective::Tensor:
            out[id] = tensor(out[l], out[r]);
            break;
        case Connective::Par:
            out[id] = par(out[l], out[r]);
            break;
        case Connective::With:
            out[id] = with(out[l], out[r]);
            break;
        case Connective::Plus:
            out[id] = plus(out[l], out[r]);
            break;
        case Connective::One:
            out[id] = one();
            break;
        case Connective::Bot:
            out[id] = bot();
            break;
        case Connective::Zero:
            out[id] = zero();
            break;
        case Connective::Top:
            out[id] = top();
            break;
        case Connective::Dual:
            fail(ErrorKind::Internal, "pool holds a non-NNF formula");
        }
    }
    return out;
}

bool Algebra::is_valid(std::span<const FormulaPool::Id> s, const std::vector<Subset> &interp) const {
    Subset acc = bot();
    for (auto id : s) {
        acc = par(acc, interp[id]);
    }
    return has(acc, m_.monoid.unit());
}

Subset orth(const Model &m, Subset x) { return Algebra(m).orth(x); }
Subset interp_formula(const Model &m, const Formula &f) { return Algebra(m).interp(f); }
bool is_valid(const Model &m, const Sequent &s) { return Algebra(m).is_valid(s); }

std::vector<Subset> all_facts(const Model &m) {
    if (m.monoid.size() > 16) {
        fail(ErrorKind::Budget, "fact enumeration is limited to 16 elements");
    }
    Algebra alg(m);
    std::set<Subset> out;
    for (Subset x = 0; x <= m.monoid.all(); ++x) {
        out.insert(alg.orth(x));
    }
    return {out.begin(), out.end()};
}

bool TopolinearReport::fails(int axiom) const {
    return std::any_of(violations.begin(), violations.end(),
                       [axiom](const TopolinearViolation &v) { return v.axiom == axiom; });
}

TopolinearReport check_topolinear(const Model &m) {
    TopolinearReport r;
    if (!m.closed) {
        r.violations.push_back({0, "model has no closed facts"});
        return r;
    }
    Algebra alg(m);
    const std::vector<Subset> &fam = *m.closed;
    const std::set<Subset> members(fam.begin(), fam.end());
    auto show = [&](Subset x) { return to_string(m, x); };
    for (Subset f : fam) {
        if (!alg.is_fact(f)) {
            r.violations.push_back({0, show(f) + " is not a fact"});
        }
    }
    for (Subset f : fam) {
        for (Subset g : fam) {
            if (!members.count(f & g)) {
                r.violations.push_back({1, show(f) + " meet " + show(g) + " is not closed"});
            }
            if (!members.count(alg.par(f, g))) {
                r.violations.push_back({2, show(f) + " par " + show(g) + " is not closed"});
            }
        }
    }
    if (!members.count(m.bot)) {
        r.violations.push_back({2, "bot " + show(m.bot) + " is not closed"});
    }
    for (Subset f : fam) {
        if ((m.bot & ~f) != 0) {
            r.violations.push_back({3, "bot is not below " + show(f)});
        }
        const Subset ff = alg.par(f, f);
        if (!members.count(ff)) {
            r.violations.push_back({4, show(f) + " par itself is not closed"});
        }
        if (ff != f) {
            r.non_idempotent.push_back(f);
        }
    }
    return r;
}

std::vector<std::string> validate_model(const Model &m) {
    std::vector<std::string> out;
    Algebra alg(m);
    if ((m.bot & ~m.monoid.all()) != 0) {
        out.push_back("bot mentions unknown elements");
    }
    for (const auto &[name, f] : m.atoms) {
        if (!alg.is_fact(f)) {
            out.push_back("atom " + name + " is not a fact");
        }
    }
    if (m.closed) {
        for (const auto &v : check_topolinear(m).violations) {
            out.push_back("axiom " + std::to_string(v.axiom) + ": " + v.message);
        }
    }
    return out;
}

std::vector<Subset> closed_family(const Model &m, const std::vector<Subset> &seeds) {
    Algebra alg(m);
    std::set<Subset> fam{m.bot};
    for (Subset s : seeds) {
        fam.insert(alg.close(s));
    }
    for (bool grew = true; grew;) {
        grew = false;
        const std::vector<Subset> cur(fam.begin(), fam.end());
        for (Subset f : cur) {
            for (Subset g : cur) {
                grew |= fam.insert(f & g).second;
                grew |= fam.insert(alg.par(f, g)).second;
            }
        }
    }
    return {fam.begin(), fam.end()};
}

std::vector<Monoid> monoid_catalogue(std::size_t max_elements) {
    std::vector<Monoid> base;
    const int cap = static_cast<int>(std::min<std::size_t>(max_elements, 16));
    for (int k = 1; k <= cap; ++k) {
        base.push_back(Monoid::cyclic(k));
    }
    for (int k = 1; k + 1 <= cap; ++k) {
        base.push_back(Monoid::truncated(k));
        base.push_back(Monoid::semilattice(k));
    }
    std::vector<Monoid> out = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (std::size_t j = i; j < base.size(); ++j) {
            if (base[i].size() > 1 && base[j].size() > 1 && base[i].size() * base[j].size() <= max_elements) {
                out.push_back(Monoid::product(base[i], base[j]));
            }
        }
    }
    return out;
}

Model random_model(Rng &rng, const ModelShape &shape) {
    static thread_local std::map<std::size_t, std::vector<Monoid>> catalogues;
    auto &cat = catalogues[shape.max_elements];
    if (cat.empty()) {
        cat = monoid_catalogue(shape.max_elements);
    }
    std::uniform_int_distribution<std::size_t> pick(0, cat.size() - 1);
    const Monoid &mon = cat[pick(rng)];
    std::uniform_int_distribution<Subset> subset(0, mon.all());
    for (int attempt = 0; attempt < 200; ++attempt) {
        Model m{mon, subset(rng), {}, std::nullopt};
        Algebra alg(m);
        for (const std::string &a : shape.atoms) {
            m.atoms[a] = alg.orth(subset(rng));
        }
        if (!shape.exponentials) {
            return m;
        }
        std::vector<Subset> seeds;
        const int extra = static_cast<int>(rng() % 3);
        for (int i = 0; i < extra; ++i) {
            seeds.push_back(subset(rng) | m.bot);
        }
        m.closed = closed_family(m, seeds);
        const TopolinearReport rep = check_topolinear(m);
        if (rep.ok() && rep.validates_contraction()) {
            return m;
        }
    }
    // bot = P leaves P as the only fact, which is always topolinear.
    Model m{mon, mon.all(), {}, std::vector<Subset>{mon.all()}};
    for (const std::string &a : shape.atoms) {
        m.atoms[a] = mon.all();
    }
    return m;
}

std::string to_string(const Model &m, Subset x) {
    std::string out = "{";
    bool first = true;
    for_each_bit(x, [&](int i) {
        out += (first ? "" : ",") + m.monoid.name(i);
        first = false;
    });
    return out + "}";
}

namespace {

std::vector<std::string> words(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

} // namespace

Model parse_model(std::string_view text) {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::vector<std::string>>> rows;
    std::optional<std::string> unit_name;
    std::vector<std::string> bot_names;
    std::vector<std::pair<std::string, std::vector<std::string>>> atoms;
    std::optional<std::vector<std::vector<std::string>>> closed;

    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        auto bad = [&](const std::string &msg) {
            return Error(ErrorKind::Syntax, "line " + std::to_string(line_no) + ": " + msg);
        };
        if (auto h = line.find('#'); h != std::string::npos) {
            line.resize(h);
        }
        std::vector<std::string> w = words(line);
        if (w.empty()) {
            continue;
        }
        const std::string head = w[0];
        auto after_colon = [&]() {
            auto c = line.find(':');
            if (c == std::string::npos) {
                throw bad("missing ':' after '" + head + "'");
            }
            return line.substr(c + 1);
        };
        if (head == "elements") {
            names.assign(w.begin() + 1, w.end());
        } else if (head == "unit") {
            if (w.size() != 2) {
                throw bad("expected 'unit <element>'");
            }
            unit_name = w[1];
        } else if (head == "row") {
            auto c = line.find(':');
            if (c == std::string::npos || w.size() < 2) {
                throw bad("expected 'row <element>: <products>'");
            }
            std::vector<std::string> lhs = words(line.substr(0, c));
            if (lhs.size() != 2) {
                throw bad("expected one element before ':'");
            }
            rows.emplace_back(lhs[1], words(line.substr(c + 1)));
        } else if (head == "bot:" || head == "bot") {
            bot_names = words(after_colon());
        } else if (head == "atom") {
            auto c = line.find(':');
            std::vector<std::string> lhs = words(line.substr(0, c == std::string::npos ? 0 : c));
            if (c == std::string::npos || lhs.size() != 2) {
                throw bad("expected 'atom <name>: <elements>'");
            }
            atoms.emplace_back(lhs[1], words(line.substr(c + 1)));
        } else if (head == "closed:" || head == "closed") {
            std::string rest = after_colon();
            std::vector<std::vector<std::string>> fam;
            std::size_t i = 0;
            while (true) {
                i = rest.find_first_not_of(" \t\r", i);
                if (i == std::string::npos) {
                    break;
                }
                if (rest[i] != '{') {
                    throw bad("closed facts are written {x y ...}");
                }
                auto j = rest.find('}', i);
                if (j == std::string::npos) {
                    throw bad("unterminated '{'");
                }
                std::string inner = rest.substr(i + 1, j - i - 1);
                std::replace(inner.begin(), inner.end(), ',', ' ');
                fam.push_back(words(inner));
                i = j + 1;
            }
            if (!closed) {
                closed.emplace();
            }
            closed->insert(closed->end(), fam.begin(), fam.end());
        } else {
            throw bad("unknown directive '" + head + "'");
        }
    }
    if (names.empty()) {
        fail(ErrorKind::Syntax, "model has no 'elements' line");
    }
    auto index_of = [&](const std::string &n) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) {
            fail(ErrorKind::Syntax, "unknown element '" + n + "'");
        }
        return static_cast<int>(it - names.begin());
    };
    std::vector<std::vector<int>> table(names.size());
    std::vector<bool> filled(names.size(), false);
    for (const auto &[row, vals] : rows) {
        const int r = index_of(row);
        if (filled[static_cast<std::size_t>(r)]) {
            fail(ErrorKind::Syntax, "row " + row + " given twice");
        }
        filled[static_cast<std::size_t>(r)] = true;
        for (const auto &v : vals) {
            table[static_cast<std::size_t>(r)].push_back(index_of(v));
        }
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!filled[i]) {
            fail(ErrorKind::Syntax, "missing row for " + names[i]);
        }
    }
    int unit = -1;
    if (unit_name) {
        unit = index_of(*unit_name);
    } else {
        for (std::size_t e = 0; e < names.size() && unit < 0; ++e) {
            bool ok = true;
            for (std::size_t a = 0; a < names.size() && ok; ++a) {
                ok = table[e].size() == names.size() && table[e][a] == static_cast<int>(a);
            }
            if (ok) {
                unit = static_cast<int>(e);
            }
        }
        if (unit < 0) {
            fail(ErrorKind::Invalid, "no unit element");
        }
    }
    auto subset = [&](const std::vector<std::string> &xs) {
        Subset s = 0;
        for (const auto &x : xs) {
            s |= bit(index_of(x));
        }
        return s;
    };
    Model m{Monoid(names, table, unit), subset(bot_names), {}, std::nullopt};
    for (const auto &[name, xs] : atoms) {
        if (!m.atoms.emplace(name, subset(xs)).second) {
            fail(ErrorKind::Syntax, "atom " + name + " given twice");
        }
    }
    if (closed) {
        std::vector<Subset> fam;
        for (const auto &xs : *closed) {
            fam.push_back(subset(xs));
        }
        m.closed = std::move(fam);
    }
    return m;
}

std::string write_model(const Model &m) {
    const int n = static_cast<int>(m.monoid.size());
    auto elems = [&](Subset x) {
        std::string out;
        for_each_bit(x, [&](int i) { out += " " + m.monoid.name(i); });
        return out;
    };
    std::string out = "elements";
    for (int i = 0; i < n; ++i) {
        out += " " + m.monoid.name(i);
    }
    out += "\nunit " + m.monoid.name(m.monoid.unit()) + "\n";
    for (int i = 0; i < n; ++i) {
        out += "row " + m.monoid.name(i) + ":";
        for (int j = 0; j < n; ++j) {
            out += " " + m.monoid.name(m.monoid.mul(i, j));
        }
        out += "\n";
    }
    out += "bot:" + elems(m.bot) + "\n";
    for (const auto &[name, f] : m.atoms) {
        out += "atom " + name + ":" + elems(f) + "\n";
    }
    if (m.closed) {
        out += "closed:";
        for (Subset f : *m.closed) {
            std::string inner = elems(f);
            out += " {" + (inner.empty() ? "" : inner.substr(1)) + "}";
        }
        out += "\n";
    }
    return out;
}

} // namespace llw::phase
