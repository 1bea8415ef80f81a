#include "llw/tcm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "llw/error.hpp"

namespace llw::tcm {

const char *to_string(Op op) {
    switch (op) {
    case Op::IncA: return "+A";
    case Op::DecA: return "-A";
    case Op::IncB: return "+B";
    case Op::DecB: return "-B";
    case Op::Fork: return "fork";
    }
    return "?";
}

std::string to_string(const Instruction &i) {
    std::string s = i.from + " " + to_string(i.op) + " " + i.to;
    if (i.op == Op::Fork) s += " " + i.to2;
    return s;
}

namespace {

bool valid_state_name(const std::string &s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::vector<std::string> words(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::optional<Op> op_from(const std::string &s) {
    if (s == "+A") return Op::IncA;
    if (s == "-A") return Op::DecA;
    if (s == "+B") return Op::IncB;
    if (s == "-B") return Op::DecB;
    if (s == "fork") return Op::Fork;
    return std::nullopt;
}

} // namespace

void validate(const Machine &m) {
    std::set<std::string> states;
    for (const auto &s : m.states) {
        if (!valid_state_name(s)) fail(ErrorKind::Invalid, "bad state name '" + s + "'");
        if (s == "a" || s == "b") fail(ErrorKind::Invalid, "state name '" + s + "' is reserved for a counter");
        if (!states.insert(s).second) fail(ErrorKind::Invalid, "state '" + s + "' listed twice");
    }
    auto known = [&](const std::string &s, const std::string &what) {
        if (!states.count(s)) fail(ErrorKind::Invalid, what + " '" + s + "' is not a declared state");
    };
    known(m.initial, "initial state");
    known(m.final, "final state");
    for (std::size_t i = 0; i < m.instructions.size(); ++i) {
        const Instruction &ins = m.instructions[i];
        known(ins.from, "instruction source");
        known(ins.to, "instruction target");
        if (ins.op == Op::Fork) {
            known(ins.to2, "fork target");
        } else if (!ins.to2.empty()) {
            fail(ErrorKind::Invalid, "only forks have two targets: " + to_string(ins));
        }
        if (i > 0 && !(m.instructions[i - 1] < ins)) {
            fail(ErrorKind::Invalid, "instructions must be sorted and distinct");
        }
    }
}

Machine parse_machine(std::string_view text) {
    Machine m;
    std::optional<std::string> init, final;
    bool have_states = false;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto w = words(line);
        if (w.empty()) continue;
        auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
        if (w[0] == "states:") {
            if (have_states) throw Error(ErrorKind::Syntax, where() + "states declared twice");
            have_states = true;
            m.states.assign(w.begin() + 1, w.end());
        } else if (w[0] == "init:" || w[0] == "final:") {
            if (w.size() != 2) throw Error(ErrorKind::Syntax, where() + "expected one state after " + w[0]);
            (w[0] == "init:" ? init : final) = w[1];
        } else {
            auto op = w.size() >= 3 ? op_from(w[1]) : std::nullopt;
            if (!op) throw Error(ErrorKind::Syntax, where() + "expected 'q +A q', '-A', '+B', '-B' or 'fork'");
            const std::size_t want = *op == Op::Fork ? 4 : 3;
            if (w.size() != want) throw Error(ErrorKind::Syntax, where() + "wrong number of states");
            m.instructions.push_back({*op, w[0], w[2], want == 4 ? w[3] : std::string()});
        }
    }
    if (!have_states || !init || !final) {
        throw Error(ErrorKind::Syntax, "machine needs 'states:', 'init:' and 'final:' lines");
    }
    m.initial = *init;
    m.final = *final;
    std::sort(m.instructions.begin(), m.instructions.end());
    m.instructions.erase(std::unique(m.instructions.begin(), m.instructions.end()), m.instructions.end());
    validate(m);
    return m;
}

std::string write_machine(const Machine &m) {
    std::string out = "states:";
    for (const auto &s : m.states) out += " " + s;
    out += "\ninit: " + m.initial + "\nfinal: " + m.final + "\n";
    for (const auto &i : m.instructions) out += to_string(i) + "\n";
    return out;
}

std::string to_string(const Triplet &t) {
    return "(" + t.state + "," + std::to_string(t.m) + "," + std::to_string(t.n) + ")";
}

Triplet parse_triplet(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.size() < 7 || s.front() != '(' || s.back() != ')') {
        throw SyntaxError("expected a triplet (q,m,n)", 0);
    }
    auto parts = words([&] {
        std::string inner = s.substr(1, s.size() - 2);
        std::replace(inner.begin(), inner.end(), ',', ' ');
        return inner;
    }());
    if (parts.size() != 3 || !valid_state_name(parts[0])) throw SyntaxError("expected a triplet (q,m,n)", 0);
    auto number = [&](const std::string &x) {
        if (x.empty() || x.size() > 6 || !std::all_of(x.begin(), x.end(), ::isdigit)) {
            throw SyntaxError("counter '" + x + "' is not a small natural number", 0);
        }
        return static_cast<unsigned>(std::stoul(x));
    };
    return {parts[0], number(parts[1]), number(parts[2])};
}

Id make_id(std::vector<Triplet> ts) {
    std::sort(ts.begin(), ts.end());
    return ts;
}

std::string to_string(const Id &s) {
    std::string out;
    for (const auto &t : s) {
        if (!out.empty()) out += ' ';
        out += to_string(t);
    }
    return "{" + out + "}";
}

Id parse_id(std::string_view text) {
    std::vector<Triplet> ts;
    std::size_t pos = 0;
    while ((pos = text.find('(', pos)) != std::string_view::npos) {
        std::size_t close = text.find(')', pos);
        if (close == std::string_view::npos) throw SyntaxError("unclosed triplet", pos);
        ts.push_back(parse_triplet(text.substr(pos, close - pos + 1)));
        pos = close + 1;
    }
    if (ts.empty()) throw SyntaxError("expected at least one triplet", 0);
    return make_id(std::move(ts));
}

bool is_accepting(const Machine &m, const Id &s) {
    return std::all_of(s.begin(), s.end(), [&](const Triplet &t) { return t == Triplet{m.final, 0, 0}; });
}

std::optional<Id> apply(const Id &s, const Triplet &t, const Instruction &ins) {
    if (t.state != ins.from) return std::nullopt;
    auto it = std::find(s.begin(), s.end(), t);
    if (it == s.end()) return std::nullopt;
    std::vector<Triplet> out;
    switch (ins.op) {
    case Op::IncA: out.push_back({ins.to, t.m + 1, t.n}); break;
    case Op::IncB: out.push_back({ins.to, t.m, t.n + 1}); break;
    case Op::DecA:
        if (t.m == 0) return std::nullopt;
        out.push_back({ins.to, t.m - 1, t.n});
        break;
    case Op::DecB:
        if (t.n == 0) return std::nullopt;
        out.push_back({ins.to, t.m, t.n - 1});
        break;
    case Op::Fork:
        out.push_back({ins.to, t.m, t.n});
        out.push_back({ins.to2, t.m, t.n});
        break;
    }
    Id next(s.begin(), it);
    next.insert(next.end(), it + 1, s.end());
    next.insert(next.end(), out.begin(), out.end());
    return make_id(std::move(next));
}

SimulationResult simulate_bfs(const Machine &m, const Id &s, std::size_t bound, std::size_t max_ids) {
    if (bound == 0) fail(ErrorKind::Invalid, "simulation bound must be positive");
    struct Visit {
        Id id;
        int parent;
        Instruction ins;
        Triplet affected;
        std::size_t depth;
    };
    SimulationResult r;
    const Id start = make_id(s);
    std::vector<Visit> seen{{start, -1, {}, {}, 0}};
    std::set<Id> visited{start};
    std::deque<int> frontier{0};
    int goal = is_accepting(m, start) ? 0 : -1;
    while (goal < 0 && !frontier.empty()) {
        const int cur = frontier.front();
        frontier.pop_front();
        if (seen[static_cast<std::size_t>(cur)].depth == bound) continue;
        const Id id = seen[static_cast<std::size_t>(cur)].id;
        for (std::size_t k = 0; k < id.size() && goal < 0; ++k) {
            if (k > 0 && id[k] == id[k - 1]) continue;
            for (const Instruction &ins : m.instructions) {
                auto next = apply(id, id[k], ins);
                if (!next || !visited.insert(*next).second) continue;
                if (visited.size() > max_ids) {
                    r.truncated = true;
                    r.explored = visited.size();
                    return r;
                }
                seen.push_back({*next, cur, ins, id[k], seen[static_cast<std::size_t>(cur)].depth + 1});
                frontier.push_back(static_cast<int>(seen.size() - 1));
                if (is_accepting(m, *next)) {
                    goal = static_cast<int>(seen.size() - 1);
                    break;
                }
            }
        }
    }
    r.explored = visited.size();
    if (goal < 0) return r;
    RunTrace t{start, {}};
    for (int v = goal; seen[static_cast<std::size_t>(v)].parent >= 0; v = seen[static_cast<std::size_t>(v)].parent) {
        const Visit &x = seen[static_cast<std::size_t>(v)];
        t.steps.push_back({x.ins, x.affected, x.id});
    }
    std::reverse(t.steps.begin(), t.steps.end());
    r.trace = std::move(t);
    return r;
}

namespace {

class CostTable {
public:
    explicit CostTable(const Machine &m) : m_(m) {}

    static constexpr std::size_t kNever = SIZE_MAX;

    // Fewest transitions (at most `budget`) taking t to all-final triplets.
    std::size_t cost(const Triplet &t, std::size_t budget) {
        if (t == Triplet{m_.final, 0, 0}) return 0;
        if (budget == 0) return kNever;
        const Key key{t, budget};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
        Entry best{kNever, {}};
        for (const Instruction &ins : m_.instructions) {
            auto kids = successors(t, ins);
            if (!kids) continue;
            std::size_t total = 1;
            for (const Triplet &k : *kids) {
                const std::size_t c = cost(k, budget - 1);
                total = c == kNever ? kNever : total + c;
                if (total == kNever || total > budget) break;
            }
            if (total != kNever && total <= budget && total < best.cost) best = {total, ins};
        }
        memo_[key] = best;
        return best.cost;
    }

    // Appends t's cheapest run, depth first.
    void plan(const Triplet &t, std::size_t budget, std::vector<std::pair<Instruction, Triplet>> &out) {
        if (t == Triplet{m_.final, 0, 0}) return;
        cost(t, budget);
        const Instruction ins = *memo_.at({t, budget}).choice;
        out.emplace_back(ins, t);
        const auto kids = successors(t, ins);
        for (const Triplet &k : *kids) plan(k, budget - 1, out);
    }

    std::size_t size() const { return memo_.size(); }

private:
    struct Key {
        Triplet t;
        std::size_t budget;
        auto operator<=>(const Key &) const = default;
    };
    struct Entry {
        std::size_t cost;
        std::optional<Instruction> choice;
    };
    const Machine &m_;
    std::map<Key, Entry> memo_;

    static std::optional<std::vector<Triplet>> successors(const Triplet &t, const Instruction &ins) {
        auto next = apply(Id{t}, t, ins);
        if (!next) return std::nullopt;
        return *next;
    }
};

} // namespace

SimulationResult simulate(const Machine &m, const Id &s, std::size_t bound) {
    if (bound == 0) fail(ErrorKind::Invalid, "simulation bound must be positive");
    const Id start = make_id(s);
    CostTable table(m);
    std::size_t total = 0;
    for (const Triplet &t : start) {
        const std::size_t c = table.cost(t, bound);
        if (c == CostTable::kNever || total + c > bound) {
            return {std::nullopt, table.size(), false};
        }
        total += c;
    }
    std::vector<std::pair<Instruction, Triplet>> moves;
    for (const Triplet &t : start) table.plan(t, bound, moves);
    RunTrace trace{start, {}};
    Id cur = start;
    for (const auto &[ins, t] : moves) {
        cur = *apply(cur, t, ins);
        trace.steps.push_back({ins, t, cur});
    }
    return {std::move(trace), table.size(), false};
}

std::vector<std::string> validate_trace(const Machine &m, const RunTrace &t) {
    std::vector<std::string> errs;
    Id cur = make_id(t.initial);
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const TraceStep &st = t.steps[i];
        const std::string where = "step " + std::to_string(i + 1) + " (" + to_string(st.instruction) + "): ";
        if (!std::binary_search(m.instructions.begin(), m.instructions.end(), st.instruction)) {
            errs.push_back(where + "not an instruction of the machine");
            return errs;
        }
        auto next = apply(cur, st.affected, st.instruction);
        if (!next) {
            errs.push_back(where + "does not apply to " + to_string(st.affected) + " in " + to_string(cur));
            return errs;
        }
        if (*next != make_id(st.after)) {
            errs.push_back(where + "yields " + to_string(*next) + ", trace says " + to_string(st.after));
            return errs;
        }
        cur = *next;
    }
    return errs;
}

// ---------------------------------------------------------------------------
// Encoding

Formula power(const Formula &x, unsigned k) {
    if (k == 0) return Formula::one();
    Formula f = x;
    for (unsigned i = 1; i < k; ++i) f = Formula::tensor(f, x);
    return f;
}

namespace {

Formula atom(const std::string &s) { return Formula::atom(s); }

// The rule L |- R of an instruction.
std::pair<Formula, Formula> sides(const Instruction &ins) {
    const Formula a = atom("a");
    const Formula b = atom("b");
    switch (ins.op) {
    case Op::IncA: return {atom(ins.from), Formula::tensor(atom(ins.to), a)};
    case Op::DecA: return {Formula::tensor(atom(ins.from), a), atom(ins.to)};
    case Op::IncB: return {atom(ins.from), Formula::tensor(atom(ins.to), b)};
    case Op::DecB: return {Formula::tensor(atom(ins.from), b), atom(ins.to)};
    case Op::Fork: return {atom(ins.from), Formula::plus(atom(ins.to), atom(ins.to2))};
    }
    fail(ErrorKind::Internal, "unknown instruction");
}

} // namespace

Formula encode_instruction(const Instruction &ins) {
    auto [l, r] = sides(ins);
    return Formula::why_not(dual(Formula::par(dual(l), r)));
}

Sequent Encoding::full() const {
    std::vector<Formula> fs(goal.begin(), goal.end());
    fs.insert(fs.end(), theory.begin(), theory.end());
    return Sequent(std::move(fs));
}

Encoding encode(const Machine &m, const Triplet &t) {
    Encoding e;
    e.goal = Sequent({dual(atom(t.state)), dual(power(atom("a"), t.m)), dual(power(atom("b"), t.n)),
                      atom(m.final)});
    for (const auto &ins : m.instructions) e.theory.push_back(encode_instruction(ins));
    return e;
}

namespace {

struct Lineage {
    Triplet triplet;
    std::optional<Instruction> step;
    std::vector<int> kids;
};

class Synthesizer {
public:
    Synthesizer(const Machine &m, std::vector<Lineage> nodes) : m_(m), nodes_(std::move(nodes)) {
        for (const auto &ins : m.instructions) theory_.push_back(encode_instruction(ins));
    }

    ProofPtr prove(int v) {
        const Lineage &node = nodes_[static_cast<std::size_t>(v)];
        if (!node.step) return base(node.triplet);
        const Instruction &ins = *node.step;
        const Triplet &t = node.triplet;
        switch (ins.op) {
        case Op::IncA:
        case Op::IncB:
            return increment(ins, t, prove(node.kids[0]));
        case Op::DecA:
        case Op::DecB:
            return decrement(ins, t, prove(node.kids[0]));
        case Op::Fork:
            return fork(ins, prove(node.kids[0]), prove(node.kids[1]));
        }
        fail(ErrorKind::Internal, "unknown instruction");
    }

private:
    const Machine &m_;
    std::vector<Lineage> nodes_;
    std::vector<Formula> theory_;

    // |- qF^, qF padded with the two empty counters and the theory.
    ProofPtr base(const Triplet &t) {
        if (!(t == Triplet{m_.final, 0, 0})) {
            fail(ErrorKind::Invalid, "run ends in non-final triplet " + to_string(t));
        }
        ProofPtr p = build::ax(atom(m_.final));
        p = build::bot(build::bot(p));
        return build::weaken_all(p, theory_);
    }

    // |- ?(L * R^), L^, R with the rule axiom eta-expanded, where L^ is
    // split into its literals.
    ProofPtr rule_axiom(const Instruction &ins) {
        auto [l, r] = sides(ins);
        ProofPtr left = l.kind() == Connective::Tensor
                            ? build::tensor(build::ax(l.left()), l.left(), build::ax(l.right()), l.right())
                            : build::ax(l);
        ProofPtr p = build::tensor(left, l, build::ax(r), dual(r));
        return build::dereliction(p, Formula::tensor(l, dual(r)));
    }

    // Moves the last factor of (x^(k+1))^ out: from Gamma, (x^(k+1))^ to
    // Gamma, (x^k)^, x^.
    ProofPtr split_counter(const ProofPtr &p, const Formula &x, unsigned k) {
        const Formula bigger = dual(power(x, k + 1));
        if (k == 0) return build::bot(p);   // (x^1)^ is already x^; add the empty counter
        const Formula smaller = power(x, k);
        ProofPtr inverse = build::tensor(build::ax(dual(smaller)), smaller, build::ax(dual(x)), x);
        return build::cut(p, bigger, inverse);
    }

    // Inverse of split_counter: from Gamma, (x^k)^, x^ to Gamma, (x^(k+1))^.
    ProofPtr join_counter(const ProofPtr &p, const Formula &x, unsigned k) {
        if (k == 0) return build::cut(p, Formula::bot(), build::one());
        return build::par(p, dual(power(x, k)), dual(x));
    }

    ProofPtr finish(ProofPtr p, const Instruction &ins) {
        return build::contraction(p, encode_instruction(ins));
    }

    ProofPtr increment(const Instruction &ins, const Triplet &t, ProofPtr child) {
        const bool on_a = ins.op == Op::IncA;
        const Formula x = atom(on_a ? "a" : "b");
        ProofPtr p = split_counter(child, x, on_a ? t.m : t.n);
        p = build::par(p, dual(atom(ins.to)), dual(x));
        p = build::cut(p, Formula::par(dual(atom(ins.to)), dual(x)), rule_axiom(ins));
        return finish(p, ins);
    }

    ProofPtr decrement(const Instruction &ins, const Triplet &t, ProofPtr child) {
        const bool on_a = ins.op == Op::DecA;
        const Formula x = atom(on_a ? "a" : "b");
        ProofPtr p = build::cut(child, dual(atom(ins.to)), rule_axiom(ins));
        p = join_counter(p, x, (on_a ? t.m : t.n) - 1);
        return finish(p, ins);
    }

    ProofPtr fork(const Instruction &ins, ProofPtr left, ProofPtr right) {
        ProofPtr p = build::with(left, dual(atom(ins.to)), right, dual(atom(ins.to2)));
        p = build::cut(p, Formula::with(dual(atom(ins.to)), dual(atom(ins.to2))), rule_axiom(ins));
        return finish(p, ins);
    }
};

} // namespace

ProofPtr synthesize_proof(const Machine &m, const RunTrace &trace, const Triplet &t) {
    validate(m);
    if (auto errs = validate_trace(m, trace); !errs.empty()) fail(ErrorKind::Invalid, errs.front());
    if (!is_accepting(m, trace.final_id())) fail(ErrorKind::Invalid, "trace does not end in an accepting ID");

    // Follow each copy of each triplet through the run.
    std::vector<Lineage> nodes;
    std::vector<std::pair<Triplet, int>> live;
    for (const Triplet &x : make_id(trace.initial)) {
        nodes.push_back({x, std::nullopt, {}});
        live.emplace_back(x, static_cast<int>(nodes.size() - 1));
    }
    for (const TraceStep &st : trace.steps) {
        auto it = std::find_if(live.begin(), live.end(), [&](const auto &e) { return e.first == st.affected; });
        const int v = it->second;
        live.erase(it);
        nodes[static_cast<std::size_t>(v)].step = st.instruction;
        const Triplet &x = st.affected;
        std::vector<Triplet> out;
        switch (st.instruction.op) {
        case Op::IncA: out.push_back({st.instruction.to, x.m + 1, x.n}); break;
        case Op::DecA: out.push_back({st.instruction.to, x.m - 1, x.n}); break;
        case Op::IncB: out.push_back({st.instruction.to, x.m, x.n + 1}); break;
        case Op::DecB: out.push_back({st.instruction.to, x.m, x.n - 1}); break;
        case Op::Fork:
            out.push_back({st.instruction.to, x.m, x.n});
            out.push_back({st.instruction.to2, x.m, x.n});
            break;
        }
        for (const Triplet &y : out) {
            nodes.push_back({y, std::nullopt, {}});
            const int w = static_cast<int>(nodes.size() - 1);
            nodes[static_cast<std::size_t>(v)].kids.push_back(w);
            live.emplace_back(y, w);
        }
    }
    int root = -1;
    for (std::size_t i = 0; i < trace.initial.size() && root < 0; ++i) {
        if (nodes[i].triplet == t) root = static_cast<int>(i);
    }
    if (root < 0) fail(ErrorKind::Invalid, to_string(t) + " is not in the initial ID " + to_string(trace.initial));
    return Synthesizer(m, std::move(nodes)).prove(root);
}

// ---------------------------------------------------------------------------
// Generators

Machine random_machine(Rng &rng, const MachineShape &shape) {
    Machine m;
    const unsigned k = 1 + static_cast<unsigned>(rng() % std::max(1u, shape.max_states));
    for (unsigned i = 0; i < k; ++i) m.states.push_back("q" + std::to_string(i));
    m.initial = m.states.front();
    m.final = m.states.back();
    const unsigned count = static_cast<unsigned>(rng() % (shape.max_instructions + 1));
    auto state = [&] { return m.states[rng() % k]; };
    for (unsigned i = 0; i < count; ++i) {
        const Op op = static_cast<Op>(rng() % 5);
        Instruction ins{op, state(), state(), op == Op::Fork ? state() : std::string()};
        m.instructions.push_back(ins);
    }
    std::sort(m.instructions.begin(), m.instructions.end());
    m.instructions.erase(std::unique(m.instructions.begin(), m.instructions.end()), m.instructions.end());
    return m;
}

Id random_id(Rng &rng, const Machine &m, const MachineShape &shape) {
    const unsigned count = 1 + static_cast<unsigned>(rng() % std::max(1u, shape.max_triplets));
    std::vector<Triplet> ts;
    for (unsigned i = 0; i < count; ++i) {
        ts.push_back({m.states[rng() % m.states.size()], static_cast<unsigned>(rng() % (shape.max_counter + 1)),
                      static_cast<unsigned>(rng() % (shape.max_counter + 1))});
    }
    return make_id(std::move(ts));
}

Machine counter_example_machine() {
    return parse_machine("states: qi q1 qf\ninit: qi\nfinal: qf\nqi +A q1\nq1 -A qf\n");
}

Machine fork_example_machine() { return parse_machine("states: qi qf\ninit: qi\nfinal: qf\nqi fork qf qf\n"); }

} // namespace llw::tcm
