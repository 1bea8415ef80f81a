#include "llw/cut_elim.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace llw {

const char *to_string(ReductionKind k) {
    switch (k) {
    case ReductionKind::AxiomCut: return "axiom-cut";
    case ReductionKind::TensorPar: return "tensor-par";
    case ReductionKind::WithPlus: return "with-plus";
    case ReductionKind::OneBot: return "one-bot";
    case ReductionKind::DerProm: return "der-prom";
    case ReductionKind::WeakProm: return "weak-prom";
    case ReductionKind::ContrProm: return "contr-prom";
    case ReductionKind::PromProm: return "prom-prom";
    case ReductionKind::Commutative: return "commutative";
    }
    return "?";
}

namespace {

// Occurrence labels. Non-negative labels are positions in the conclusion of
// the cut being reduced; negative ones mark formulas that are consumed inside
// the rewritten proof.
constexpr int kUnset = -1;
constexpr int cut_label(int k) { return -2 - k; }
constexpr int act_label(int k, int m, int s) { return -10 - (k * 100 + m * 10 + s); }
constexpr int copy_label(int copy, int j) { return -100000 - copy * 10000 - j; }

// A proof together with the label of each conclusion occurrence.
struct LP {
    ProofPtr p;
    std::vector<int> lab;

    int at(int label) const {
        for (std::size_t i = 0; i < lab.size(); ++i) {
            if (lab[i] == label) {
                return static_cast<int>(i);
            }
        }
        fail(ErrorKind::Internal, "cut elimination lost track of an occurrence (label " + std::to_string(label) + ")");
    }
};

LP label_from(ProofPtr node, const std::vector<const LP *> &prems, const std::vector<int> &principal_labels) {
    LP out{node, std::vector<int>(node->conclusion.size(), kUnset)};
    for (std::size_t k = 0; k < prems.size(); ++k) {
        const Wiring &w = node->wiring[k];
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] >= 0 && (k == 0 || node->rule != Rule::With)) {
                out.lab[static_cast<std::size_t>(w[j])] = prems[k]->lab[j];
            }
        }
    }
    for (std::size_t i = 0; i < principal_labels.size(); ++i) {
        out.lab[static_cast<std::size_t>(node->principal[i])] = principal_labels[i];
    }
    out.p = std::move(node);
    return out;
}

LP cut_of(const LP &l, int la, const LP &r, int ra) {
    return label_from(build::cut(l.p, l.at(la), r.p, r.at(ra)), {&l, &r}, {});
}

// With nodes built by position pair the second premise's context first-fit;
// rewire it so that equally labelled occurrences meet.
LP with_of(const LP &l, int la, const LP &r, int ra, int lab) {
    ProofPtr built = build::with(l.p, l.at(la), r.p, r.at(ra));
    LP out = label_from(built, {&l, &r}, {lab});
    auto node = std::make_shared<Proof>(*built);
    Wiring &w = node->wiring[1];
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (w[j] < 0) {
            continue;
        }
        int t = -1;
        for (std::size_t c = 0; c < out.lab.size(); ++c) {
            if (out.lab[c] == r.lab[j] && static_cast<int>(c) != node->principal[0]) {
                t = static_cast<int>(c);
            }
        }
        if (t < 0) {
            fail(ErrorKind::Internal, "with: premise contexts carry different occurrences");
        }
        w[j] = t;
    }
    out.p = node;
    return out;
}

struct Reduction {
    LP result;
    ReductionKind kind = ReductionKind::Commutative;
    Rule commuted = Rule::Cut;
    bool duplicated = false;
};

class CutReducer {
public:
    explicit CutReducer(const Proof &cut) : c_(cut) {
        for (int k = 0; k < 2; ++k) {
            const Wiring &w = c_.wiring[static_cast<std::size_t>(k)];
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (w[j] == slot_target(0)) {
                    a_[k] = static_cast<int>(j);
                }
            }
        }
    }

    Reduction run() {
        for (int k = 0; k < 2; ++k) {
            if (side(k).rule == Rule::Axiom) {
                return axiom_case(k);
            }
        }
        for (int k = 0; k < 2; ++k) {
            if (commutable(k)) {
                return commute(k);
            }
        }
        return key_case();
    }

private:
    const Proof &side(int k) const { return *c_.premises[static_cast<std::size_t>(k)]; }

    int lab_c(int k, int j) const {
        int t = c_.wiring[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        return t >= 0 ? t : cut_label(k);
    }

    LP whole(int k) const {
        const Proof &p = side(k);
        LP out{c_.premises[static_cast<std::size_t>(k)], {}};
        for (std::size_t j = 0; j < p.conclusion.size(); ++j) {
            out.lab.push_back(lab_c(k, static_cast<int>(j)));
        }
        return out;
    }

    LP sub(int k, int m) const {
        const Proof &p = side(k);
        LP out{p.premises[static_cast<std::size_t>(m)], {}};
        for (int w : p.wiring[static_cast<std::size_t>(m)]) {
            out.lab.push_back(w >= 0 ? lab_c(k, w) : act_label(k, m, target_slot(w)));
        }
        return out;
    }

    bool principal(int k) const { return contains(side(k).principal, a_[k]); }

    static bool contains(const std::vector<int> &v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

    bool commutable(int k) const {
        if (principal(k)) {
            return false;
        }
        if (side(k).rule != Rule::Promotion) {
            return true;
        }
        const Proof &o = side(1 - k);
        for (std::size_t j = 0; j < o.conclusion.size(); ++j) {
            if (static_cast<int>(j) != a_[1 - k] && o.conclusion[j].kind() != Connective::WhyNot) {
                return false;
            }
        }
        return true;
    }

    Reduction axiom_case(int k) const {
        const int other = 1 - a_[k];
        LP out = whole(1 - k);
        out.lab[static_cast<std::size_t>(a_[1 - k])] = lab_c(k, other);
        return {out, ReductionKind::AxiomCut};
    }

    LP cut_into(int k, const LP &q) const {
        LP o = whole(1 - k);
        return k == 0 ? cut_of(q, cut_label(0), o, cut_label(1)) : cut_of(o, cut_label(0), q, cut_label(1));
    }

    Reduction commute(int k) const {
        const Proof &r = side(k);
        Reduction out;
        out.kind = (r.rule == Rule::Promotion && side(1 - k).rule == Rule::Promotion) ? ReductionKind::PromProm
                                                                                     : ReductionKind::Commutative;
        out.commuted = r.rule;
        const int lab = lab_c(k, r.principal[0]);

        if (r.rule == Rule::Top) {
            std::vector<std::pair<Formula, int>> entries;
            std::vector<Formula> context;
            for (std::size_t t = 0; t < c_.conclusion.size(); ++t) {
                if (static_cast<int>(t) != lab) {
                    entries.emplace_back(c_.conclusion[t], static_cast<int>(t));
                    context.push_back(c_.conclusion[t]);
                }
            }
            entries.emplace_back(Formula::top(), lab);
            std::stable_sort(entries.begin(), entries.end(),
                             [](const auto &x, const auto &y) { return x.first < y.first; });
            LP res{build::top(context), {}};
            for (auto &e : entries) res.lab.push_back(e.second);
            out.result = res;
            return out;
        }

        std::vector<LP> prem;
        for (std::size_t m = 0; m < r.premises.size(); ++m) {
            LP q = sub(k, static_cast<int>(m));
            bool has_cut = std::find(q.lab.begin(), q.lab.end(), cut_label(k)) != q.lab.end();
            prem.push_back(has_cut ? cut_into(k, q) : q);
        }
        const Formula &pf = r.conclusion[static_cast<std::size_t>(r.principal[0])];
        const LP &x = prem[0];
        auto act = [&](int m, int s) { return prem[static_cast<std::size_t>(m)].at(act_label(k, m, s)); };
        ProofPtr node;
        switch (r.rule) {
        case Rule::Par: node = build::par(x.p, act(0, 0), act(0, 1)); break;
        case Rule::Bot: node = build::bot(x.p); break;
        case Rule::PlusL: node = build::plus_l(x.p, act(0, 0), pf.right()); break;
        case Rule::PlusR: node = build::plus_r(x.p, pf.left(), act(0, 0)); break;
        case Rule::Dereliction: node = build::dereliction(x.p, act(0, 0)); break;
        case Rule::Promotion: node = build::promotion(x.p, act(0, 0)); break;
        case Rule::Contraction: node = build::contraction(x.p, act(0, 0), act(0, 1)); break;
        case Rule::Weakening: node = build::weakening(x.p, pf); break;
        case Rule::Tensor: node = build::tensor(prem[0].p, act(0, 0), prem[1].p, act(1, 0)); break;
        case Rule::With:
            out.duplicated = true;
            out.result = with_of(prem[0], act_label(k, 0, 0), prem[1], act_label(k, 1, 0), lab);
            return out;
        default:
            fail(ErrorKind::Internal, std::string("no commutation past ") + rule_name(r.rule));
        }
        std::vector<const LP *> ptrs;
        for (const auto &q : prem) ptrs.push_back(&q);
        out.result = label_from(node, ptrs, {lab});
        return out;
    }

    int side_with(Rule rule) const {
        for (int k = 0; k < 2; ++k) {
            if (side(k).rule == rule) return k;
        }
        return -1;
    }

    Reduction key_case() const {
        Reduction out;
        if (int t = side_with(Rule::Tensor); t >= 0) {
            const int q = 1 - t;
            LP left = sub(t, 0), right = sub(t, 1), par = sub(q, 0);
            LP inner = cut_of(right, act_label(t, 1, 0), par, act_label(q, 0, 1));
            out.result = cut_of(left, act_label(t, 0, 0), inner, act_label(q, 0, 0));
            out.kind = ReductionKind::TensorPar;
            return out;
        }
        if (int w = side_with(Rule::With); w >= 0) {
            const int p = 1 - w;
            const int m = side(p).rule == Rule::PlusL ? 0 : 1;
            out.result = cut_of(sub(w, m), act_label(w, m, 0), sub(p, 0), act_label(p, 0, 0));
            out.kind = ReductionKind::WithPlus;
            return out;
        }
        if (int b = side_with(Rule::Bot); b >= 0) {
            out.result = sub(b, 0);
            out.kind = ReductionKind::OneBot;
            return out;
        }
        const int pr = side_with(Rule::Promotion);
        if (pr < 0) {
            fail(ErrorKind::Internal, "no reduction applies to this cut");
        }
        const int e = 1 - pr;
        switch (side(e).rule) {
        case Rule::Dereliction:
            out.result = cut_of(sub(pr, 0), act_label(pr, 0, 0), sub(e, 0), act_label(e, 0, 0));
            out.kind = ReductionKind::DerProm;
            return out;
        case Rule::Weakening: {
            LP x = sub(e, 0);
            const Proof &p = side(pr);
            for (std::size_t j = 0; j < p.conclusion.size(); ++j) {
                if (static_cast<int>(j) == a_[pr]) continue;
                ProofPtr node = build::weakening(x.p, p.conclusion[j]);
                x = label_from(node, {&x}, {lab_c(pr, static_cast<int>(j))});
            }
            out.result = x;
            out.kind = ReductionKind::WeakProm;
            return out;
        }
        case Rule::Contraction: {
            const Proof &p = side(pr);
            LP copy1 = whole(pr), copy2 = whole(pr);
            for (std::size_t j = 0; j < p.conclusion.size(); ++j) {
                if (static_cast<int>(j) == a_[pr]) continue;
                copy1.lab[j] = copy_label(1, static_cast<int>(j));
                copy2.lab[j] = copy_label(2, static_cast<int>(j));
            }
            LP x = sub(e, 0);
            LP once = cut_of(copy1, cut_label(pr), x, act_label(e, 0, 0));
            LP twice = cut_of(copy2, cut_label(pr), once, act_label(e, 0, 1));
            for (std::size_t j = 0; j < p.conclusion.size(); ++j) {
                if (static_cast<int>(j) == a_[pr]) continue;
                const int jj = static_cast<int>(j);
                ProofPtr node = build::contraction(twice.p, twice.at(copy_label(1, jj)), twice.at(copy_label(2, jj)));
                twice = label_from(node, {&twice}, {lab_c(pr, jj)});
            }
            out.result = twice;
            out.kind = ReductionKind::ContrProm;
            out.duplicated = true;
            return out;
        }
        default:
            fail(ErrorKind::Internal, "no reduction applies to this cut");
        }
    }

    const Proof &c_;
    int a_[2] = {-1, -1};
};

bool cut_free(const Proof &p, std::unordered_map<const Proof *, bool> &memo) {
    if (auto it = memo.find(&p); it != memo.end()) {
        return it->second;
    }
    bool r = p.rule != Rule::Cut;
    for (const auto &q : p.premises) {
        r = r && cut_free(*q, memo);
    }
    memo.emplace(&p, r);
    return r;
}

bool find_redex(const Proof &p, std::vector<std::size_t> &path, std::unordered_map<const Proof *, bool> &memo) {
    if (cut_free(p, memo)) {
        return false;
    }
    for (std::size_t k = 0; k < p.premises.size(); ++k) {
        path.push_back(k);
        if (find_redex(*p.premises[k], path, memo)) {
            return true;
        }
        path.pop_back();
    }
    return p.rule == Rule::Cut;
}

std::vector<int> identity(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

std::optional<StepResult> reduce_step(const ProofPtr &p) {
    std::vector<std::size_t> path;
    std::unordered_map<const Proof *, bool> memo;
    if (!find_redex(*p, path, memo)) {
        return std::nullopt;
    }
    std::vector<const Proof *> chain{p.get()};
    for (std::size_t k : path) {
        chain.push_back(chain.back()->premises[k].get());
    }
    const Proof &redex = *chain.back();
    Reduction r = CutReducer(redex).run();

    const std::size_t n = redex.conclusion.size();
    std::vector<int> perm(n, -1);
    if (r.result.lab.size() != n) {
        fail(ErrorKind::Internal, "reduction changed the conclusion size");
    }
    for (std::size_t t = 0; t < n; ++t) {
        int old = r.result.lab[t];
        if (old < 0 || static_cast<std::size_t>(old) >= n || perm[static_cast<std::size_t>(old)] != -1) {
            fail(ErrorKind::Internal, "reduction did not preserve the conclusion occurrences");
        }
        perm[static_cast<std::size_t>(old)] = static_cast<int>(t);
    }

    ProofPtr cur = r.result.p;
    std::vector<int> child_perm = perm;
    for (std::size_t d = path.size(); d-- > 0;) {
        const Proof &parent = *chain[d];
        cur = build::replace_premise(parent, path[d], cur, child_perm);
        child_perm = identity(parent.conclusion.size());
    }

    StepResult out;
    out.proof = cur;
    out.step.path = "/";
    for (std::size_t i = 0; i < path.size(); ++i) {
        out.step.path += (i ? "/" : "") + std::to_string(path[i]);
    }
    out.step.kind = r.kind;
    out.step.commuted_rule = r.commuted;
    out.step.duplicated = r.duplicated;
    out.step.occurrence_map = path.empty() ? perm : identity(p->conclusion.size());
    return out;
}

NormalizationResult normalize(ProofPtr p, std::size_t fuel, const StepObserver &observer) {
    NormalizationResult out;
    out.occurrence_map = identity(p->conclusion.size());
    while (true) {
        auto step = reduce_step(p);
        if (!step) {
            break;
        }
        if (out.stats.steps >= fuel) {
            out.fuel_exhausted = true;
            break;
        }
        ++out.stats.steps;
        if (step->step.duplicated) {
            ++out.stats.duplications;
        }
        if (observer) {
            observer(*p, *step->proof, step->step);
        }
        for (int &i : out.occurrence_map) {
            i = step->step.occurrence_map[static_cast<std::size_t>(i)];
        }
        p = step->proof;
    }
    out.stats.final_cut_count = count_cuts(*p);
    out.proof = std::move(p);
    return out;
}

std::string describe_step(std::size_t index, const ReductionStep &step, const Proof &after) {
    std::string s = "step=" + std::to_string(index) + " kind=" + to_string(step.kind) + " path=" + step.path;
    if (step.kind == ReductionKind::Commutative || step.kind == ReductionKind::PromProm) {
        s += std::string(" past=") + rule_name(step.commuted_rule);
    }
    if (step.duplicated) {
        s += " duplicated=1";
    }
    s += " cuts=" + std::to_string(count_cuts(after)) + " nodes=" + std::to_string(node_count(after));
    return s;
}

} // namespace llw
