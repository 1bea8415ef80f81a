#include "llw/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "llw/checks.hpp"
#include "llw/coherence.hpp"
#include "llw/error.hpp"
#include "llw/mall.hpp"
#include "llw/phase.hpp"
#include "llw/proof.hpp"

namespace llw::corpus {

namespace {

constexpr std::pair<Tag, const char *> kNames[] = {
    {Tag::CheckOk, "check-ok"},
    {Tag::Provable, "provable"},
    {Tag::NotProvable, "not-provable"},
    {Tag::CutfreeAfter, "cutfree-after"},
    {Tag::ValidAllModels, "valid-all-models"},
    {Tag::InvariantInterp, "invariant-interp"},
};

bool is_proof_path(std::string_view p) { return p.size() > 4 && p.substr(p.size() - 4) == ".llp"; }

bool needs_proof(Tag t) {
    return t == Tag::CheckOk || t == Tag::CutfreeAfter || t == Tag::InvariantInterp;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// FNV-1a, so seeds do not depend on the standard library's hash.
std::uint64_t seed_of(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void collect_atoms(const Formula &f, std::set<std::string> &out) {
    switch (f.kind()) {
    case Connective::Atom:
    case Connective::DualAtom:
        out.insert(f.name());
        return;
    default:
        break;
    }
    if (f.is_binary()) {
        collect_atoms(f.left(), out);
        collect_atoms(f.right(), out);
    } else if (!f.is_unit()) {
        collect_atoms(f.body(), out);
    }
}

std::string first_failure(const CheckReport &r) {
    const auto &f = r.failures.front();
    std::string s = "node " + f.path + ": " + f.message;
    if (r.failures.size() > 1) s += " (+" + std::to_string(r.failures.size() - 1) + " more)";
    return s;
}

TagOutcome run_tag(Tag tag, const Sequent &goal, const ProofPtr &proof, const Settings &st, Rng &rng) {
    TagOutcome o;
    o.tag = tag;
    try {
        switch (tag) {
        case Tag::CheckOk: {
            CheckReport r = check_proof(*proof);
            o.pass = r.ok;
            if (!r.ok) o.detail = first_failure(r);
            break;
        }
        case Tag::Provable:
        case Tag::NotProvable: {
            SearchResult r = prove_mall(goal);
            if (r.status == SearchStatus::BudgetExceeded) {
                o.detail = "search budget exceeded";
                break;
            }
            const bool want = tag == Tag::Provable;
            o.pass = (r.status == SearchStatus::Provable) == want;
            if (!o.pass) o.detail = std::string("prover says ") + to_string(r.status);
            break;
        }
        case Tag::CutfreeAfter: {
            checks::Tally t = checks::check_normalization(proof, st.fuel);
            o.pass = t.ok();
            if (!o.pass) o.detail = t.messages.front();
            break;
        }
        case Tag::ValidAllModels: {
            std::set<std::string> atoms;
            for (const auto &f : goal) collect_atoms(f, atoms);
            phase::ModelShape shape;
            shape.atoms.assign(atoms.begin(), atoms.end());
            shape.exponentials = goal.has_exponential();
            o.pass = true;
            for (std::size_t k = 0; k < st.models; ++k) {
                phase::Model m = phase::random_model(rng, shape);
                if (!phase::is_valid(m, goal)) {
                    o.pass = false;
                    o.detail = "invalid in model " + std::to_string(k);
                    break;
                }
            }
            break;
        }
        case Tag::InvariantInterp: {
            const auto atoms = coh::proof_atoms(*proof);
            o.pass = true;
            for (std::size_t k = 0; k < st.envs && o.pass; ++k) {
                coh::AtomEnv env = coh::random_env(rng, atoms, 3);
                if (!coh::is_clique(coh::interpret_proof(*proof, env), env)) {
                    o.pass = false;
                    o.detail = "interpretation is not a clique";
                    break;
                }
                checks::Tally t = checks::check_normalization(proof, st.fuel, &env);
                if (!t.ok()) {
                    o.pass = false;
                    o.detail = t.messages.front();
                }
            }
            break;
        }
        }
    } catch (const Error &e) {
        o.pass = false;
        o.detail = e.what();
    }
    return o;
}

ItemResult run_item(const Manifest &m, const Entry &e, const Settings &st) {
    ItemResult res;
    res.path = e.path;
    Rng rng(seed_of(e.path));
    ProofPtr proof;
    Sequent goal;
    try {
        const std::string text = slurp(m.base / e.path);
        if (is_proof_path(e.path)) {
            proof = read_proof(text);
            goal = proof->conclusion;
        } else {
            goal = parse_sequent(text);
        }
    } catch (const Error &err) {
        for (Tag t : e.tags) res.outcomes.push_back({t, false, err.what()});
        return res;
    }
    for (Tag t : e.tags) res.outcomes.push_back(run_tag(t, goal, proof, st, rng));
    return res;
}

std::string quoted(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

const char *to_string(Tag t) {
    for (const auto &[tag, name] : kNames) {
        if (tag == t) return name;
    }
    return "?";
}

std::optional<Tag> tag_from_name(std::string_view name) {
    for (const auto &[tag, n] : kNames) {
        if (name == n) return tag;
    }
    return std::nullopt;
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path &base) {
    Manifest m;
    m.base = base;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream words(line);
        Entry e;
        e.line = lineno;
        if (!(words >> e.path)) continue;
        std::string w;
        while (words >> w) {
            auto tag = tag_from_name(w);
            if (!tag) throw SyntaxError("unknown tag '" + w + "' on manifest line " + std::to_string(lineno),
                                        line_start + line.find(w));
            if (needs_proof(*tag) && !is_proof_path(e.path)) {
                throw SyntaxError("tag '" + w + "' needs a proof file on manifest line " + std::to_string(lineno),
                                  line_start + line.find(w));
            }
            e.tags.push_back(*tag);
        }
        if (e.tags.empty()) {
            throw SyntaxError("no tags on manifest line " + std::to_string(lineno), line_start);
        }
        if (!std::filesystem::exists(base / e.path)) {
            fail(ErrorKind::Io, "manifest line " + std::to_string(lineno) + ": no such file " + e.path);
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

Manifest read_manifest(const std::filesystem::path &file) {
    return parse_manifest(slurp(file), file.parent_path());
}

bool ItemResult::pass() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const TagOutcome &o) { return o.pass; });
}

std::size_t Report::failures() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const ItemResult &r) {
        return !r.pass();
    }));
}

std::string Report::text() const {
    std::ostringstream out;
    for (const auto &it : items) {
        out << "item=" << it.path << " result=" << (it.pass() ? "pass" : "fail") << '\n';
        for (const auto &o : it.outcomes) {
            if (!o.pass) out << "failure=" << it.path << " tag=" << to_string(o.tag) << " detail=" << quoted(o.detail) << '\n';
        }
    }
    out << "fixtures=" << items.size() << " passed=" << items.size() - failures() << " failed=" << failures() << '\n';
    return out.str();
}

Report run_corpus(const Manifest &m, const Settings &settings) {
    Report rep;
    rep.items.resize(m.entries.size());
    unsigned threads = settings.threads ? settings.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, m.entries.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < m.entries.size(); i = next++) {
            rep.items[i] = run_item(m, m.entries[i], settings);
        }
    };
    if (threads <= 1) {
        worker();
        return rep;
    }
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    pool.clear();
    return rep;
}

} // namespace llw::corpus
