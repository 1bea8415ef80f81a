#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace llw::corpus {

enum class Tag { CheckOk, Provable, NotProvable, CutfreeAfter, ValidAllModels, InvariantInterp };

const char *to_string(Tag t);
std::optional<Tag> tag_from_name(std::string_view name);

struct Entry {
    std::string path;        // as written in the manifest
    std::vector<Tag> tags;
    std::size_t line = 0;
};

// One entry per line: "<path> <tag> [<tag>...]", '#' comments. Paths are
// relative to the manifest's directory. A `.llp` file holds a proof, anything
// else a single sequent; proof-only tags on a sequent file are rejected.
struct Manifest {
    std::filesystem::path base;
    std::vector<Entry> entries;
};

// Throws SyntaxError for bad lines or unknown tags and Error(Io) for missing
// fixture files.
Manifest parse_manifest(std::string_view text, const std::filesystem::path &base);
Manifest read_manifest(const std::filesystem::path &file);

struct Settings {
    std::size_t fuel = 100'000;
    std::size_t models = 100;        // for valid-all-models
    std::size_t envs = 3;            // for invariant-interp
    unsigned threads = 0;            // 0: one per hardware thread
};

struct TagOutcome {
    Tag tag = Tag::CheckOk;
    bool pass = false;
    std::string detail;
};

struct ItemResult {
    std::string path;
    std::vector<TagOutcome> outcomes;
    bool pass() const;
};

struct Report {
    std::vector<ItemResult> items;   // manifest order
    std::size_t failures() const;
    // key=value lines: one "item=" line per fixture then a summary.
    std::string text() const;
};

// Items run on a small thread pool; every item draws from its own seeded
// generator, so the report does not depend on scheduling.
Report run_corpus(const Manifest &m, const Settings &settings = {});

} // namespace llw::corpus
