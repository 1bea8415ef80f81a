#pragma once

#include <string>
#include <vector>

#include "llw/proof.hpp"

namespace llw {

struct Fixture {
    std::string name;     // also the corpus file stem
    std::string summary;
    ProofPtr proof;
};

// Hand-built derivations: distributivity (both directions), the two
// inversion-by-cut derivations, digging, the !(a&b) isomorphism (both
// directions), functorial promotion, and the menu example.
std::vector<Fixture> standard_fixtures();

// Names of the five derivations that make up the fidelity check.
std::vector<std::string> core_fixture_names();

const Fixture &find_fixture(const std::vector<Fixture> &all, const std::string &name);

} // namespace llw
