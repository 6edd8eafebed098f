#pragma once

#include <string>
#include <vector>

#include "ivlab/body.hpp"
#include "ivlab/check.hpp"
#include "ivlab/sequence.hpp"

namespace ivlab {

struct CorpusEntry {
    std::string text;
    Body body;
};

// Points, unit and scaled cubes, anisotropic boxes, balls of several radii,
// a mixed product and a degenerate embedding.
std::vector<CorpusEntry> builtin_corpus();

// Every exact invariant of one sequence: normalization, ULC, Chevet-McMullen,
// quermassintegral log-concavity, generating-function identities, the
// concentration identities and bounds, tail bounds on the default grid, and
// the maximum-entropy comparison.
std::vector<Check> exact_checks(const IVSequence& a);

}  // namespace ivlab
