#ifndef PONPLACE_CORPUS_HPP
#define PONPLACE_CORPUS_HPP

#include <string>
#include <vector>

#include "ponplace/types.hpp"

namespace ponplace {

struct CorpusResult {
    std::string name;
    bool pass = false;
    std::string diff;  // empty on pass
};

/// Runs the exhaustive oracle and branch-and-bound on every
/// corpus/<name>/instance.json and compares against expected.json exactly.
std::vector<CorpusResult> run_corpus(const std::string& corpus_dir,
                                     std::uint64_t enumeration_cap = 10'000'000);

/// expected.json content for an instance, regenerated from the oracle.
std::string regenerate_expected(const Instance& inst,
                                std::uint64_t enumeration_cap = 10'000'000);

}  // namespace ponplace

#endif
