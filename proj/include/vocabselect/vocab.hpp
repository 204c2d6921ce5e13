#pragma once

// vocab.hpp -- interpolated word scores and the deterministically ranked
// candidate vocabulary.

#include <cstddef>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vocabselect/corpus.hpp"
#include "vocabselect/weights.hpp"

namespace vocabselect {

// Words ordered by interpolated score, non-increasing; ties broken
// lexicographically so the order is total.  Contains exactly the union of
// the training-corpus words.
struct RankedVocabulary {
    std::vector<std::pair<std::string, double>> entries;

    std::size_t size() const { return entries.size(); }
};

// score(w) = sum_j lambda_j * normalized_count_j(w), absent words
// contributing 0
RankedVocabulary score_and_rank(std::span<const CorpusProfile> train,
                                const MixtureWeights &weights);

// First min(size, |ranked|) words.  size must be positive.
std::unordered_set<std::string> truncate(const RankedVocabulary &ranked, std::size_t size);

} // namespace vocabselect
