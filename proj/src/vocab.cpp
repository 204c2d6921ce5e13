// vocab.cpp -- interpolated scoring and ranking.

#include "vocabselect/vocab.hpp"

#include <algorithm>
#include <map>

#include "vocabselect/errors.hpp"

namespace vocabselect {

RankedVocabulary score_and_rank(std::span<const CorpusProfile> train,
                                const MixtureWeights &weights)
{
    if (train.empty())
        throw EstimationError("no training corpora given");
    if (weights.lambdas.size() != train.size())
        throw EstimationError("weight vector has " + std::to_string(weights.lambdas.size()) +
                              " entries for " + std::to_string(train.size()) +
                              " training corpora");
    for (const auto &corpus : train)
        if (corpus.token_count == 0)
            throw EstimationError("empty training corpus '" + corpus.corpus_id + "'");

    // accumulate per word in corpus order; the map keeps words in
    // lexicographic order so the arithmetic is reproducible
    std::map<std::string, double> scores;
    for (std::size_t j = 0; j < train.size(); ++j) {
        const double lambda = weights.lambdas[j];
        const double total = static_cast<double>(train[j].token_count);
        for (const auto &[word, count] : train[j].raw_counts)
            scores[word] += lambda * (static_cast<double>(count) / total);
    }

    RankedVocabulary ranked;
    ranked.entries.reserve(scores.size());
    for (auto &[word, score] : scores)
        ranked.entries.emplace_back(word, score);
    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const auto &a, const auto &b) {
                  if (a.second != b.second)
                      return a.second > b.second;
                  return a.first < b.first;
              });
    return ranked;
}

std::unordered_set<std::string> truncate(const RankedVocabulary &ranked, std::size_t size)
{
    if (size == 0)
        throw ConfigError("vocabulary size must be positive");
    const std::size_t take = std::min(size, ranked.entries.size());
    std::unordered_set<std::string> words;
    words.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
        words.insert(ranked.entries[i].first);
    return words;
}

} // namespace vocabselect
