#pragma once

// corpus.hpp -- unigram counting, the shared vocabulary, and Witten-Bell
// smoothed unigram distributions.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vocabselect {

struct TokenizeOptions {
    bool fold_case = true;
};

// Splits text into maximal runs of non-whitespace bytes.  Case folding
// lowercases ASCII letters only; multi-byte UTF-8 sequences pass through
// unchanged.  Throws ConfigError naming the byte offset of the first
// invalid UTF-8 sequence.
std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions &options = {});

// Per-corpus unigram counts.  raw_counts is keyed in lexicographic (byte)
// order, which for UTF-8 equals code-point order.
struct CorpusProfile {
    std::string corpus_id;
    std::uint64_t token_count = 0;
    std::map<std::string, std::uint64_t> raw_counts;

    std::size_t type_count() const { return raw_counts.size(); }

    // count / token_count, 0 for absent words
    double normalized_count(const std::string &word) const;
    std::map<std::string, double> normalized_counts() const;

    void add_token(const std::string &token);
    void merge(const CorpusProfile &other);
};

CorpusProfile count_tokens(std::span<const std::string> tokens, std::string corpus_id);
CorpusProfile merge_profiles(std::span<const CorpusProfile> parts, std::string corpus_id);

// Union of the word sets of all registered corpora, in lexicographic order,
// so word ids are reproducible across runs.
class GlobalVocabulary {
public:
    static std::shared_ptr<const GlobalVocabulary>
    build(std::span<const CorpusProfile> corpora, const CorpusProfile *extra = nullptr);

    std::size_t size() const { return words_.size(); }
    const std::vector<std::string> &words() const { return words_; }
    std::optional<std::uint32_t> id_of(std::string_view word) const;
    bool contains(std::string_view word) const { return id_of(word).has_value(); }

    friend bool operator==(const GlobalVocabulary &a, const GlobalVocabulary &b)
    {
        return a.words_ == b.words_;
    }

private:
    std::vector<std::string> words_;
};

// Witten-Bell smoothed unigram distribution over every word of a
// GlobalVocabulary.  All probabilities are strictly positive.
struct SmoothedDistribution {
    std::string corpus_id;
    std::shared_ptr<const GlobalVocabulary> vocab;
    std::vector<double> probabilities; // indexed by vocabulary word id

    double probability(std::string_view word) const;
};

// Seen words receive c(w)/(N+T) and the reserved mass T/(N+T) is spread
// uniformly over the vocabulary words unseen in this corpus.  When every
// vocabulary word is seen, the reserved mass is folded back onto the seen
// words proportionally, i.e. P(w) = c(w)/N.  Counts are first reduced by
// their common gcd so that the result depends only on count ratios; a
// corpus duplicated k times smooths identically to the original.
SmoothedDistribution smooth(const CorpusProfile &profile,
                            std::shared_ptr<const GlobalVocabulary> vocab);

// Normalized counts as a dense vector over vocab ids, 0 for unseen words.
// Every word of the profile must be covered by vocab.
std::vector<double> dense_normalized_counts(const CorpusProfile &profile,
                                            const GlobalVocabulary &vocab);

} // namespace vocabselect
