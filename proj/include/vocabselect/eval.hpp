#pragma once

// eval.hpp -- OOV rates of truncated vocabularies, OOV-vs-size curves, and
// the leave-one-segment-out cross-validation harness.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vocabselect/corpus.hpp"
#include "vocabselect/vocab.hpp"
#include "vocabselect/weights.hpp"

namespace vocabselect {

struct OovCurve {
    // (vocabulary size, OOV rate), sizes strictly increasing
    std::vector<std::pair<std::uint64_t, double>> points;
    int split_count = 1;
};

// fraction of test tokens whose word is not in vocab
double oov_rate(const std::unordered_set<std::string> &vocab, const CorpusProfile &test);

// One point per requested size, equal to oov_rate(truncate(ranked, size), test).
// Computed incrementally from the test words' rank positions, so the whole
// curve costs one pass over the test types.
OovCurve oov_curve(const RankedVocabulary &ranked, const CorpusProfile &test,
                   std::span<const std::uint64_t> sizes);

// Leave-one-out fold assignments over named held-out segments.
struct SplitPlan {
    struct Fold {
        std::vector<std::size_t> dev;
        std::size_t test;
    };
    std::vector<std::string> segments;
    std::vector<Fold> folds;
};

SplitPlan make_split_plan(std::span<const CorpusProfile> segments);

struct FoldResult {
    std::size_t test_index;
    std::string test_segment;
    MixtureWeights weights;
    OovCurve curve;
};

struct CrossValidationResult {
    OovCurve averaged; // arithmetic mean of the per-fold rates at each size
    std::vector<FoldResult> folds;
    std::vector<double> mean_lambdas;
    std::optional<std::vector<double>> mean_distances;
};

// For each fold: pool the dev segments into one development profile,
// estimate weights, rank, and score the curve on the test segment.
CrossValidationResult cross_validate(std::span<const CorpusProfile> train,
                                     std::span<const CorpusProfile> segments,
                                     const EstimatorSpec &spec,
                                     std::span<const std::uint64_t> sizes);

// points logarithmically spaced over [lo, hi], deduplicated after rounding;
// always contains lo and hi
std::vector<std::uint64_t> log_size_grid(std::uint64_t lo, std::uint64_t hi,
                                         std::size_t points);

} // namespace vocabselect
