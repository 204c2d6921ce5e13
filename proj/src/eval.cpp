// eval.cpp -- OOV rates, curves, and the cross-validation harness.

#include "vocabselect/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "vocabselect/errors.hpp"

namespace vocabselect {

namespace {

void check_sizes(std::span<const std::uint64_t> sizes)
{
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0)
            throw ConfigError("vocabulary size must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw ConfigError("vocabulary sizes must be strictly increasing");
    }
}

} // namespace

double oov_rate(const std::unordered_set<std::string> &vocab, const CorpusProfile &test)
{
    if (test.token_count == 0)
        throw EstimationError("empty test corpus '" + test.corpus_id + "'");
    std::uint64_t oov_tokens = 0;
    for (const auto &[word, count] : test.raw_counts)
        if (!vocab.contains(word))
            oov_tokens += count;
    return static_cast<double>(oov_tokens) / static_cast<double>(test.token_count);
}

OovCurve oov_curve(const RankedVocabulary &ranked, const CorpusProfile &test,
                   std::span<const std::uint64_t> sizes)
{
    if (test.token_count == 0)
        throw EstimationError("empty test corpus '" + test.corpus_id + "'");
    check_sizes(sizes);

    std::unordered_map<std::string_view, std::uint64_t> position;
    position.reserve(ranked.entries.size());
    for (std::size_t i = 0; i < ranked.entries.size(); ++i)
        position.emplace(ranked.entries[i].first, static_cast<std::uint64_t>(i));

    // test mass sorted by rank position; covered(k) is then a prefix sum
    std::vector<std::pair<std::uint64_t, std::uint64_t>> mass; // (position, count)
    mass.reserve(test.type_count());
    for (const auto &[word, count] : test.raw_counts) {
        const auto it = position.find(word);
        if (it != position.end())
            mass.emplace_back(it->second, count);
    }
    std::sort(mass.begin(), mass.end());

    std::vector<std::uint64_t> covered_prefix(mass.size() + 1, 0);
    for (std::size_t i = 0; i < mass.size(); ++i)
        covered_prefix[i + 1] = covered_prefix[i] + mass[i].second;

    OovCurve curve;
    curve.points.reserve(sizes.size());
    for (const std::uint64_t size : sizes) {
        const auto it = std::upper_bound(
            mass.begin(), mass.end(), size,
            [](std::uint64_t k, const auto &entry) { return k <= entry.first; });
        const std::uint64_t covered = covered_prefix[static_cast<std::size_t>(it - mass.begin())];
        const std::uint64_t oov_tokens = test.token_count - covered;
        curve.points.emplace_back(
            size, static_cast<double>(oov_tokens) / static_cast<double>(test.token_count));
    }
    return curve;
}

SplitPlan make_split_plan(std::span<const CorpusProfile> segments)
{
    if (segments.size() < 2)
        throw ConfigError("cross-validation needs at least 2 held-out segments, got " +
                          std::to_string(segments.size()));
    SplitPlan plan;
    plan.segments.reserve(segments.size());
    for (const auto &segment : segments)
        plan.segments.push_back(segment.corpus_id);
    for (std::size_t t = 0; t < segments.size(); ++t) {
        SplitPlan::Fold fold;
        fold.test = t;
        for (std::size_t d = 0; d < segments.size(); ++d)
            if (d != t)
                fold.dev.push_back(d);
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

CrossValidationResult cross_validate(std::span<const CorpusProfile> train,
                                     std::span<const CorpusProfile> segments,
                                     const EstimatorSpec &spec,
                                     std::span<const std::uint64_t> sizes)
{
    const SplitPlan plan = make_split_plan(segments);
    check_sizes(sizes);
    for (const auto &segment : segments)
        if (segment.token_count == 0)
            throw EstimationError("empty held-out segment '" + segment.corpus_id + "'");

    CrossValidationResult result;
    result.mean_lambdas.assign(train.size(), 0.0);

    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto &fold = plan.folds[f];
        std::vector<CorpusProfile> dev_parts;
        dev_parts.reserve(fold.dev.size());
        for (const std::size_t d : fold.dev)
            dev_parts.push_back(segments[d]);
        const CorpusProfile dev = merge_profiles(dev_parts, "dev");

        FoldResult fold_result;
        fold_result.test_index = fold.test;
        fold_result.test_segment = plan.segments[fold.test];
        try {
            fold_result.weights = estimate_weights(train, dev, spec);
        } catch (const EstimationError &e) {
            throw EstimationError("fold " + std::to_string(f + 1) + " (test segment '" +
                                  plan.segments[fold.test] + "'): " + e.what());
        }

        const RankedVocabulary ranked = score_and_rank(train, fold_result.weights);
        fold_result.curve = oov_curve(ranked, segments[fold.test], sizes);
        result.folds.push_back(std::move(fold_result));
    }

    const double fold_count = static_cast<double>(result.folds.size());
    result.averaged.split_count = static_cast<int>(result.folds.size());
    result.averaged.points.reserve(sizes.size());
    for (std::size_t p = 0; p < sizes.size(); ++p) {
        double sum = 0.0;
        for (const auto &fold : result.folds)
            sum += fold.curve.points[p].second;
        result.averaged.points.emplace_back(sizes[p], sum / fold_count);
    }

    for (const auto &fold : result.folds)
        for (std::size_t j = 0; j < train.size(); ++j)
            result.mean_lambdas[j] += fold.weights.lambdas[j] / fold_count;

    if (!result.folds.empty() && result.folds.front().weights.distances) {
        std::vector<double> mean_distances(train.size(), 0.0);
        for (const auto &fold : result.folds)
            for (std::size_t j = 0; j < train.size(); ++j)
                mean_distances[j] += (*fold.weights.distances)[j] / fold_count;
        result.mean_distances = std::move(mean_distances);
    }
    return result;
}

std::vector<std::uint64_t> log_size_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points)
{
    if (lo == 0)
        throw ConfigError("vocabulary size must be positive");
    if (hi < lo)
        throw ConfigError("size grid upper bound below lower bound");
    if (points == 0)
        throw ConfigError("size grid needs at least one point");
    if (points == 1 || lo == hi)
        return {hi};

    std::vector<std::uint64_t> sizes;
    sizes.reserve(points);
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi));
    for (std::size_t k = 0; k < points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(points - 1);
        const double value = std::exp(log_lo + t * (log_hi - log_lo));
        const auto size = static_cast<std::uint64_t>(std::llround(value));
        sizes.push_back(std::clamp(size, lo, hi));
    }
    sizes.front() = lo;
    sizes.back() = hi;
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    return sizes;
}

} // namespace vocabselect
