// OOV rates, curves, and cross-validation.

#include <doctest.h>

#include <random>

#include "vocabselect/errors.hpp"
#include "vocabselect/eval.hpp"

#include "testutil.hpp"

using namespace vocabselect;

namespace {

CorpusProfile profile_from(std::initializer_list<std::pair<const char *, std::uint64_t>> counts,
                           std::string id = "c")
{
    CorpusProfile profile;
    profile.corpus_id = std::move(id);
    for (const auto &[word, count] : counts) {
        profile.raw_counts[word] = count;
        profile.token_count += count;
    }
    return profile;
}

MixtureWeights weights_of(std::vector<double> lambdas)
{
    MixtureWeights weights;
    weights.lambdas = std::move(lambdas);
    return weights;
}

RankedVocabulary ranking_of(std::initializer_list<const char *> words)
{
    RankedVocabulary ranked;
    double score = 1.0;
    for (const char *word : words) {
        ranked.entries.emplace_back(word, score);
        score /= 2.0;
    }
    return ranked;
}

} // namespace

TEST_CASE("oov_rate counts test tokens outside the vocabulary")
{
    const CorpusProfile test = profile_from({{"a", 1}, {"b", 1}, {"c", 2}}, "test");
    CHECK(oov_rate({"a", "b"}, test) == 0.5);
    CHECK(oov_rate({"a", "b", "c", "zzz"}, test) == 0.0);

    const CorpusProfile bbb = profile_from({{"b", 3}}, "test");
    CHECK(oov_rate({"a"}, bbb) == 1.0);

    const CorpusProfile empty = count_tokens({}, "empty");
    CHECK_THROWS_AS(oov_rate({"a"}, empty), EstimationError);
}

TEST_CASE("curves evaluate one truncation per size")
{
    const RankedVocabulary ranked = ranking_of({"a", "b", "c"});
    const CorpusProfile test = profile_from({{"a", 1}, {"b", 1}, {"c", 1}}, "test");
    const std::vector<std::uint64_t> sizes{1, 2, 3};
    const OovCurve curve = oov_curve(ranked, test, sizes);
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0].second == doctest::Approx(2.0 / 3.0));
    CHECK(curve.points[1].second == doctest::Approx(1.0 / 3.0));
    CHECK(curve.points[2].second == 0.0);

    // beyond the ranking size the rate is the never-seen fraction
    const CorpusProfile wider = profile_from({{"a", 1}, {"zzz", 3}}, "test");
    const std::vector<std::uint64_t> big{100};
    const OovCurve limit = oov_curve(ranked, wider, big);
    CHECK(limit.points[0].second == 0.75);

    const std::vector<std::uint64_t> one{1};
    CHECK(oov_curve(ranked, test, one).points[0].second == doctest::Approx(2.0 / 3.0));

    const std::vector<std::uint64_t> bad{3, 2};
    CHECK_THROWS_AS(oov_curve(ranked, test, bad), ConfigError);
}

TEST_CASE("curve equals truncate + oov_rate at every size")
{
    std::mt19937_64 rng(59);
    const auto pool = testutil::word_pool(40);
    for (int round = 0; round < 25; ++round) {
        std::vector<CorpusProfile> train{
            testutil::random_profile(rng, pool, 25, 9, "t0"),
            testutil::random_profile(rng, pool, 25, 9, "t1"),
        };
        const RankedVocabulary ranked = score_and_rank(train, weights_of({0.4, 0.6}));
        const CorpusProfile test = testutil::random_profile(rng, pool, 20, 9, "test");

        std::vector<std::uint64_t> sizes;
        for (std::uint64_t k = 1; k <= ranked.size() + 2; k += 2)
            sizes.push_back(k);
        const OovCurve curve = oov_curve(ranked, test, sizes);

        REQUIRE(curve.points.size() == sizes.size());
        for (std::size_t p = 0; p < sizes.size(); ++p) {
            const double direct = oov_rate(truncate(ranked, sizes[p]), test);
            CHECK(curve.points[p].second == direct); // same integer arithmetic
        }
        for (std::size_t p = 1; p < curve.points.size(); ++p)
            CHECK(curve.points[p].second <= curve.points[p - 1].second);
    }
}

TEST_CASE("nested vocabularies never increase the OOV rate")
{
    std::mt19937_64 rng(61);
    const auto pool = testutil::word_pool(30);
    for (int round = 0; round < 25; ++round) {
        std::vector<CorpusProfile> train{testutil::random_profile(rng, pool, 25, 9, "t0")};
        const RankedVocabulary ranked = score_and_rank(train, weights_of({1.0}));
        const CorpusProfile test = testutil::random_profile(rng, pool, 20, 9, "test");
        for (std::size_t k = 1; k < ranked.size(); ++k)
            CHECK(oov_rate(truncate(ranked, k), test) >=
                  oov_rate(truncate(ranked, k + 1), test));
    }
}

TEST_CASE("split plans rotate the test segment")
{
    const std::vector<CorpusProfile> segments{
        profile_from({{"a", 1}}, "s1"),
        profile_from({{"b", 1}}, "s2"),
        profile_from({{"c", 1}}, "s3"),
    };
    const SplitPlan plan = make_split_plan(segments);
    REQUIRE(plan.folds.size() == 3);
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        CHECK(plan.folds[f].test == f);
        CHECK(plan.folds[f].dev.size() == 2);
        for (const std::size_t d : plan.folds[f].dev)
            CHECK(d != f);
    }

    const std::vector<CorpusProfile> lone{segments[0]};
    CHECK_THROWS_AS(make_split_plan(lone), ConfigError);
}

TEST_CASE("cross-validation over identical segments matches a single fold")
{
    const CorpusProfile train = profile_from({{"a", 3}, {"b", 1}}, "t");
    const CorpusProfile segment = profile_from({{"a", 2}, {"b", 2}}, "s");
    std::vector<CorpusProfile> segments{segment, segment};
    segments[0].corpus_id = "s1";
    segments[1].corpus_id = "s2";

    EstimatorSpec spec;
    spec.method = Method::kMaxLikelihood;
    const std::vector<std::uint64_t> sizes{1, 2};
    const std::vector<CorpusProfile> train_list{train};
    const CrossValidationResult cv = cross_validate(train_list, segments, spec, sizes);

    REQUIRE(cv.folds.size() == 2);
    CHECK(cv.folds[0].weights.lambdas == cv.folds[1].weights.lambdas);
    CHECK(cv.folds[0].curve.points == cv.folds[1].curve.points);
    CHECK(cv.averaged.points == cv.folds[0].curve.points);
    CHECK(cv.averaged.split_count == 2);
    CHECK(cv.mean_lambdas == std::vector<double>{1.0});
}

TEST_CASE("uniform cross-validation returns 1/m everywhere")
{
    std::mt19937_64 rng(67);
    const auto pool = testutil::word_pool(25);
    std::vector<CorpusProfile> train{
        testutil::random_profile(rng, pool, 18, 9, "t0"),
        testutil::random_profile(rng, pool, 18, 9, "t1"),
    };
    std::vector<CorpusProfile> segments;
    for (int s = 0; s < 3; ++s)
        segments.push_back(testutil::random_profile(rng, pool, 12, 9, "s" + std::to_string(s)));

    EstimatorSpec spec;
    spec.method = Method::kUniform;
    const std::vector<std::uint64_t> sizes{1, 4, 9};
    const CrossValidationResult cv = cross_validate(train, segments, spec, sizes);
    for (const auto &fold : cv.folds)
        CHECK(fold.weights.lambdas == std::vector<double>{0.5, 0.5});
    CHECK(cv.mean_lambdas == std::vector<double>{0.5, 0.5});
}

TEST_CASE("averaged rates stay within the per-fold envelope")
{
    std::mt19937_64 rng(71);
    const auto pool = testutil::word_pool(30);
    std::vector<CorpusProfile> train{
        testutil::random_profile(rng, pool, 22, 9, "t0"),
        testutil::random_profile(rng, pool, 22, 9, "t1"),
    };
    std::vector<CorpusProfile> segments;
    for (int s = 0; s < 4; ++s)
        segments.push_back(testutil::random_profile(rng, pool, 15, 9, "s" + std::to_string(s)));

    EstimatorSpec spec;
    spec.method = Method::kEuclidean;
    const std::vector<std::uint64_t> sizes{1, 3, 7, 15};
    const CrossValidationResult cv = cross_validate(train, segments, spec, sizes);

    for (std::size_t p = 0; p < sizes.size(); ++p) {
        double lo = 1.0, hi = 0.0;
        for (const auto &fold : cv.folds) {
            lo = std::min(lo, fold.curve.points[p].second);
            hi = std::max(hi, fold.curve.points[p].second);
        }
        CHECK(cv.averaged.points[p].second >= lo - 1e-15);
        CHECK(cv.averaged.points[p].second <= hi + 1e-15);
    }

    // per-fold curves are monotone, so the average is too
    for (std::size_t p = 1; p < cv.averaged.points.size(); ++p)
        CHECK(cv.averaged.points[p].second <= cv.averaged.points[p - 1].second);
}

TEST_CASE("all methods agree exactly at the full union size")
{
    std::mt19937_64 rng(73);
    const auto pool = testutil::word_pool(30);
    for (int round = 0; round < 10; ++round) {
        std::vector<CorpusProfile> train{
            testutil::random_profile(rng, pool, 20, 9, "t0"),
            testutil::random_profile(rng, pool, 20, 9, "t1"),
        };
        std::vector<CorpusProfile> segments;
        for (int s = 0; s < 2; ++s)
            segments.push_back(
                testutil::random_profile(rng, pool, 12, 9, "s" + std::to_string(s)));

        const std::uint64_t union_size = GlobalVocabulary::build(train)->size();
        const std::vector<std::uint64_t> sizes{union_size};

        std::vector<double> final_rates;
        for (const Method method :
             {Method::kMaxLikelihood, Method::kEuclidean, Method::kKl, Method::kUniform}) {
            EstimatorSpec spec;
            spec.method = method;
            const CrossValidationResult cv = cross_validate(train, segments, spec, sizes);
            final_rates.push_back(cv.averaged.points.back().second);
        }
        for (const double rate : final_rates)
            CHECK(rate == final_rates.front()); // exact
    }
}

TEST_CASE("log size grids are increasing, deduplicated, and pinned at the ends")
{
    const auto grid = log_size_grid(1, 90000, 51);
    CHECK(grid.front() == 1);
    CHECK(grid.back() == 90000);
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] > grid[i - 1]);
    CHECK(grid.size() <= 51);

    CHECK(log_size_grid(5, 5, 10) == std::vector<std::uint64_t>{5});
    CHECK(log_size_grid(1, 7, 1) == std::vector<std::uint64_t>{7});
    CHECK_THROWS_AS(log_size_grid(0, 5, 3), ConfigError);
    CHECK_THROWS_AS(log_size_grid(9, 5, 3), ConfigError);
}
