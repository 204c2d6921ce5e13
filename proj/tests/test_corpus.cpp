// Counting, tokenization, vocabulary, and smoothing.

#include <doctest.h>

#include <algorithm>
#include <random>

#include "vocabselect/corpus.hpp"
#include "vocabselect/errors.hpp"

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

} // namespace

TEST_CASE("tokenize splits on whitespace and folds case")
{
    CHECK(tokenize("The cat\nsat") == std::vector<std::string>{"the", "cat", "sat"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("A a A", {.fold_case = false}) == std::vector<std::string>{"A", "a", "A"});
    CHECK(tokenize("A a A", {.fold_case = true}) == std::vector<std::string>{"a", "a", "a"});
    CHECK(tokenize("  \t\r\n ").empty());
    CHECK(tokenize("x") == std::vector<std::string>{"x"});
}

TEST_CASE("tokenize keeps multi-byte UTF-8 sequences intact")
{
    const auto tokens = tokenize("caf\xc3\xa9 NA\xc3\x8fVE");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == "caf\xc3\xa9");
    // ASCII letters fold, the non-ASCII code point passes through
    CHECK(tokens[1] == "na\xc3\x8fve");
}

TEST_CASE("tokenize reports the byte offset of invalid UTF-8")
{
    CHECK_THROWS_WITH_AS(tokenize("ab\xffz"), doctest::Contains("byte offset 2"), ConfigError);
    CHECK_THROWS_AS(tokenize("ok \xc3"), ConfigError);        // truncated sequence
    CHECK_THROWS_AS(tokenize("\xed\xa0\x80"), ConfigError);   // surrogate
    CHECK_THROWS_AS(tokenize("\xc0\xaf"), ConfigError);       // overlong lead
}

TEST_CASE("count tallies tokens and normalizes by length")
{
    const std::vector<std::string> tokens{"a", "a", "b"};
    const CorpusProfile profile = count_tokens(tokens, "toy");
    CHECK(profile.token_count == 3);
    CHECK(profile.type_count() == 2);
    CHECK(profile.raw_counts.at("a") == 2);
    CHECK(profile.raw_counts.at("b") == 1);
    CHECK(profile.normalized_count("a") == doctest::Approx(2.0 / 3.0));
    CHECK(profile.normalized_count("b") == doctest::Approx(1.0 / 3.0));
    CHECK(profile.normalized_count("zz") == 0.0);

    const CorpusProfile empty = count_tokens({}, "empty");
    CHECK(empty.token_count == 0);
    CHECK(empty.type_count() == 0);
    CHECK(empty.normalized_counts().empty());
}

TEST_CASE("count merge equals counting the concatenation")
{
    const std::vector<std::string> left{"a"};
    const std::vector<std::string> right{"a", "b"};
    std::vector<CorpusProfile> parts{count_tokens(left, "x"), count_tokens(right, "x")};
    const CorpusProfile merged = merge_profiles(parts, "x");

    const std::vector<std::string> all{"a", "a", "b"};
    const CorpusProfile direct = count_tokens(all, "x");
    CHECK(merged.raw_counts == direct.raw_counts);
    CHECK(merged.token_count == direct.token_count);
}

TEST_CASE("counting is order- and partition-independent")
{
    std::mt19937_64 rng(7);
    const auto pool = testutil::word_pool(20);
    for (int round = 0; round < 25; ++round) {
        std::vector<std::string> tokens;
        std::uniform_int_distribution<std::size_t> len(0, 60);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i)
            tokens.push_back(pool[pick(rng)]);

        const CorpusProfile direct = count_tokens(tokens, "p");

        std::vector<std::string> shuffled = tokens;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(count_tokens(shuffled, "p").raw_counts == direct.raw_counts);

        // random partition into shards
        std::vector<CorpusProfile> shards;
        std::size_t at = 0;
        while (at < tokens.size()) {
            std::uniform_int_distribution<std::size_t> width(1, tokens.size() - at);
            const std::size_t w = width(rng);
            shards.push_back(count_tokens({tokens.data() + at, w}, "p"));
            at += w;
        }
        const CorpusProfile merged = merge_profiles(shards, "p");
        CHECK(merged.raw_counts == direct.raw_counts);
        CHECK(merged.token_count == direct.token_count);
    }
}

TEST_CASE("global vocabulary is the sorted union over corpora")
{
    const CorpusProfile a = profile_from({{"b", 1}, {"d", 2}}, "a");
    const CorpusProfile b = profile_from({{"a", 1}, {"b", 3}}, "b");
    const CorpusProfile heldout = profile_from({{"e", 1}}, "h");
    const std::vector<CorpusProfile> corpora{a, b};
    const auto vocab = GlobalVocabulary::build(corpora, &heldout);
    CHECK(vocab->words() == std::vector<std::string>{"a", "b", "d", "e"});
    CHECK(vocab->id_of("a") == 0);
    CHECK(vocab->id_of("e") == 3);
    CHECK_FALSE(vocab->id_of("zz").has_value());
}

TEST_CASE("Witten-Bell smoothing spreads reserved mass over unseen words")
{
    const CorpusProfile profile = profile_from({{"a", 2}, {"b", 1}});
    const CorpusProfile cover = profile_from({{"a", 1}, {"b", 1}, {"c", 1}}, "v");
    const auto vocab = GlobalVocabulary::build({}, &cover);
    const SmoothedDistribution dist = smooth(profile, vocab);
    CHECK(dist.probability("a") == doctest::Approx(2.0 / 5.0).epsilon(1e-12));
    CHECK(dist.probability("b") == doctest::Approx(1.0 / 5.0).epsilon(1e-12));
    CHECK(dist.probability("c") == doctest::Approx(2.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("Witten-Bell smoothing with several unseen words")
{
    const CorpusProfile profile = profile_from({{"a", 3}, {"b", 1}});
    const CorpusProfile cover = profile_from({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}, "v");
    const auto vocab = GlobalVocabulary::build({}, &cover);
    const SmoothedDistribution dist = smooth(profile, vocab);
    CHECK(dist.probability("a") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist.probability("b") == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(dist.probability("c") == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(dist.probability("d") == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("smoothing a fully covered vocabulary renormalizes onto seen words")
{
    const CorpusProfile profile = profile_from({{"a", 1}});
    const auto vocab = GlobalVocabulary::build({}, &profile);
    const SmoothedDistribution dist = smooth(profile, vocab);
    CHECK(dist.probability("a") == 1.0);
}

TEST_CASE("smoothing rejects empty corpora and uncovered words")
{
    const CorpusProfile empty = count_tokens({}, "empty");
    const CorpusProfile cover = profile_from({{"a", 1}}, "v");
    const auto vocab = GlobalVocabulary::build({}, &cover);
    CHECK_THROWS_WITH_AS(smooth(empty, vocab), doctest::Contains("cannot smooth empty corpus"),
                         EstimationError);

    const CorpusProfile wide = profile_from({{"a", 1}, {"zz", 1}});
    CHECK_THROWS_WITH_AS(smooth(wide, vocab), doctest::Contains("zz"), EstimationError);
}

TEST_CASE("smoothed distributions are positive, normalized, and count-monotone")
{
    std::mt19937_64 rng(11);
    const auto pool = testutil::word_pool(40);
    for (int round = 0; round < 50; ++round) {
        const auto profile = testutil::random_profile(rng, pool, 25, 30, "p");
        const auto other = testutil::random_profile(rng, pool, 25, 30, "q");
        const std::vector<CorpusProfile> corpora{profile, other};
        const auto vocab = GlobalVocabulary::build(corpora);
        const SmoothedDistribution dist = smooth(profile, vocab);

        REQUIRE(dist.probabilities.size() == vocab->size());
        double sum = 0.0;
        for (const double p : dist.probabilities) {
            CHECK(p > 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

        for (const auto &[w1, c1] : profile.raw_counts)
            for (const auto &[w2, c2] : profile.raw_counts)
                if (c1 > c2)
                    CHECK(dist.probability(w1) > dist.probability(w2));
    }
}

TEST_CASE("duplicating every token k times changes nothing downstream")
{
    const CorpusProfile base = profile_from({{"a", 3}, {"b", 2}, {"c", 7}});
    CorpusProfile scaled = base;
    for (auto &[word, count] : scaled.raw_counts)
        count *= 10;
    scaled.token_count *= 10;

    CHECK(base.normalized_counts() == scaled.normalized_counts());

    const CorpusProfile cover = profile_from({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}}, "v");
    const auto vocab = GlobalVocabulary::build({}, &cover);
    const SmoothedDistribution dist_base = smooth(base, vocab);
    const SmoothedDistribution dist_scaled = smooth(scaled, vocab);
    CHECK(dist_base.probabilities == dist_scaled.probabilities); // bitwise
}
