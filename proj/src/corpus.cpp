// corpus.cpp -- tokenization, unigram counting, and Witten-Bell smoothing.

#include "vocabselect/corpus.hpp"

#include <algorithm>
#include <numeric>

#include "vocabselect/errors.hpp"

namespace vocabselect {

namespace {

bool is_ascii_space(unsigned char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Returns the length of the UTF-8 sequence starting at text[pos], or 0 if
// the sequence is malformed (bad lead byte, truncated or out-of-range
// continuation, overlong form, surrogate).
std::size_t utf8_sequence_length(std::string_view text, std::size_t pos)
{
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    const unsigned char lead = byte(pos);
    if (lead < 0x80)
        return 1;

    std::size_t len;
    unsigned char lo = 0x80, hi = 0xBF; // allowed range of the second byte
    if (lead >= 0xC2 && lead <= 0xDF) {
        len = 2;
    } else if (lead >= 0xE0 && lead <= 0xEF) {
        len = 3;
        if (lead == 0xE0)
            lo = 0xA0;
        else if (lead == 0xED)
            hi = 0x9F;
    } else if (lead >= 0xF0 && lead <= 0xF4) {
        len = 4;
        if (lead == 0xF0)
            lo = 0x90;
        else if (lead == 0xF4)
            hi = 0x8F;
    } else {
        return 0;
    }

    if (pos + len > text.size())
        return 0;
    if (byte(pos + 1) < lo || byte(pos + 1) > hi)
        return 0;
    for (std::size_t k = 2; k < len; ++k)
        if (byte(pos + k) < 0x80 || byte(pos + k) > 0xBF)
            return 0;
    return len;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizeOptions &options)
{
    std::vector<std::string> tokens;
    std::string current;
    const auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (is_ascii_space(c)) {
                flush();
            } else if (options.fold_case && c >= 'A' && c <= 'Z') {
                current.push_back(static_cast<char>(c - 'A' + 'a'));
            } else {
                current.push_back(static_cast<char>(c));
            }
            ++i;
            continue;
        }
        const std::size_t len = utf8_sequence_length(text, i);
        if (len == 0)
            throw ConfigError("invalid UTF-8 sequence at byte offset " + std::to_string(i));
        current.append(text.substr(i, len));
        i += len;
    }
    flush();
    return tokens;
}

double CorpusProfile::normalized_count(const std::string &word) const
{
    const auto it = raw_counts.find(word);
    if (it == raw_counts.end() || token_count == 0)
        return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(token_count);
}

std::map<std::string, double> CorpusProfile::normalized_counts() const
{
    std::map<std::string, double> result;
    if (token_count == 0)
        return result;
    for (const auto &[word, count] : raw_counts)
        result.emplace(word, static_cast<double>(count) / static_cast<double>(token_count));
    return result;
}

void CorpusProfile::add_token(const std::string &token)
{
    ++raw_counts[token];
    ++token_count;
}

void CorpusProfile::merge(const CorpusProfile &other)
{
    for (const auto &[word, count] : other.raw_counts)
        raw_counts[word] += count;
    token_count += other.token_count;
}

CorpusProfile count_tokens(std::span<const std::string> tokens, std::string corpus_id)
{
    CorpusProfile profile;
    profile.corpus_id = std::move(corpus_id);
    for (const auto &token : tokens)
        profile.add_token(token);
    return profile;
}

CorpusProfile merge_profiles(std::span<const CorpusProfile> parts, std::string corpus_id)
{
    CorpusProfile profile;
    profile.corpus_id = std::move(corpus_id);
    for (const auto &part : parts)
        profile.merge(part);
    return profile;
}

std::shared_ptr<const GlobalVocabulary>
GlobalVocabulary::build(std::span<const CorpusProfile> corpora, const CorpusProfile *extra)
{
    auto vocab = std::make_shared<GlobalVocabulary>();
    std::size_t total = 0;
    for (const auto &corpus : corpora)
        total += corpus.type_count();
    if (extra != nullptr)
        total += extra->type_count();
    vocab->words_.reserve(total);

    for (const auto &corpus : corpora)
        for (const auto &[word, count] : corpus.raw_counts)
            vocab->words_.push_back(word);
    if (extra != nullptr)
        for (const auto &[word, count] : extra->raw_counts)
            vocab->words_.push_back(word);

    std::sort(vocab->words_.begin(), vocab->words_.end());
    vocab->words_.erase(std::unique(vocab->words_.begin(), vocab->words_.end()),
                        vocab->words_.end());
    return vocab;
}

std::optional<std::uint32_t> GlobalVocabulary::id_of(std::string_view word) const
{
    const auto it = std::lower_bound(words_.begin(), words_.end(), word);
    if (it == words_.end() || *it != word)
        return std::nullopt;
    return static_cast<std::uint32_t>(it - words_.begin());
}

double SmoothedDistribution::probability(std::string_view word) const
{
    const auto id = vocab->id_of(word);
    if (!id)
        throw EstimationError("word '" + std::string(word) + "' is not in the vocabulary of corpus '" +
                              corpus_id + "'");
    return probabilities[*id];
}

SmoothedDistribution smooth(const CorpusProfile &profile,
                            std::shared_ptr<const GlobalVocabulary> vocab)
{
    if (profile.token_count == 0)
        throw EstimationError("cannot smooth empty corpus '" + profile.corpus_id + "'");

    // reduce counts to lowest terms: smoothing depends only on count ratios
    std::uint64_t g = 0;
    for (const auto &[word, count] : profile.raw_counts)
        g = std::gcd(g, count);

    const double types = static_cast<double>(profile.type_count());
    const double tokens = static_cast<double>(profile.token_count / g);
    const std::size_t vocab_size = vocab->size();
    if (vocab_size < profile.type_count())
        throw EstimationError("vocabulary smaller than corpus '" + profile.corpus_id + "'");
    const std::size_t unseen = vocab_size - profile.type_count();

    SmoothedDistribution dist;
    dist.corpus_id = profile.corpus_id;
    dist.vocab = std::move(vocab);

    if (unseen == 0) {
        // nothing to reserve mass for; the distribution is just the
        // normalized counts
        dist.probabilities.assign(vocab_size, 0.0);
        for (const auto &[word, count] : profile.raw_counts) {
            const auto id = dist.vocab->id_of(word);
            if (!id)
                throw EstimationError("word '" + word + "' of corpus '" + profile.corpus_id +
                                      "' missing from the global vocabulary");
            dist.probabilities[*id] =
                static_cast<double>(count / g) / tokens;
        }
        return dist;
    }

    const double denom = tokens + types;
    const double unseen_each = (types / denom) / static_cast<double>(unseen);
    dist.probabilities.assign(vocab_size, unseen_each);
    for (const auto &[word, count] : profile.raw_counts) {
        const auto id = dist.vocab->id_of(word);
        if (!id)
            throw EstimationError("word '" + word + "' of corpus '" + profile.corpus_id +
                                  "' missing from the global vocabulary");
        dist.probabilities[*id] = static_cast<double>(count / g) / denom;
    }
    return dist;
}

std::vector<double> dense_normalized_counts(const CorpusProfile &profile,
                                            const GlobalVocabulary &vocab)
{
    std::vector<double> dense(vocab.size(), 0.0);
    if (profile.token_count == 0)
        return dense;
    for (const auto &[word, count] : profile.raw_counts) {
        const auto id = vocab.id_of(word);
        if (!id)
            throw EstimationError("word '" + word + "' of corpus '" + profile.corpus_id +
                                  "' missing from the global vocabulary");
        dense[*id] = static_cast<double>(count) / static_cast<double>(profile.token_count);
    }
    return dense;
}

} // namespace vocabselect
