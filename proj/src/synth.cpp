// synth.cpp -- seeded Zipfian corpus generation.

#include "vocabselect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "vocabselect/errors.hpp"

namespace vocabselect {

namespace {

// uniform double in [0, 1) from the raw engine output; kept explicit so the
// streams do not depend on implementation-defined library distributions
double next_unit(std::mt19937_64 &engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// cumulative Zipf law over ranks 1..size: P(rank r) proportional to r^-s
std::vector<double> zipf_cdf(std::uint32_t size, double exponent)
{
    std::vector<double> cdf(size);
    double total = 0.0;
    for (std::uint32_t r = 0; r < size; ++r) {
        total += std::pow(static_cast<double>(r + 1), -exponent);
        cdf[r] = total;
    }
    for (double &c : cdf)
        c /= total;
    cdf.back() = 1.0;
    return cdf;
}

std::uint32_t sample_cdf(const std::vector<double> &cdf, double u)
{
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(
        it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

std::string make_word(const std::string &prefix, std::uint32_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%06u", prefix.c_str(), index);
    return buf;
}

void validate(const SynthSpec &spec)
{
    if (spec.components.empty())
        throw ConfigError("synthetic spec names no corpora");
    for (const auto &component : spec.components) {
        if (component.vocab_size == 0)
            throw ConfigError("corpus '" + component.name + "' has vocabulary size 0");
        if (component.tokens == 0)
            throw ConfigError("corpus '" + component.name + "' has token count 0");
        if (!(component.zipf_exponent > 0.0))
            throw ConfigError("corpus '" + component.name + "' needs a positive Zipf exponent");
    }
    if (spec.overlap < 0.0 || spec.overlap > 1.0)
        throw ConfigError("vocabulary overlap must lie in [0, 1]");
    if (spec.mixture.size() != spec.components.size())
        throw ConfigError("mixture has " + std::to_string(spec.mixture.size()) +
                          " entries for " + std::to_string(spec.components.size()) + " corpora");
    double total = 0.0;
    for (const double weight : spec.mixture) {
        if (weight < 0.0)
            throw ConfigError("mixture weights must be nonnegative");
        total += weight;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw ConfigError("mixture weights must sum to 1");
    if (spec.segments == 0)
        throw ConfigError("need at least one held-out segment");
    if (spec.segment_tokens == 0)
        throw ConfigError("held-out segments need a positive token count");
}

} // namespace

SynthResult generate_corpora(const SynthSpec &spec)
{
    validate(spec);
    const std::size_t m = spec.components.size();

    std::uint32_t min_vocab = spec.components[0].vocab_size;
    for (const auto &component : spec.components)
        min_vocab = std::min(min_vocab, component.vocab_size);
    const auto shared_count =
        static_cast<std::uint32_t>(std::llround(spec.overlap * static_cast<double>(min_vocab)));

    // Each corpus draws from shared words plus its own block, shuffled with
    // a per-corpus engine so the Zipf ranks of the shared words differ
    // between corpora.
    std::vector<std::vector<std::string>> corpus_words(m);
    std::vector<std::vector<double>> corpus_cdf(m);
    for (std::size_t j = 0; j < m; ++j) {
        const auto &component = spec.components[j];
        auto &words = corpus_words[j];
        words.reserve(component.vocab_size);
        for (std::uint32_t k = 0; k < shared_count && k < component.vocab_size; ++k)
            words.push_back(make_word("shared", k));
        for (std::uint32_t k = static_cast<std::uint32_t>(words.size());
             k < component.vocab_size; ++k)
            words.push_back(make_word(component.name + "_", k));

        std::mt19937_64 engine = make_engine(spec.seed, j);
        for (std::size_t k = words.size(); k > 1; --k) {
            const auto pick = static_cast<std::size_t>(next_unit(engine) * static_cast<double>(k));
            std::swap(words[k - 1], words[std::min(pick, k - 1)]);
        }
        corpus_cdf[j] = zipf_cdf(component.vocab_size, component.zipf_exponent);
    }

    SynthResult result;
    result.component_names.reserve(m);
    result.component_tokens.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        result.component_names.push_back(spec.components[j].name);
        std::mt19937_64 engine = make_engine(spec.seed, 1000 + j);
        auto &tokens = result.component_tokens[j];
        tokens.reserve(spec.components[j].tokens);
        for (std::uint64_t t = 0; t < spec.components[j].tokens; ++t)
            tokens.push_back(corpus_words[j][sample_cdf(corpus_cdf[j], next_unit(engine))]);
    }

    std::vector<double> mixture_cdf(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        acc += spec.mixture[j];
        mixture_cdf[j] = acc;
    }
    mixture_cdf.back() = 1.0;

    result.segment_tokens.resize(spec.segments);
    for (std::size_t s = 0; s < spec.segments; ++s) {
        std::mt19937_64 engine = make_engine(spec.seed, 2000 + s);
        auto &tokens = result.segment_tokens[s];
        tokens.reserve(spec.segment_tokens);
        for (std::uint64_t t = 0; t < spec.segment_tokens; ++t) {
            const auto component = static_cast<std::size_t>(std::upper_bound(
                                       mixture_cdf.begin(), mixture_cdf.end(),
                                       next_unit(engine)) -
                                   mixture_cdf.begin());
            const std::size_t j = std::min(component, m - 1);
            tokens.push_back(corpus_words[j][sample_cdf(corpus_cdf[j], next_unit(engine))]);
        }
    }
    return result;
}

} // namespace vocabselect
