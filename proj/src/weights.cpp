// weights.cpp -- interpolation weight estimators.

#include "vocabselect/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vocabselect/errors.hpp"
#include "vocabselect/kernels.hpp"

namespace vocabselect {

namespace {

constexpr double kZeroDistance = 1e-12;

void require_nonempty(const CorpusProfile &profile, const char *role)
{
    if (profile.token_count == 0)
        throw EstimationError(std::string("empty ") + role + " corpus '" + profile.corpus_id + "'");
}

bool same_vocabulary(const SmoothedDistribution &a, const SmoothedDistribution &b)
{
    if (a.vocab == nullptr || b.vocab == nullptr)
        return false;
    return a.vocab == b.vocab || *a.vocab == *b.vocab;
}

// Dense view of the EM inputs over the held-out support, in the fixed
// lexicographic word order of the held-out profile.
struct EmInstance {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<double> probs;      // m x n row-major, P(w_i | j)
    std::vector<double> weight;     // C(w_i) / N
    std::vector<double> raw_counts; // C(w_i)
    double total = 0.0;             // N
};

EmInstance build_em_instance(std::span<const SmoothedDistribution> train,
                             const CorpusProfile &heldout)
{
    EmInstance inst;
    inst.m = train.size();
    inst.n = heldout.type_count();
    inst.total = static_cast<double>(heldout.token_count);
    inst.probs.resize(inst.m * inst.n);
    inst.weight.reserve(inst.n);
    inst.raw_counts.reserve(inst.n);

    const GlobalVocabulary &vocab = *train[0].vocab;
    std::size_t i = 0;
    for (const auto &[word, count] : heldout.raw_counts) {
        const auto id = vocab.id_of(word);
        if (!id)
            throw EstimationError("held-out word '" + word +
                                  "' is absent from the global vocabulary");
        for (std::size_t j = 0; j < inst.m; ++j)
            inst.probs[j * inst.n + i] = train[j].probabilities[*id];
        inst.raw_counts.push_back(static_cast<double>(count));
        inst.weight.push_back(static_cast<double>(count) /
                              static_cast<double>(heldout.token_count));
        ++i;
    }
    return inst;
}

} // namespace

MixtureWeights estimate_ml(std::span<const SmoothedDistribution> train,
                           const CorpusProfile &heldout, const EmConfig &config)
{
    if (train.empty())
        throw EstimationError("no training corpora given");
    require_nonempty(heldout, "held-out");
    if (config.convergence_threshold <= 0.0)
        throw EstimationError("convergence threshold must be positive");
    if (config.max_iterations < 1)
        throw EstimationError("max iterations must be at least 1");
    for (const auto &dist : train)
        if (!same_vocabulary(train.front(), dist))
            throw EstimationError("training distributions use different vocabularies");

    const EmInstance inst = build_em_instance(train, heldout);
    const std::size_t m = inst.m;

    MixtureWeights result;
    result.method = Method::kMaxLikelihood;
    result.lambdas.assign(m, 1.0 / static_cast<double>(m));

    // per-corpus held-out log-likelihood, fixed across iterations; only the
    // corpus-posterior rule needs it
    std::vector<double> corpus_ll(m, 0.0);
    if (config.update_rule == EmUpdateRule::kCorpusPosterior) {
        for (std::size_t j = 0; j < m; ++j) {
            const double *row = inst.probs.data() + j * inst.n;
            const double *counts = inst.raw_counts.data();
            corpus_ll[j] = kern::blocked_sum(
                inst.n, [row, counts](std::size_t i) { return counts[i] * std::log(row[i]); });
        }
    }

    std::vector<double> next(m);
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        double ll_norm;
        if (config.update_rule == EmUpdateRule::kStandard) {
            ll_norm = kern::em_step(inst.probs, m, inst.n, inst.weight, result.lambdas, next);
        } else {
            ll_norm = kern::weighted_log_mixture(inst.probs, m, inst.n, inst.weight,
                                                 result.lambdas);
            // lambda_j' proportional to lambda_j * exp(corpus_ll_j), in log space
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < m; ++j) {
                next[j] = std::log(result.lambdas[j]) + corpus_ll[j];
                best = std::max(best, next[j]);
            }
            double norm = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                next[j] = std::exp(next[j] - best);
                norm += next[j];
            }
            for (std::size_t j = 0; j < m; ++j)
                next[j] /= norm;
        }
        result.log_likelihood_trace.push_back(inst.total * ll_norm);

        double delta = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            delta = std::max(delta, std::abs(next[j] - result.lambdas[j]));
        result.lambdas = next;
        result.iterations = iter;
        if (delta <= config.convergence_threshold)
            break;
    }

    result.final_log_likelihood =
        inst.total *
        kern::weighted_log_mixture(inst.probs, m, inst.n, inst.weight, result.lambdas);
    result.log_likelihood_trace.push_back(result.final_log_likelihood);
    return result;
}

double euclidean_distance(const CorpusProfile &a, const CorpusProfile &b,
                          const GlobalVocabulary &vocab)
{
    require_nonempty(a, "input");
    require_nonempty(b, "input");
    const std::vector<double> na = dense_normalized_counts(a, vocab);
    const std::vector<double> nb = dense_normalized_counts(b, vocab);
    return std::sqrt(kern::squared_distance(na, nb));
}

double kl_divergence(const SmoothedDistribution &p, const SmoothedDistribution &q)
{
    if (!same_vocabulary(p, q) || p.probabilities.size() != q.probabilities.size())
        throw EstimationError("KL divergence between distributions over different vocabularies ('" +
                              p.corpus_id + "' vs '" + q.corpus_id + "')");
    return kern::kl_bits(p.probabilities, q.probabilities);
}

std::vector<double> weights_from_distances(std::span<const double> distances)
{
    if (distances.empty())
        throw EstimationError("no distances given");

    std::size_t zero_count = 0;
    for (const double d : distances) {
        if (d < 0.0 || !std::isfinite(d))
            throw EstimationError("distances must be finite and nonnegative");
        if (d <= kZeroDistance)
            ++zero_count;
    }

    std::vector<double> lambdas(distances.size(), 0.0);
    if (zero_count > 0) {
        // exact matches take all the weight, split evenly
        for (std::size_t j = 0; j < distances.size(); ++j)
            if (distances[j] <= kZeroDistance)
                lambdas[j] = 1.0 / static_cast<double>(zero_count);
        return lambdas;
    }

    double norm = 0.0;
    for (const double d : distances)
        norm += 1.0 / d;
    for (std::size_t j = 0; j < distances.size(); ++j)
        lambdas[j] = (1.0 / distances[j]) / norm;
    return lambdas;
}

MixtureWeights estimate_by_distance(std::span<const CorpusProfile> train,
                                    const CorpusProfile &heldout,
                                    std::shared_ptr<const GlobalVocabulary> vocab,
                                    Method metric, KlDirection direction)
{
    if (train.empty())
        throw EstimationError("no training corpora given");
    if (metric != Method::kEuclidean && metric != Method::kKl)
        throw EstimationError("not a distance method");
    require_nonempty(heldout, "held-out");
    for (const auto &corpus : train)
        require_nonempty(corpus, "training");

    std::vector<double> distances;
    distances.reserve(train.size());

    if (metric == Method::kEuclidean) {
        for (const auto &corpus : train)
            distances.push_back(euclidean_distance(heldout, corpus, *vocab));
    } else {
        const SmoothedDistribution heldout_dist = smooth(heldout, vocab);
        for (const auto &corpus : train) {
            const SmoothedDistribution train_dist = smooth(corpus, vocab);
            distances.push_back(direction == KlDirection::kHeldoutToTrain
                                    ? kl_divergence(heldout_dist, train_dist)
                                    : kl_divergence(train_dist, heldout_dist));
        }
    }

    MixtureWeights result;
    result.method = metric;
    result.lambdas = weights_from_distances(distances);
    result.distances = std::move(distances);
    return result;
}

MixtureWeights estimate_uniform(std::size_t corpus_count)
{
    if (corpus_count == 0)
        throw EstimationError("no training corpora given");
    MixtureWeights result;
    result.method = Method::kUniform;
    result.lambdas.assign(corpus_count, 1.0 / static_cast<double>(corpus_count));
    return result;
}

MixtureWeights estimate_weights(std::span<const CorpusProfile> train,
                                const CorpusProfile &heldout, const EstimatorSpec &spec)
{
    if (train.empty())
        throw EstimationError("no training corpora given");
    require_nonempty(heldout, "held-out");
    for (const auto &corpus : train)
        require_nonempty(corpus, "training");

    switch (spec.method) {
    case Method::kUniform:
        return estimate_uniform(train.size());
    case Method::kEuclidean:
    case Method::kKl: {
        auto vocab = GlobalVocabulary::build(train, &heldout);
        return estimate_by_distance(train, heldout, std::move(vocab), spec.method,
                                    spec.kl_direction);
    }
    case Method::kMaxLikelihood: {
        auto vocab = GlobalVocabulary::build(train, &heldout);
        std::vector<SmoothedDistribution> dists;
        dists.reserve(train.size());
        for (const auto &corpus : train)
            dists.push_back(smooth(corpus, vocab));
        return estimate_ml(dists, heldout, spec.em);
    }
    }
    throw EstimationError("unknown estimation method");
}

const char *method_name(Method method)
{
    switch (method) {
    case Method::kMaxLikelihood:
        return "ml";
    case Method::kEuclidean:
        return "euclidean";
    case Method::kKl:
        return "kl";
    case Method::kUniform:
        return "uniform";
    }
    return "?";
}

Method parse_method(std::string_view name)
{
    if (name == "ml")
        return Method::kMaxLikelihood;
    if (name == "euclidean")
        return Method::kEuclidean;
    if (name == "kl")
        return Method::kKl;
    if (name == "uniform")
        return Method::kUniform;
    throw ConfigError("unknown method '" + std::string(name) + "' (expected ml|euclidean|kl|uniform)");
}

} // namespace vocabselect
