#pragma once

// weights.hpp -- estimation of the interpolation weight vector over the
// training corpora: maximum likelihood via EM, inverse Euclidean distance,
// inverse KL divergence, and the uniform baseline.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vocabselect/corpus.hpp"

namespace vocabselect {

enum class Method { kMaxLikelihood, kEuclidean, kKl, kUniform };

enum class EmUpdateRule {
    // per-token posterior reestimation; held-out likelihood is
    // non-decreasing across iterations
    kStandard,
    // reweights each lambda by the exponentiated whole-corpus held-out
    // log-likelihood (a power iteration on the corpus posterior); drives
    // the weights to a one-hot vector
    kCorpusPosterior,
};

// KL is asymmetric, so the caller picks which argument is the held-out
// corpus.  kHeldoutToTrain means D_j = KL(P_heldout || P_j).
enum class KlDirection { kHeldoutToTrain, kTrainToHeldout };

struct EmConfig {
    EmUpdateRule update_rule = EmUpdateRule::kStandard;
    double convergence_threshold = 1e-6; // on max_j |lambda_j' - lambda_j|
    int max_iterations = 1000;
};

struct MixtureWeights {
    std::vector<double> lambdas; // on the probability simplex
    Method method = Method::kUniform;
    int iterations = 0; // EM only
    double final_log_likelihood = std::numeric_limits<double>::quiet_NaN(); // EM only
    std::optional<std::vector<double>> distances; // distance methods only

    // held-out log-likelihood at each EM iterate, starting at the uniform
    // initialization; length iterations + 1
    std::vector<double> log_likelihood_trace;
};

// Maximizes the held-out likelihood of the interpolated distribution over
// the given smoothed training distributions, all defined over one
// GlobalVocabulary that covers every held-out word.
MixtureWeights estimate_ml(std::span<const SmoothedDistribution> train,
                           const CorpusProfile &heldout, const EmConfig &config = {});

// sqrt of the summed squared differences of normalized counts over the
// vocabulary; absent words contribute 0
double euclidean_distance(const CorpusProfile &a, const CorpusProfile &b,
                          const GlobalVocabulary &vocab);

// sum_i P(i) log2(P(i)/Q(i)) in bits, over one shared vocabulary
double kl_divergence(const SmoothedDistribution &p, const SmoothedDistribution &q);

// lambda_j = (1/D_j) / sum_k (1/D_k).  Any D_j <= 1e-12 is treated as an
// exact match: the zero-distance corpora split the weight uniformly and
// the rest get 0.
std::vector<double> weights_from_distances(std::span<const double> distances);

MixtureWeights estimate_by_distance(std::span<const CorpusProfile> train,
                                    const CorpusProfile &heldout,
                                    std::shared_ptr<const GlobalVocabulary> vocab,
                                    Method metric,
                                    KlDirection direction = KlDirection::kHeldoutToTrain);

MixtureWeights estimate_uniform(std::size_t corpus_count);

struct EstimatorSpec {
    Method method = Method::kMaxLikelihood;
    EmConfig em;
    KlDirection kl_direction = KlDirection::kHeldoutToTrain;
};

// Builds the global vocabulary (training corpora plus held-out), smooths
// whatever the chosen method requires, and dispatches.  Empty corpora are
// rejected here, for every method alike.
MixtureWeights estimate_weights(std::span<const CorpusProfile> train,
                                const CorpusProfile &heldout, const EstimatorSpec &spec);

const char *method_name(Method method);
Method parse_method(std::string_view name);

} // namespace vocabselect
