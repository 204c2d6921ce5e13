// reference.cpp -- serial counterparts of the parallel kernels.

#include "vocabselect/reference.hpp"

#include <cassert>
#include <cmath>
#include <vector>

namespace vocabselect::ref {

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double kl_bits(std::span<const double> p, std::span<const double> q)
{
    assert(p.size() == q.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        sum += p[i] * std::log2(p[i] / q[i]);
    return sum;
}

double weighted_log_mixture(std::span<const double> probs, std::size_t m, std::size_t n,
                            std::span<const double> w, std::span<const double> lambda)
{
    assert(probs.size() == m * n && w.size() == n && lambda.size() == m);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double mix = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            mix += lambda[j] * probs[j * n + i];
        sum += w[i] * std::log(mix);
    }
    return sum;
}

double em_step(std::span<const double> probs, std::size_t m, std::size_t n,
               std::span<const double> w, std::span<const double> lambda,
               std::span<double> lambda_out)
{
    assert(probs.size() == m * n && w.size() == n);
    assert(lambda.size() == m && lambda_out.size() == m);
    std::vector<double> acc(m, 0.0);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double mix = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            mix += lambda[j] * probs[j * n + i];
        const double scale = w[i] / mix;
        for (std::size_t j = 0; j < m; ++j)
            acc[j] += scale * lambda[j] * probs[j * n + i];
        ll += w[i] * std::log(mix);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        total += acc[j];
    for (std::size_t j = 0; j < m; ++j)
        lambda_out[j] = acc[j] / total;
    return ll;
}

} // namespace vocabselect::ref
