// kernels.cpp -- OpenMP reduction kernels with thread-count-independent
// results (see kernels.hpp for the blocking scheme).

#include "vocabselect/kernels.hpp"

#include <cassert>
#include <cmath>

namespace vocabselect::kern {

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    assert(a.size() == b.size());
    const double *pa = a.data();
    const double *pb = b.data();
    return blocked_sum(a.size(), [pa, pb](std::size_t i) {
        const double d = pa[i] - pb[i];
        return d * d;
    });
}

double kl_bits(std::span<const double> p, std::span<const double> q)
{
    assert(p.size() == q.size());
    const double *pp = p.data();
    const double *pq = q.data();
    return blocked_sum(p.size(), [pp, pq](std::size_t i) {
        return pp[i] * std::log2(pp[i] / pq[i]);
    });
}

double weighted_log_mixture(std::span<const double> probs, std::size_t m, std::size_t n,
                            std::span<const double> w, std::span<const double> lambda)
{
    assert(probs.size() == m * n && w.size() == n && lambda.size() == m);
    const double *pp = probs.data();
    const double *pw = w.data();
    const double *pl = lambda.data();
    return blocked_sum(n, [pp, pw, pl, m, n](std::size_t i) {
        double mix = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            mix += pl[j] * pp[j * n + i];
        return pw[i] * std::log(mix);
    });
}

double em_step(std::span<const double> probs, std::size_t m, std::size_t n,
               std::span<const double> w, std::span<const double> lambda,
               std::span<double> lambda_out)
{
    assert(probs.size() == m * n && w.size() == n);
    assert(lambda.size() == m && lambda_out.size() == m);
    const double *pp = probs.data();
    const double *pw = w.data();
    const double *pl = lambda.data();

    // accumulate the m posterior sums plus the log-likelihood in one pass
    std::vector<double> acc(m + 1);
    blocked_sum_rows(
        n, m + 1,
        [pp, pw, pl, m, n](std::size_t i, double *row) {
            double mix = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                mix += pl[j] * pp[j * n + i];
            const double scale = pw[i] / mix;
            for (std::size_t j = 0; j < m; ++j)
                row[j] += scale * pl[j] * pp[j * n + i];
            row[m] += pw[i] * std::log(mix);
        },
        acc);

    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        total += acc[j];
    for (std::size_t j = 0; j < m; ++j)
        lambda_out[j] = acc[j] / total;
    return acc[m];
}

} // namespace vocabselect::kern
