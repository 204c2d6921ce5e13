#pragma once

// Parallel reduction kernels.
//
// Every reduction splits its index range into fixed-size blocks, sums each
// block serially, and combines the block partials in block order.  The
// summation tree therefore does not depend on the number of threads, and
// results are bit-identical for any OMP_NUM_THREADS setting (including a
// build without OpenMP).  Serial counterparts live in reference.hpp.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace vocabselect::kern {

inline constexpr std::size_t kBlockSize = 4096;

// sum of term(i) for i in [0, n)
template <class Term>
double blocked_sum(std::size_t n, Term term)
{
    if (n == 0)
        return 0.0;
    const std::size_t nblocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t hi = std::min(n, lo + kBlockSize);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            acc += term(i);
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial)
        total += p;
    return total;
}

// Row variant: term(i, acc) adds element i's contribution to acc[0..width).
// out must have length width; it is overwritten.
template <class Term>
void blocked_sum_rows(std::size_t n, std::size_t width, Term term, std::span<double> out)
{
    std::fill(out.begin(), out.end(), 0.0);
    if (n == 0 || width == 0)
        return;
    const std::size_t nblocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<double> partial(nblocks * width, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t hi = std::min(n, lo + kBlockSize);
        double *acc = partial.data() + static_cast<std::size_t>(b) * width;
        for (std::size_t i = lo; i < hi; ++i)
            term(i, acc);
    }
    for (std::size_t b = 0; b < nblocks; ++b) {
        const double *acc = partial.data() + b * width;
        for (std::size_t j = 0; j < width; ++j)
            out[j] += acc[j];
    }
}

// sum_i (a[i] - b[i])^2
double squared_distance(std::span<const double> a, std::span<const double> b);

// sum_i p[i] * log2(p[i] / q[i]);  requires strictly positive entries
double kl_bits(std::span<const double> p, std::span<const double> q);

// sum_i w[i] * ln(sum_j lambda[j] * probs[j*n + i]) over an m x n
// row-major probability matrix
double weighted_log_mixture(std::span<const double> probs, std::size_t m, std::size_t n,
                            std::span<const double> w, std::span<const double> lambda);

// One mixture-weight reestimation step.  Writes
//   lambda_out[j] = sum_i w[i] * lambda[j]*P(i|j) / sum_k lambda[k]*P(i|k)
// (renormalized to sum to 1) and returns the weighted log mixture at the
// input lambda, evaluated in the same pass.
double em_step(std::span<const double> probs, std::size_t m, std::size_t n,
               std::span<const double> w, std::span<const double> lambda,
               std::span<double> lambda_out);

} // namespace vocabselect::kern
