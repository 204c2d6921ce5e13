#pragma once

// Serial reference implementations of the kernels in kernels.hpp.
// Plain left-to-right loops, kept as the oracle for the parallel kernels
// and as the baseline in the benchmark target.

#include <cstddef>
#include <span>

namespace vocabselect::ref {

double squared_distance(std::span<const double> a, std::span<const double> b);

double kl_bits(std::span<const double> p, std::span<const double> q);

double weighted_log_mixture(std::span<const double> probs, std::size_t m, std::size_t n,
                            std::span<const double> w, std::span<const double> lambda);

double em_step(std::span<const double> probs, std::size_t m, std::size_t n,
               std::span<const double> w, std::span<const double> lambda,
               std::span<double> lambda_out);

} // namespace vocabselect::ref
