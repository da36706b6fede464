#pragma once

#include <cstdint>
#include <vector>

namespace episafe {

/// 1-based ranks with ties sharing the average of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

/// Spearman rank correlation (Pearson correlation of average ranks).
/// Returns 0 when either side is constant.
double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

/// One-sided permutation test: probability that a random pairing of xs with a
/// permutation of ys yields rho <= the observed one. Exact enumeration of all
/// n! pairings for n <= 10; fixed-seed Monte Carlo with `samples` draws and
/// the add-one estimator above that.
double spearman_pvalue_leq(const std::vector<double>& xs, const std::vector<double>& ys,
                           std::uint64_t seed = 0x5eed5eedULL, long samples = 20000);

}  // namespace episafe
