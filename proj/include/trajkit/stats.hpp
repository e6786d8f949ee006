// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace trajkit {

// Both samples together must stay at or below this size (and be tie-free)
// for the exact permutation p-value; enumeration is then at most C(12,6)
// = 924 subsets.
inline constexpr std::size_t kExactRankSumCutoff = 12;

struct RankSumResult {
  enum class Method { Exact, Normal };
  double statistic = 0.0;  // rank sum of the first sample, mid-ranks for ties
  double z = 0.0;
  double p_two_sided = 1.0;
  Method method = Method::Normal;
};

// Two-sided Wilcoxon rank-sum test. Exact enumeration for small tie-free
// samples, otherwise a normal approximation with tie-corrected variance and
// continuity correction. Two identical samples give p = 1.
RankSumResult wilcoxon_rank_sum(std::span<const double> a,
                                std::span<const double> b);

// Individual pieces, exposed so the two p-value code paths can be
// cross-checked against each other.
double rank_sum_statistic(std::span<const double> a, std::span<const double> b);
double rank_sum_exact_p(std::span<const double> a, std::span<const double> b);
double rank_sum_normal_p(std::span<const double> a, std::span<const double> b,
                         double* z_out = nullptr);

// 1.96 * sqrt(p(1-p)/n), the 95% normal-approximation half-width used for
// the reported proportion metrics.
double wald_ci_halfwidth(double p_hat, std::size_t n);

struct Descriptive {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

// Empty input yields nullopt; a singleton has stddev 0.
std::optional<Descriptive> descriptive(std::span<const double> values);

double normal_cdf(double x);

}  // namespace trajkit
