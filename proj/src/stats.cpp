// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "trajkit/model.hpp"

namespace trajkit {

namespace {

struct RankedSamples {
  std::vector<double> ranks_a;  // mid-ranks of sample a
  double tie_term = 0.0;        // sum over tie groups of (t^3 - t)
  bool has_ties = false;
};

RankedSamples rank_samples(std::span<const double> a, std::span<const double> b) {
  struct Tagged {
    double value;
    bool from_a;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Tagged& x, const Tagged& y) { return x.value < y.value; });

  RankedSamples out;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const double t = static_cast<double>(j - i);
    // mid-rank of the tie group spanning positions i..j-1 (1-based ranks)
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    if (t > 1.0) {
      out.has_ties = true;
      out.tie_term += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].from_a) out.ranks_a.push_back(rank);
    }
    i = j;
  }
  return out;
}

}  // namespace

double rank_sum_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ValidationError("rank-sum test needs two non-empty samples");
  }
  const RankedSamples ranked = rank_samples(a, b);
  double w = 0.0;
  for (double r : ranked.ranks_a) w += r;
  return w;
}

double rank_sum_exact_p(std::span<const double> a, std::span<const double> b) {
  const std::size_t n_a = a.size();
  const std::size_t n = a.size() + b.size();
  const double w = rank_sum_statistic(a, b);

  // Enumerate every way to pick n_a of the ranks 1..n and count rank sums
  // at or beyond the observed one in each tail.
  std::vector<std::size_t> pick(n_a);
  for (std::size_t i = 0; i < n_a; ++i) pick[i] = i;
  std::uint64_t total = 0, low = 0, high = 0;
  while (true) {
    double s = 0.0;
    for (std::size_t idx : pick) s += static_cast<double>(idx + 1);
    ++total;
    if (s <= w + 1e-9) ++low;
    if (s >= w - 1e-9) ++high;
    // next combination
    std::size_t k = n_a;
    while (k > 0) {
      --k;
      if (pick[k] != k + n - n_a) {
        ++pick[k];
        for (std::size_t m = k + 1; m < n_a; ++m) pick[m] = pick[m - 1] + 1;
        break;
      }
      if (k == 0) {
        const double tails =
            2.0 * std::min(static_cast<double>(low), static_cast<double>(high)) /
            static_cast<double>(total);
        return std::min(1.0, tails);
      }
    }
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double rank_sum_normal_p(std::span<const double> a, std::span<const double> b,
                         double* z_out) {
  const double n_a = static_cast<double>(a.size());
  const double n_b = static_cast<double>(b.size());
  const double n = n_a + n_b;
  const RankedSamples ranked = rank_samples(a, b);
  double w = 0.0;
  for (double r : ranked.ranks_a) w += r;

  const double mean = n_a * (n + 1.0) / 2.0;
  double variance = n_a * n_b / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)));
  if (variance <= 0.0) {
    // every pooled value identical
    if (z_out) *z_out = 0.0;
    return 1.0;
  }
  double d = w - mean;
  // continuity correction toward the mean
  if (d > 0.5) {
    d -= 0.5;
  } else if (d < -0.5) {
    d += 0.5;
  } else {
    d = 0.0;
  }
  const double z = d / std::sqrt(variance);
  if (z_out) *z_out = z;
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ValidationError("rank-sum test needs two non-empty samples");
  }
  RankSumResult result;
  result.statistic = rank_sum_statistic(a, b);

  const RankedSamples ranked = rank_samples(a, b);
  const bool exact_ok =
      !ranked.has_ties && a.size() + b.size() <= kExactRankSumCutoff;
  result.p_two_sided = rank_sum_normal_p(a, b, &result.z);
  if (exact_ok) {
    result.p_two_sided = rank_sum_exact_p(a, b);
    result.method = RankSumResult::Method::Exact;
  } else {
    result.method = RankSumResult::Method::Normal;
  }
  return result;
}

double wald_ci_halfwidth(double p_hat, std::size_t n) {
  if (n == 0) {
    throw ValidationError("confidence half-width needs n >= 1");
  }
  if (p_hat < 0.0 || p_hat > 1.0) {
    throw ValidationError("proportion outside [0, 1]");
  }
  return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

std::optional<Descriptive> descriptive(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return Descriptive{mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

}  // namespace trajkit
