// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

// Test-only reference implementations. Everything here is deliberately
// naive (double loops, full enumeration) and independent of the library
// code paths it cross-checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace oracle {

// Straight O(N^2) template counting, Chebyshev distance, self-matches
// excluded, r given in absolute units.
inline std::optional<double> sample_entropy_naive(std::span<const double> x,
                                                  int m, double r) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  if (n < m + 2) return std::nullopt;
  const std::ptrdiff_t nt = n - m;
  std::int64_t b = 0, a = 0;
  for (std::ptrdiff_t i = 0; i < nt; ++i) {
    for (std::ptrdiff_t j = i + 1; j < nt; ++j) {
      double dist_m = 0.0;
      for (int k = 0; k < m; ++k) {
        dist_m = std::max(dist_m, std::abs(x[static_cast<std::size_t>(i + k)] -
                                           x[static_cast<std::size_t>(j + k)]));
      }
      if (dist_m <= r) {
        ++b;
        const double tail = std::abs(x[static_cast<std::size_t>(i + m)] -
                                     x[static_cast<std::size_t>(j + m)]);
        if (tail <= r) ++a;
      }
    }
  }
  if (a == 0 || b == 0) return std::nullopt;
  return -std::log(static_cast<double>(a) / static_cast<double>(b));
}

inline double population_std(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

// Exact two-sided rank-sum p by enumerating every C(n, n_a) assignment of
// the ranks 1..n to the first sample. Tie-free inputs only.
inline double rank_sum_exact_p_enum(std::span<const double> a,
                                    std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double w = 0.0;
  for (double v : a) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    w += static_cast<double>(it - sorted.begin()) + 1.0;
  }
  const std::size_t n = pooled.size(), k = a.size();
  std::vector<int> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), 1);
  std::sort(mask.begin(), mask.end());  // lowest permutation for next_permutation
  std::uint64_t total = 0, low = 0, high = 0;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) s += static_cast<double>(i + 1);
    }
    ++total;
    if (s <= w + 1e-9) ++low;
    if (s >= w - 1e-9) ++high;
  } while (std::next_permutation(mask.begin(), mask.end()));
  const double p = 2.0 * std::min(static_cast<double>(low),
                                  static_cast<double>(high)) /
                   static_cast<double>(total);
  return std::min(1.0, p);
}

// Dense grid search over the SVM dual with the equality constraint
// eliminated through the last free coordinate, refined by repeated zooming.
// Small problems only.
struct SvmDualOracle {
  std::vector<std::vector<double>> kernel;  // y_i y_j K(x_i, x_j)
  std::vector<double> y;
  double c = 1.0;

  double objective(std::span<const double> alpha) const {
    double obj = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      obj += alpha[i];
      for (std::size_t j = 0; j < alpha.size(); ++j) {
        obj -= 0.5 * alpha[i] * alpha[j] * kernel[i][j];
      }
    }
    return obj;
  }

  // maximize over the box, holding sum(alpha_i y_i) = 0
  double best_objective(int grid = 24, int zooms = 10) const {
    const std::size_t n = y.size();
    std::vector<double> lo(n, 0.0), hi(n, c);
    double best = -1e300;
    std::vector<double> alpha(n, 0.0), best_alpha(n, 0.0);
    for (int zoom = 0; zoom < zooms; ++zoom) {
      std::vector<std::size_t> idx(n - 1, 0);
      bool carry = false;
      while (!carry) {
        double dot = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          alpha[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) /
                                 static_cast<double>(grid);
          dot += alpha[i] * y[i];
        }
        const double last = -dot * y[n - 1];  // y in {-1, +1}
        if (last >= -1e-12 && last <= c + 1e-12) {
          alpha[n - 1] = std::clamp(last, 0.0, c);
          const double obj = objective(alpha);
          if (obj > best) {
            best = obj;
            best_alpha = alpha;
          }
        }
        // odometer
        carry = true;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          if (idx[i] < static_cast<std::size_t>(grid)) {
            ++idx[i];
            carry = false;
            break;
          }
          idx[i] = 0;
        }
      }
      // shrink the box around the best point
      for (std::size_t i = 0; i < n; ++i) {
        const double width = (hi[i] - lo[i]) / static_cast<double>(grid) * 2.0;
        lo[i] = std::max(0.0, best_alpha[i] - width);
        hi[i] = std::min(c, best_alpha[i] + width);
      }
    }
    return best;
  }
};

}  // namespace oracle
