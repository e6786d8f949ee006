// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/features_movement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "trajkit/stats.hpp"

namespace trajkit {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

double direction_change_angle(const Point2D& p1, const Point2D& p2,
                              const Point2D& p3) {
  const double ux = p2.x - p1.x, uy = p2.y - p1.y;
  const double vx = p3.x - p2.x, vy = p3.y - p2.y;
  const double nu = std::hypot(ux, uy), nv = std::hypot(vx, vy);
  if (nu == 0.0 || nv == 0.0) {
    throw ValidationError("direction change undefined for a zero-length segment");
  }
  const double cos_angle =
      std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0);
  return std::acos(cos_angle) * kRadToDeg;
}

std::vector<Point2D> filter_stationary(const Trajectory& traj,
                                       double threshold) {
  std::vector<Point2D> kept;
  kept.reserve(traj.samples.size());
  for (const TrackSample& s : traj.samples) {
    if (kept.empty() || distance(kept.back(), s.position) >= threshold) {
      kept.push_back(s.position);
    }
  }
  if (kept.size() < 2) kept.clear();  // nothing moved
  return kept;
}

std::vector<LinearPath> segment_linear_paths(const Trajectory& traj,
                                             const MovementParams& params) {
  const std::vector<Point2D> pts =
      filter_stationary(traj, params.stationary_m);
  std::vector<LinearPath> paths;
  if (pts.size() < 2) return paths;

  std::size_t start = 0;
  auto close_segment = [&](std::size_t end) {  // inclusive
    LinearPath path;
    path.points.assign(pts.begin() + static_cast<std::ptrdiff_t>(start),
                       pts.begin() + static_cast<std::ptrdiff_t>(end) + 1);
    for (std::size_t k = 1; k < path.points.size(); ++k) {
      path.length += distance(path.points[k - 1], path.points[k]);
    }
    paths.push_back(std::move(path));
  };

  for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
    const double angle = direction_change_angle(pts[j - 1], pts[j], pts[j + 1]);
    if (angle > params.split_deg) {
      close_segment(j);
      start = j;  // boundary point is shared with the next path
    }
  }
  close_segment(pts.size() - 1);
  return paths;
}

double path_speed(const LinearPath& path, bool fencepost_correct) {
  if (path.n() < 2) {
    throw ValidationError("path speed needs at least 2 samples");
  }
  const double denom = fencepost_correct
                           ? static_cast<double>(path.n() - 1)
                           : static_cast<double>(path.n());
  return path.length / denom;
}

std::vector<double> velocity_series(const Trajectory& traj) {
  std::vector<double> out;
  if (traj.samples.size() < 2) return out;
  out.reserve(traj.samples.size() - 1);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const double dt =
        static_cast<double>(traj.samples[i].t - traj.samples[i - 1].t);
    out.push_back(distance(traj.samples[i - 1].position,
                           traj.samples[i].position) / dt);
  }
  return out;
}

std::optional<double> sample_entropy(std::span<const double> series, int m,
                                     double r_factor) {
  const std::size_t n = series.size();
  if (m < 1 || n < static_cast<std::size_t>(m) + 2) return std::nullopt;

  const auto desc = descriptive(series);
  const double r = r_factor * desc->stddev;

  // Count template pairs within tolerance r at lengths m and m+1 under the
  // Chebyshev distance, over the first n-m template positions so both
  // lengths use the same index set; self-matches excluded.
  const std::size_t n_templates = n - static_cast<std::size_t>(m);
  std::uint64_t b_count = 0, a_count = 0;
  for (std::size_t i = 0; i + 1 < n_templates; ++i) {
    for (std::size_t j = i + 1; j < n_templates; ++j) {
      bool match = true;
      for (int k = 0; k < m; ++k) {
        if (std::abs(series[i + static_cast<std::size_t>(k)] -
                     series[j + static_cast<std::size_t>(k)]) > r) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      ++b_count;
      if (std::abs(series[i + static_cast<std::size_t>(m)] -
                   series[j + static_cast<std::size_t>(m)]) <= r) {
        ++a_count;
      }
    }
  }
  if (b_count == 0 || a_count == 0) return std::nullopt;
  return -std::log(static_cast<double>(a_count) / static_cast<double>(b_count));
}

double wrap_degrees(double delta) {
  double m = std::fmod(delta, 360.0);
  if (m < 0.0) m += 360.0;  // [0, 360)
  return m > 180.0 ? m - 360.0 : m;
}

std::vector<double> orientation_change_series(const Trajectory& traj,
                                              const MovementParams& params) {
  std::vector<double> headings;
  if (params.use_body_orientation) {
    for (const TrackSample& s : traj.samples) {
      if (s.orientation) headings.push_back(*s.orientation);
    }
  } else {
    const std::vector<Point2D> pts =
        filter_stationary(traj, params.stationary_m);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      headings.push_back(
          std::atan2(pts[i].y - pts[i - 1].y, pts[i].x - pts[i - 1].x) *
          kRadToDeg);
    }
  }
  std::vector<double> deltas;
  if (headings.size() < 2) return deltas;
  deltas.reserve(headings.size() - 1);
  for (std::size_t i = 1; i < headings.size(); ++i) {
    deltas.push_back(wrap_degrees(headings[i] - headings[i - 1]));
  }
  return deltas;
}

double levy_log_likelihood(std::span<const double> samples, double mu,
                           double c) {
  double ll = static_cast<double>(samples.size()) * 0.5 *
              std::log(c / (2.0 * std::numbers::pi));
  for (double x : samples) {
    const double d = x - mu;
    if (d <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += -c / (2.0 * d) - 1.5 * std::log(d);
  }
  return ll;
}

namespace {

double profile_scale(std::span<const double> samples, double mu) {
  double inv_sum = 0.0;
  for (double x : samples) inv_sum += 1.0 / (x - mu);
  return static_cast<double>(samples.size()) / inv_sum;
}

double profile_log_likelihood(std::span<const double> samples, double mu) {
  return levy_log_likelihood(samples, mu, profile_scale(samples, mu));
}

}  // namespace

std::optional<LevyFit> fit_levy(std::span<const double> samples,
                                int min_samples) {
  if (samples.size() < static_cast<std::size_t>(min_samples)) {
    return std::nullopt;
  }
  double lo_sample = std::numeric_limits<double>::infinity();
  double hi_sample = -std::numeric_limits<double>::infinity();
  for (double x : samples) {
    if (x <= 0.0 || !std::isfinite(x)) return std::nullopt;
    lo_sample = std::min(lo_sample, x);
    hi_sample = std::max(hi_sample, x);
  }
  if (hi_sample - lo_sample < 1e-12) return std::nullopt;  // degenerate

  constexpr double kEdge = 1e-6;
  const double hi = lo_sample - kEdge;
  if (hi <= 0.0) return std::nullopt;

  // Coarse scan to bracket the profile-likelihood maximum, then
  // golden-section refinement inside the bracket.
  constexpr int kScanPoints = 64;
  double best_mu = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  int best_idx = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double mu = hi * static_cast<double>(i) / (kScanPoints - 1);
    const double ll = profile_log_likelihood(samples, mu);
    if (ll > best_ll) {
      best_ll = ll;
      best_mu = mu;
      best_idx = i;
    }
  }
  double a = hi * static_cast<double>(std::max(0, best_idx - 1)) / (kScanPoints - 1);
  double b = hi * static_cast<double>(std::min(kScanPoints - 1, best_idx + 1)) /
             (kScanPoints - 1);

  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = profile_log_likelihood(samples, x1);
  double f2 = profile_log_likelihood(samples, x2);
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * std::max(1.0, hi); ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = profile_log_likelihood(samples, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = profile_log_likelihood(samples, x1);
    }
  }
  const double mu = (a + b) / 2.0;
  const double refined_ll = profile_log_likelihood(samples, mu);
  if (refined_ll > best_ll) {
    best_ll = refined_ll;
    best_mu = mu;
  }

  LevyFit fit;
  fit.mu = best_mu;
  fit.c = profile_scale(samples, best_mu);
  fit.log_likelihood = best_ll;
  if (!(fit.c > 0.0) || !std::isfinite(fit.log_likelihood)) return std::nullopt;
  return fit;
}

MovementPools movement_pools(const BreakSession& session,
                             const MovementParams& params) {
  MovementPools pools;
  for (const Trajectory& traj : session.trajectories) {
    const std::vector<LinearPath> paths = segment_linear_paths(traj, params);
    std::vector<double> lengths;
    lengths.reserve(paths.size());
    for (const LinearPath& p : paths) {
      pools.lpl.push_back(p.length);
      pools.speed.push_back(path_speed(p, params.fencepost_correct));
      lengths.push_back(p.length);
    }

    const std::vector<Point2D> pts =
        filter_stationary(traj, params.stationary_m);
    for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
      pools.direction_change.push_back(
          direction_change_angle(pts[j - 1], pts[j], pts[j + 1]));
    }

    if (const auto ev = sample_entropy(velocity_series(traj), params.entropy_m,
                                       params.entropy_r_factor)) {
      pools.velocity_entropy.push_back(*ev);
    }
    if (const auto eo =
            sample_entropy(orientation_change_series(traj, params),
                           params.entropy_m, params.entropy_r_factor)) {
      pools.orientation_entropy.push_back(*eo);
    }
    if (const auto fit = fit_levy(lengths, params.levy_min_samples)) {
      pools.levy_mu.push_back(fit->mu);
      pools.levy_c.push_back(fit->c);
    }
  }
  return pools;
}

MovementFeatures summarize_movement(const MovementPools& pools) {
  MovementFeatures out;
  const std::vector<double>* columns[] = {
      &pools.lpl,
      &pools.speed,
      &pools.direction_change,
      &pools.velocity_entropy,
      &pools.orientation_entropy,
      &pools.levy_mu,
      &pools.levy_c,
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::size_t i = 0;
  for (const auto* column : columns) {
    const auto desc = descriptive(*column);
    if (desc) {
      out.values[i] = desc->mean;
      out.defined[i] = true;
      out.values[i + 1] = desc->stddev;
      out.defined[i + 1] = true;
    } else {
      out.values[i] = nan;
      out.values[i + 1] = nan;
    }
    i += 2;
  }
  return out;
}

MovementFeatures movement_features(const BreakSession& session,
                                   const MovementParams& params) {
  return summarize_movement(movement_pools(session, params));
}

}  // namespace trajkit
