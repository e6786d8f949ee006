// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "trajkit/model.hpp"

namespace trajkit {

struct MovementParams {
  double split_deg = 20.0;     // heading deviation that ends a linear path
  double stationary_m = 0.25;  // dead-band displacement filter, metres
  int entropy_m = 2;
  double entropy_r_factor = 0.2;
  bool fencepost_correct = false;     // speed = length/(n-1) instead of length/n
  bool use_body_orientation = false;  // orientation-change entropy source
  int levy_min_samples = 5;
};

// A maximal straight-walking stretch: every interior heading deviation stays
// at or below the split threshold. Consecutive paths share their boundary
// point.
struct LinearPath {
  std::vector<Point2D> points;
  double length = 0.0;  // sum of consecutive displacements
  std::size_t n() const { return points.size(); }
};

// Heading deviation at p2 between the incoming segment p1->p2 and the
// outgoing segment p2->p3, in degrees: 0 for collinear continuation, 180
// for an exact reversal. Throws ValidationError on a zero-length segment.
double direction_change_angle(const Point2D& p1, const Point2D& p2,
                              const Point2D& p3);

// Dead-band filter: a position is kept only once it has moved at least
// `threshold` metres away from the previously kept one. Slow drift still
// accumulates into a kept step.
std::vector<Point2D> filter_stationary(const Trajectory& traj, double threshold);

std::vector<LinearPath> segment_linear_paths(const Trajectory& traj,
                                             const MovementParams& params = {});

double path_speed(const LinearPath& path, bool fencepost_correct = false);

// Per-step displacement divided by the step's time gap (1 s on-grid).
std::vector<double> velocity_series(const Trajectory& traj);

// SampEn(m, r, N) with Chebyshev distance, r = r_factor * population std of
// the series, self-matches excluded. Returns nullopt when the series is too
// short or no template pair matches at either length.
std::optional<double> sample_entropy(std::span<const double> series, int m = 2,
                                     double r_factor = 0.2);

// Step-to-step change of the movement heading (or of the body orientation
// when configured and present), wrapped to (-180, 180].
std::vector<double> orientation_change_series(const Trajectory& traj,
                                              const MovementParams& params = {});

double wrap_degrees(double delta);  // into (-180, 180]

struct LevyFit {
  double mu = 0.0;  // location, strictly below every sample
  double c = 0.0;   // scale, positive
  double log_likelihood = 0.0;
};

double levy_log_likelihood(std::span<const double> samples, double mu, double c);

// Maximum-likelihood fit of the two-parameter heavy-tailed density
//   f(x; mu, c) = sqrt(c/2pi) * exp(-c / (2(x-mu))) / (x-mu)^{3/2},  x > mu.
// For fixed mu the scale MLE is c(mu) = n / sum(1/(x_i - mu)); mu itself is
// found by a profile-likelihood search over [0, min(x) - eps]. Returns
// nullopt for fewer than min_samples samples or a degenerate sample set.
std::optional<LevyFit> fit_levy(std::span<const double> samples,
                                int min_samples = 5);

// Raw per-session pools that the 14 movement features summarize, also used
// directly by the distribution-level significance screen.
struct MovementPools {
  std::vector<double> lpl;
  std::vector<double> speed;
  std::vector<double> direction_change;
  std::vector<double> velocity_entropy;     // one entry per trajectory
  std::vector<double> orientation_entropy;  // one entry per trajectory
  std::vector<double> levy_mu;              // one entry per trajectory
  std::vector<double> levy_c;
};

MovementPools movement_pools(const BreakSession& session,
                             const MovementParams& params = {});

struct MovementFeatures {
  std::array<double, kMovementFeatureCount> values{};
  std::array<bool, kMovementFeatureCount> defined{};
};

MovementFeatures summarize_movement(const MovementPools& pools);
MovementFeatures movement_features(const BreakSession& session,
                                   const MovementParams& params = {});

}  // namespace trajkit
