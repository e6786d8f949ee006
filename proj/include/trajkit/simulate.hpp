// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstdint>
#include <vector>

#include "trajkit/ingest.hpp"
#include "trajkit/model.hpp"

namespace trajkit {

struct StepLengthModel {
  enum class Kind { Levy, Gaussian };
  Kind kind = Kind::Levy;
  double a = 0.5;  // levy location / gaussian mean, metres
  double b = 1.2;  // levy scale / gaussian std
};

// Behavioral knobs for one synthetic population. All magnitudes are declared
// test fiction; only their qualitative directions are meaningful.
struct CohortProfile {
  CohortLabel label = CohortLabel::High;
  StepLengthModel bout_length;
  double speed_mean = 1.2;   // m/s, truncated above 0.1
  double speed_std = 0.3;
  double turn_sigma_deg = 10.0;  // per-step heading deviation while walking
  double pause_prob = 0.08;      // per-step chance of standing still
  double group_rate_per_person_min = 0.35;
  std::vector<double> group_size_weights = {0.2, 0.4, 0.4};  // sizes 2, 3, ...
  std::vector<double> region_weights;  // over named regions; empty = uniform
  double dwell_mean_s = 60.0;          // exponential group dwell

  void validate() const;
};

CohortProfile default_high_profile();
CohortProfile default_low_profile();

// mean radial error = sigma * sqrt(pi/2) for per-axis gaussian jitter
inline constexpr double kTargetMeanRadialError = 1.41;
// mean absolute error = sigma * sqrt(2/pi) for gaussian angle noise
inline constexpr double kTargetMeanAbsOrientationError = 29.0;

double default_position_sigma();     // 1.41 / sqrt(pi/2)  ~ 1.125 m
double default_orientation_sigma();  // 29 * sqrt(pi/2)    ~ 36.3 deg

// Position jitter is a stationary per-axis AR(1) gaussian process: the
// marginal per-sample error keeps the calibrated sigma (so the mean radial
// error stays 1.41 m) while consecutive errors correlate the way a
// smoothing tracker's do. correlation_time_s = 0 gives independent jitter.
struct NoiseModel {
  double position_sigma_m;
  double orientation_sigma_deg;
  double correlation_time_s = 5.0;
  double dropout_prob = 0.03;

  NoiseModel();
  void validate() const;
};

struct SimulateOptions {
  int n_people = 10;
  // fraction of agents drawn from the high profile regardless of the
  // session label; models healthy companions sharing the space
  double companion_fraction = 0.3;
};

BreakSession simulate_session(const CohortProfile& profile,
                              const CohortProfile& companion_profile,
                              const FloorPlan& plan, std::int64_t duration_s,
                              const SimulateOptions& options,
                              const NoiseModel& noise, std::uint64_t seed,
                              const std::string& session_id = "S0001",
                              const std::string& cohort_id = "A");

struct StudyOptions {
  int high_sessions = 10;
  int low_sessions = 10;
  std::vector<std::int64_t> durations = {900, 900, 1800};  // cycled
  SimulateOptions session;
};

struct Study {
  std::vector<BreakSession> sessions;
  Manifest manifest;
};

// Labeled synthetic study with per-session derived seeds. High sessions are
// spread over cohorts A/C/E and low sessions over B/D/F; the manifest ships
// the fixed six-cohort score fixture so labeling reproduces the assignment.
Study simulate_study(const CohortProfile& high, const CohortProfile& low,
                     const StudyOptions& options, const FloorPlan& plan,
                     const NoiseModel& noise, std::uint64_t seed);

// Six cohorts (A-F) with score lists whose means put A/C/E above the
// labeling threshold and B/D/F at or below it.
std::vector<Cohort> default_cohorts();

}  // namespace trajkit
