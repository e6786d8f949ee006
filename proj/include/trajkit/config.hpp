// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstdint>
#include <string>

#include "trajkit/features_movement.hpp"
#include "trajkit/features_social.hpp"
#include "trajkit/ingest.hpp"
#include "trajkit/learn.hpp"
#include "trajkit/simulate.hpp"

namespace trajkit {

enum class OutputFormat { Csv, Json, Both };

const char* to_string(OutputFormat format);
OutputFormat output_format_from_string(std::string_view s);

struct Paths {
  std::string tracks;
  std::string manifest;
  std::string floorplan;  // empty = built-in default plan
  std::string features;   // feature table consumed instead of raw tracks
  std::string out_dir = "out";
};

// Every tunable of the pipeline, loadable from a JSON file and overridable
// by dotted keys (CLI --set) or TRAJKIT_* environment variables.
struct RunConfig {
  Paths paths;
  TracksFormat tracks_format = TracksFormat::Jsonl;
  IngestOptions ingest;
  MovementParams movement;
  SocialParams social;
  double moca_threshold = kDefaultMocaThreshold;

  SvmParams svm;
  GbtParams gbt;
  LogisticParams logistic;        // no penalty
  double lasso_l1 = 0.01;
  bool global_scaling = false;
  int importance_repeats = 10;
  ModelKind importance_model = ModelKind::SvmRbf;

  CohortProfile profile_high = default_high_profile();
  CohortProfile profile_low = default_low_profile();
  NoiseModel noise;
  StudyOptions study;

  std::uint64_t seed = 42;
  int threads = 0;  // 0 = hardware concurrency
  OutputFormat format = OutputFormat::Both;

  static RunConfig load(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text(int indent = 2) const;

  // Override one field by its dotted path, e.g. "movement.split_deg" or
  // "seed"; the value string is coerced to the field's type.
  void set(const std::string& dotted_key, const std::string& value);

  // TRAJKIT_MOVEMENT_SPLIT_DEG=25 style overrides for CI.
  void apply_env_overrides(const char* prefix = "TRAJKIT_");

  // Hash of the canonical serialized config; stamped into every output file.
  std::string hash() const;

  ModelSpec model_spec(ModelKind kind) const;
};

}  // namespace trajkit
