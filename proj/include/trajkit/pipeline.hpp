// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "trajkit/config.hpp"
#include "trajkit/stats.hpp"

namespace trajkit {

enum class FeatureSubset { All, Movement, Social };

const char* to_string(FeatureSubset subset);

inline constexpr std::array<ModelKind, 4> kReportModels = {
    ModelKind::SvmRbf, ModelKind::Gbt, ModelKind::Logistic, ModelKind::Lasso};
inline constexpr std::array<FeatureSubset, 3> kReportSubsets = {
    FeatureSubset::All, FeatureSubset::Movement, FeatureSubset::Social};

// The eight raw feature distributions screened for class differences.
const std::array<std::string, 8>& distribution_feature_names();

struct FeatureTable {
  std::vector<std::string> feature_names;  // 32, canonical order
  std::vector<SessionFeatureVector> rows;
};

struct StatsRow {
  std::string feature;
  std::size_t n_high = 0;
  std::size_t n_low = 0;
  RankSumResult result;
};

struct ClassifyRow {
  FeatureSubset subset = FeatureSubset::All;
  ModelKind model = ModelKind::SvmRbf;
  ClassifierReport report;
};

struct ImportanceRow {
  FeatureSubset subset = FeatureSubset::All;
  double baseline_f1 = 0.0;
  std::vector<FeatureImportance> features;
};

// Raw per-session extraction shared by the feature table and the
// distribution screen.
struct SessionExtract {
  MovementPools movement;
  SocialPools social;
};

SessionExtract extract_session(const BreakSession& session,
                               const FloorPlan& plan, const RunConfig& config);

struct PipelineInputs {
  Manifest manifest;
  FloorPlan plan;
  std::vector<BreakSession> sessions;
  IngestReport ingest_report;
};

PipelineInputs load_inputs(const RunConfig& config);

FeatureTable extract_feature_table(std::span<const BreakSession> sessions,
                                   const Manifest& manifest,
                                   const FloorPlan& plan,
                                   const RunConfig& config);

std::vector<StatsRow> compute_stats(std::span<const BreakSession> sessions,
                                    const Manifest& manifest,
                                    const FloorPlan& plan,
                                    const RunConfig& config);

std::vector<ClassifyRow> classify_table(const FeatureTable& table,
                                        const RunConfig& config);

std::vector<ImportanceRow> importance_table(const FeatureTable& table,
                                            const RunConfig& config);

Dataset dataset_from_table(const FeatureTable& table, FeatureSubset subset);

void write_feature_table(const FeatureTable& table, const RunConfig& config);
FeatureTable load_feature_table(const std::string& json_path);

void write_stats(std::span<const StatsRow> rows, const RunConfig& config);
void write_classification(std::span<const ClassifyRow> rows, std::size_t n,
                          const RunConfig& config);
void write_importance(std::span<const ImportanceRow> rows,
                      const RunConfig& config);

// Command front end used by the C API and the CLI. Each command reads its
// inputs from the configured paths and writes CSV/JSON outputs stamped with
// the config hash into paths.out_dir.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config) : config_(std::move(config)) {}

  const RunConfig& config() const { return config_; }

  // "simulate", "features", "stats", "classify", "importance" or "report"
  void run(const std::string& command);

  void cmd_simulate();
  FeatureTable cmd_features();
  std::vector<StatsRow> cmd_stats();
  std::vector<ClassifyRow> cmd_classify();
  std::vector<ImportanceRow> cmd_importance();
  void cmd_report();

 private:
  FeatureTable feature_table_for_learning();

  RunConfig config_;
};

}  // namespace trajkit
