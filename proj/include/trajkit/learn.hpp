// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajkit/model.hpp"

namespace trajkit {

using Matrix = std::vector<std::vector<double>>;

enum class ModelKind { SvmRbf, Gbt, Logistic, Lasso, Nn1 };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // <= 0 selects 1 / (n_features * mean feature variance)
  double tol = 1e-3;
  int max_passes = 200;  // full sweeps without a change before stopping
};

struct GbtParams {
  int trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  double subsample = 1.0;
};

struct LogisticParams {
  double learning_rate = 0.1;
  int iterations = 2000;
  double l1 = 0.0;  // proximal-gradient L1 penalty; 0 disables it
};

struct ModelSpec {
  ModelKind kind = ModelKind::SvmRbf;
  SvmParams svm;
  GbtParams gbt;
  LogisticParams logistic;

  // per-kind defaults; lasso is logistic with l1 = 0.01
  static ModelSpec make(ModelKind kind);
};

// Rows with NaN entries are imputed with the training-column mean before
// min-max scaling into [0, 1]; out-of-range test values clip and a constant
// training column maps to 0.5.
struct ScalerState {
  std::vector<double> min, max, impute;
  std::vector<double> transform(std::span<const double> row) const;
};

ScalerState fit_scaler(const Matrix& rows);

struct Prediction {
  int label = 0;       // 1 = low functioning (positive class)
  double score = 0.0;  // decision value / probability, kind-specific
  bool abstain = false;
};

struct GbtNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;  // leaf value
  int left = -1;
  int right = -1;
};

// A trained classifier. Kind-specific state is kept flat so models
// serialize to a plain JSON document.
struct Model {
  ModelSpec spec;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;

  // svm_rbf
  Matrix train_rows;             // training rows (svm dual state, nn1 references)
  std::vector<int> train_labels; // 0/1
  std::vector<double> alpha;     // one dual variable per training row
  double bias = 0.0;
  double gamma = 0.0;

  // logistic / lasso
  std::vector<double> weights;
  double intercept = 0.0;

  // gbt
  std::vector<std::vector<GbtNode>> trees;
  double prior = 0.0;

  Prediction predict(std::span<const double> row) const;
  double decision_value(std::span<const double> row) const;

  std::string to_json() const;
  static Model from_json(const std::string& text);
};

// Trains on already-scaled rows. Throws ValidationError when fewer than two
// rows or only one class is present. Deterministic for a fixed seed.
Model train(const ModelSpec& spec, const Matrix& rows,
            const std::vector<int>& labels, std::uint64_t seed,
            std::span<const std::string> feature_names = {});

// Diagnostics for the SVM dual solution.
double svm_dual_objective(const Model& model);
double svm_kkt_violation(const Model& model);

struct Dataset {
  std::vector<std::string> feature_names;
  Matrix rows;              // NaN marks a masked value
  std::vector<int> labels;  // 1 = low functioning
};

struct LoocvOptions {
  bool global_scaling = false;  // fit the scaler once on the full dataset
  int threads = 0;
};

// Leave-one-sample-out: N folds, scaler refit per fold unless configured
// otherwise, out-of-fold predictions in input order. A fold whose training
// rows collapse to a single class yields an abstaining prediction.
std::vector<Prediction> loocv(const Dataset& dataset, const ModelSpec& spec,
                              std::uint64_t seed, const LoocvOptions& options = {});

struct ClassifierReport {
  double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
  double precision_ci = 0.0, recall_ci = 0.0, f1_ci = 0.0, accuracy_ci = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t n = 0;
  std::size_t abstained = 0;
};

// Positive class is "low functioning". Abstentions count as negative
// predictions and are reported separately.
ClassifierReport metrics(std::span<const Prediction> predictions,
                         std::span<const int> labels, std::size_t n_ci);

struct FeatureImportance {
  std::string feature;
  double mean_drop = 0.0;  // mean F1 decrease when the column is shuffled
  double std_drop = 0.0;
};

struct ImportanceReport {
  double baseline_f1 = 0.0;
  std::vector<FeatureImportance> features;
};

ImportanceReport permutation_importance(const Model& model, const Matrix& rows,
                                        const std::vector<int>& labels,
                                        std::span<const std::string> names,
                                        int repeats, std::uint64_t seed,
                                        int threads = 0);

}  // namespace trajkit
