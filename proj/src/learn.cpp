// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "trajkit/parallel.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/stats.hpp"

namespace trajkit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::SvmRbf: return "svm_rbf";
    case ModelKind::Gbt: return "gbt";
    case ModelKind::Logistic: return "logistic";
    case ModelKind::Lasso: return "lasso";
    case ModelKind::Nn1: return "nn1";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view s) {
  if (s == "svm_rbf") return ModelKind::SvmRbf;
  if (s == "gbt") return ModelKind::Gbt;
  if (s == "logistic") return ModelKind::Logistic;
  if (s == "lasso") return ModelKind::Lasso;
  if (s == "nn1") return ModelKind::Nn1;
  throw ValidationError("unknown model kind '" + std::string(s) + "'");
}

ModelSpec ModelSpec::make(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  if (kind == ModelKind::Lasso) spec.logistic.l1 = 0.01;
  return spec;
}

ScalerState fit_scaler(const Matrix& rows) {
  if (rows.empty()) throw ValidationError("scaler needs at least one row");
  const std::size_t d = rows.front().size();
  ScalerState state;
  state.min.assign(d, std::numeric_limits<double>::infinity());
  state.max.assign(d, -std::numeric_limits<double>::infinity());
  state.impute.assign(d, 0.0);

  std::vector<std::size_t> defined(d, 0);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      if (std::isnan(row[j])) continue;
      state.impute[j] += row[j];
      ++defined[j];
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    state.impute[j] = defined[j] ? state.impute[j] / static_cast<double>(defined[j]) : 0.0;
  }
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = std::isnan(row[j]) ? state.impute[j] : row[j];
      state.min[j] = std::min(state.min[j], v);
      state.max[j] = std::max(state.max[j], v);
    }
  }
  return state;
}

std::vector<double> ScalerState::transform(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double v = std::isnan(row[j]) ? impute[j] : row[j];
    const double span = max[j] - min[j];
    out[j] = span > 0.0 ? std::clamp((v - min[j]) / span, 0.0, 1.0) : 0.5;
  }
  return out;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double rbf_kernel(std::span<const double> a, std::span<const double> b,
                  double gamma) {
  double ss = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    ss += diff * diff;
  }
  return std::exp(-gamma * ss);
}

double auto_gamma(const Matrix& rows) {
  const std::size_t d = rows.front().size();
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto& row : rows) {
    for (double v : row) {
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sum_sq / static_cast<double>(count) - mean * mean;
  if (var <= 0.0) return 1.0 / static_cast<double>(d);
  return 1.0 / (static_cast<double>(d) * var);
}

// --- SVM (sequential minimal optimization on the RBF hinge dual) ---------

void train_svm(Model& model, const Matrix& rows, const std::vector<int>& labels,
               std::uint64_t seed) {
  const std::size_t n = rows.size();
  const SvmParams& params = model.spec.svm;
  model.gamma = params.gamma > 0.0 ? params.gamma : auto_gamma(rows);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == 1 ? 1.0 : -1.0;

  // cached kernel matrix; training sets here are small (hundreds of rows)
  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = rbf_kernel(rows[i], rows[j], model.gamma);
      kernel[i * n + j] = k;
      kernel[j * n + i] = k;
    }
  }

  std::vector<double>& alpha = model.alpha;
  alpha.assign(n, 0.0);
  double b = 0.0;
  const double c = params.c;
  const double tol = params.tol;

  auto decision = [&](std::size_t i) {
    double f = b;
    for (std::size_t k = 0; k < n; ++k) {
      if (alpha[k] > 0.0) f += alpha[k] * y[k] * kernel[k * n + i];
    }
    return f;
  };

  auto take_step = [&](std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double e_i = decision(i) - y[i];
    const double e_j = decision(j) - y[j];
    const double alpha_i_old = alpha[i];
    const double alpha_j_old = alpha[j];
    double lo, hi;
    if (y[i] != y[j]) {
      lo = std::max(0.0, alpha_j_old - alpha_i_old);
      hi = std::min(c, c + alpha_j_old - alpha_i_old);
    } else {
      lo = std::max(0.0, alpha_i_old + alpha_j_old - c);
      hi = std::min(c, alpha_i_old + alpha_j_old);
    }
    if (lo >= hi) return false;
    const double eta =
        2.0 * kernel[i * n + j] - kernel[i * n + i] - kernel[j * n + j];
    if (eta >= 0.0) return false;  // kernel matrix PSD; flat directions skipped
    double alpha_j_new =
        std::clamp(alpha_j_old - y[j] * (e_i - e_j) / eta, lo, hi);
    if (std::abs(alpha_j_new - alpha_j_old) <
        1e-8 * (alpha_j_new + alpha_j_old + 1e-8)) {
      return false;
    }
    const double alpha_i_new =
        alpha_i_old + y[i] * y[j] * (alpha_j_old - alpha_j_new);
    alpha[i] = alpha_i_new;
    alpha[j] = alpha_j_new;

    const double di = y[i] * (alpha_i_new - alpha_i_old);
    const double dj = y[j] * (alpha_j_new - alpha_j_old);
    const double b1 = b - e_i - di * kernel[i * n + i] - dj * kernel[i * n + j];
    const double b2 = b - e_j - di * kernel[i * n + j] - dj * kernel[j * n + j];
    if (alpha_i_new > 0.0 && alpha_i_new < c) {
      b = b1;
    } else if (alpha_j_new > 0.0 && alpha_j_new < c) {
      b = b2;
    } else {
      b = (b1 + b2) / 2.0;
    }
    return true;
  };

  Rng rng(derive_seed(seed, 0x53564d));
  auto examine = [&](std::size_t i) {
    const double e_i = decision(i) - y[i];
    const bool violates = (y[i] * e_i < -tol && alpha[i] < c) ||
                          (y[i] * e_i > tol && alpha[i] > 0.0);
    if (!violates) return false;
    // random partner first, then every partner from a random start
    std::size_t j = rng.bounded(n - 1);
    if (j >= i) ++j;
    if (take_step(i, j)) return true;
    const std::size_t start = rng.bounded(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (take_step(i, (start + k) % n)) return true;
    }
    return false;
  };

  bool examine_all = true;
  for (int pass = 0; pass < params.max_passes; ++pass) {
    int changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!examine_all && (alpha[i] <= 0.0 || alpha[i] >= c)) continue;
      if (examine(i)) ++changed;
    }
    if (changed == 0) {
      if (examine_all) break;  // a clean full sweep certifies the KKT check
      examine_all = true;
    } else {
      examine_all = false;
    }
  }
  model.bias = b;
  model.train_rows = rows;
  model.train_labels = labels;
}

// --- logistic regression / lasso (proximal full-batch gradient) ----------

void train_logistic(Model& model, const Matrix& rows,
                    const std::vector<int>& labels) {
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  const LogisticParams& params = model.spec.logistic;

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> grad(d);
  for (int iter = 0; iter < params.iterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < d; ++j) z += w[j] * rows[i][j];
      const double err = sigmoid(z) - static_cast<double>(labels[i]);
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * rows[i][j];
      grad_b += err;
    }
    const double scale = params.learning_rate / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
      w[j] -= scale * grad[j];
      if (params.l1 > 0.0) {
        // soft threshold (bias is not penalized)
        const double shrink = params.learning_rate * params.l1;
        if (w[j] > shrink) {
          w[j] -= shrink;
        } else if (w[j] < -shrink) {
          w[j] += shrink;
        } else {
          w[j] = 0.0;
        }
      }
    }
    b -= scale * grad_b;
  }
  model.weights = std::move(w);
  model.intercept = b;
}

// --- gradient-boosted regression trees on logistic loss ------------------

struct TreeBuilder {
  const Matrix& rows;
  const std::vector<double>& residual;  // y - p
  const std::vector<double>& hessian;   // p (1 - p)
  int max_depth;
  std::vector<GbtNode> nodes;

  int build(std::vector<std::size_t> indices, int depth) {
    double sum_r = 0.0, sum_h = 0.0;
    for (std::size_t i : indices) {
      sum_r += residual[i];
      sum_h += hessian[i];
    }
    const double leaf_value = sum_r / std::max(sum_h, 1e-12);

    if (depth >= max_depth || indices.size() < 2) {
      return make_leaf(leaf_value);
    }

    // best squared-error split of the residuals
    const std::size_t d = rows.front().size();
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    double total_sq = 0.0;
    const double total_mean = sum_r / static_cast<double>(indices.size());
    for (std::size_t i : indices) {
      total_sq += (residual[i] - total_mean) * (residual[i] - total_mean);
    }

    std::vector<std::size_t> order = indices;
    for (std::size_t j = 0; j < d; ++j) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a][j] != rows[b][j]) return rows[a][j] < rows[b][j];
        return a < b;
      });
      double left_sum = 0.0, left_sq = 0.0;
      std::size_t left_n = 0;
      const double total_sum = sum_r;
      double total_sum_sq = 0.0;
      for (std::size_t i : indices) total_sum_sq += residual[i] * residual[i];
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const double r = residual[order[k]];
        left_sum += r;
        left_sq += r * r;
        ++left_n;
        if (rows[order[k]][j] == rows[order[k + 1]][j]) continue;
        const std::size_t right_n = order.size() - left_n;
        const double right_sum = total_sum - left_sum;
        const double right_sq = total_sum_sq - left_sq;
        const double left_var = left_sq - left_sum * left_sum / static_cast<double>(left_n);
        const double right_var =
            right_sq - right_sum * right_sum / static_cast<double>(right_n);
        const double gain = total_sq - left_var - right_var;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(j);
          best_threshold = (rows[order[k]][j] + rows[order[k + 1]][j]) / 2.0;
        }
      }
    }
    if (best_feature < 0) return make_leaf(leaf_value);

    std::vector<std::size_t> left, right;
    for (std::size_t i : indices) {
      (rows[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left
                                                                         : right)
          .push_back(i);
    }
    if (left.empty() || right.empty()) return make_leaf(leaf_value);

    const int node_id = static_cast<int>(nodes.size());
    nodes.push_back({best_feature, best_threshold, 0.0, -1, -1});
    const int left_id = build(std::move(left), depth + 1);
    const int right_id = build(std::move(right), depth + 1);
    nodes[static_cast<std::size_t>(node_id)].left = left_id;
    nodes[static_cast<std::size_t>(node_id)].right = right_id;
    return node_id;
  }

  int make_leaf(double value) {
    nodes.push_back({-1, 0.0, value, -1, -1});
    return static_cast<int>(nodes.size() - 1);
  }
};

double eval_tree(const std::vector<GbtNode>& nodes, std::span<const double> row) {
  // the root is the first node created for the tree
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
    const GbtNode& node = nodes[static_cast<std::size_t>(at)];
    at = row[static_cast<std::size_t>(node.feature)] <= node.threshold
             ? node.left
             : node.right;
  }
  return nodes[static_cast<std::size_t>(at)].value;
}

void train_gbt(Model& model, const Matrix& rows, const std::vector<int>& labels,
               std::uint64_t seed) {
  const std::size_t n = rows.size();
  const GbtParams& params = model.spec.gbt;

  double positive = 0.0;
  for (int label : labels) positive += label;
  const double p0 =
      std::clamp(positive / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
  model.prior = std::log(p0 / (1.0 - p0));

  std::vector<double> score(n, model.prior);
  std::vector<double> residual(n), hessian(n);
  Rng rng(derive_seed(seed, 0x474254));
  for (int round = 0; round < params.trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(score[i]);
      residual[i] = static_cast<double>(labels[i]) - p;
      hessian[i] = std::max(p * (1.0 - p), 1e-12);
    }
    std::vector<std::size_t> indices;
    if (params.subsample < 1.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < params.subsample) indices.push_back(i);
      }
      if (indices.size() < 2) {
        indices.resize(n);
        std::iota(indices.begin(), indices.end(), 0);
      }
    } else {
      indices.resize(n);
      std::iota(indices.begin(), indices.end(), 0);
    }

    TreeBuilder builder{rows, residual, hessian, params.max_depth, {}};
    builder.build(std::move(indices), 0);
    for (std::size_t i = 0; i < n; ++i) {
      score[i] += params.learning_rate * eval_tree(builder.nodes, rows[i]);
    }
    model.trees.push_back(std::move(builder.nodes));
  }
}

}  // namespace

Model train(const ModelSpec& spec, const Matrix& rows,
            const std::vector<int>& labels, std::uint64_t seed,
            std::span<const std::string> feature_names) {
  if (rows.size() < 2) {
    throw ValidationError("training needs at least 2 rows");
  }
  if (rows.size() != labels.size()) {
    throw ValidationError("row/label count mismatch");
  }
  const bool has_positive = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool has_negative = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!has_positive || !has_negative) {
    throw ValidationError("training set contains a single class");
  }

  Model model;
  model.spec = spec;
  model.seed = seed;
  model.feature_names.assign(feature_names.begin(), feature_names.end());
  switch (spec.kind) {
    case ModelKind::SvmRbf:
      train_svm(model, rows, labels, seed);
      break;
    case ModelKind::Logistic:
    case ModelKind::Lasso:
      train_logistic(model, rows, labels);
      break;
    case ModelKind::Gbt:
      train_gbt(model, rows, labels, seed);
      break;
    case ModelKind::Nn1:
      model.train_rows = rows;
      model.train_labels = labels;
      break;
  }
  return model;
}

double Model::decision_value(std::span<const double> row) const {
  switch (spec.kind) {
    case ModelKind::SvmRbf: {
      double f = bias;
      for (std::size_t k = 0; k < train_rows.size(); ++k) {
        if (alpha[k] > 0.0) {
          const double y = train_labels[k] == 1 ? 1.0 : -1.0;
          f += alpha[k] * y * rbf_kernel(train_rows[k], row, gamma);
        }
      }
      return f;
    }
    case ModelKind::Logistic:
    case ModelKind::Lasso: {
      double z = intercept;
      for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * row[j];
      return sigmoid(z);
    }
    case ModelKind::Gbt: {
      double s = prior;
      for (const auto& tree : trees) {
        s += spec.gbt.learning_rate * eval_tree(tree, row);
      }
      return sigmoid(s);
    }
    case ModelKind::Nn1: {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_idx = 0;
      for (std::size_t k = 0; k < train_rows.size(); ++k) {
        double ss = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
          const double diff = train_rows[k][j] - row[j];
          ss += diff * diff;
        }
        if (ss < best) {
          best = ss;
          best_idx = k;
        }
      }
      return train_labels.empty() ? 0.0
                                  : static_cast<double>(train_labels[best_idx]);
    }
  }
  return 0.0;
}

Prediction Model::predict(std::span<const double> row) const {
  Prediction out;
  out.score = decision_value(row);
  switch (spec.kind) {
    case ModelKind::SvmRbf:
      out.label = out.score >= 0.0 ? 1 : 0;
      break;
    default:
      out.label = out.score >= 0.5 ? 1 : 0;
      break;
  }
  return out;
}

double svm_dual_objective(const Model& model) {
  const Matrix& rows = model.train_rows;
  const std::size_t n = rows.size();
  double obj = 0.0;
  for (double a : model.alpha) obj += a;
  for (std::size_t i = 0; i < n; ++i) {
    if (model.alpha[i] == 0.0) continue;
    const double yi = model.train_labels[i] == 1 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (model.alpha[j] == 0.0) continue;
      const double yj = model.train_labels[j] == 1 ? 1.0 : -1.0;
      obj -= 0.5 * model.alpha[i] * model.alpha[j] * yi * yj *
             rbf_kernel(rows[i], rows[j], model.gamma);
    }
  }
  return obj;
}

double svm_kkt_violation(const Model& model) {
  const double c = model.spec.svm.c;
  double worst = 0.0;
  for (std::size_t i = 0; i < model.train_rows.size(); ++i) {
    const double y = model.train_labels[i] == 1 ? 1.0 : -1.0;
    const double margin = y * model.decision_value(model.train_rows[i]);
    const double a = model.alpha[i];
    double violation = 0.0;
    if (a <= 1e-9) {
      violation = std::max(0.0, 1.0 - margin);
    } else if (a >= c - 1e-9) {
      violation = std::max(0.0, margin - 1.0);
    } else {
      violation = std::abs(margin - 1.0);
    }
    worst = std::max(worst, violation);
  }
  return worst;
}

std::vector<Prediction> loocv(const Dataset& dataset, const ModelSpec& spec,
                              std::uint64_t seed, const LoocvOptions& options) {
  const std::size_t n = dataset.rows.size();
  if (n < 2) throw ValidationError("leave-one-out needs at least 2 rows");

  ScalerState global_scaler;
  if (options.global_scaling) global_scaler = fit_scaler(dataset.rows);

  std::vector<Prediction> out(n);
  parallel_for(n, options.threads, [&](std::size_t hold_out) {
    Matrix train_rows;
    std::vector<int> train_labels;
    train_rows.reserve(n - 1);
    train_labels.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == hold_out) continue;
      train_rows.push_back(dataset.rows[i]);
      train_labels.push_back(dataset.labels[i]);
    }
    const bool single_class =
        std::find(train_labels.begin(), train_labels.end(), 1) ==
            train_labels.end() ||
        std::find(train_labels.begin(), train_labels.end(), 0) ==
            train_labels.end();
    if (single_class) {
      out[hold_out] = Prediction{0, 0.0, true};
      return;
    }
    const ScalerState scaler =
        options.global_scaling ? global_scaler : fit_scaler(train_rows);
    Matrix scaled;
    scaled.reserve(train_rows.size());
    for (const auto& row : train_rows) scaled.push_back(scaler.transform(row));
    const Model model = train(spec, scaled, train_labels,
                              derive_seed(seed, hold_out),
                              dataset.feature_names);
    out[hold_out] = model.predict(scaler.transform(dataset.rows[hold_out]));
  });
  return out;
}

ClassifierReport metrics(std::span<const Prediction> predictions,
                         std::span<const int> labels, std::size_t n_ci) {
  if (predictions.empty() || predictions.size() != labels.size()) {
    throw ValidationError("metrics need equal-length, non-empty inputs");
  }
  ClassifierReport report;
  report.n = predictions.size();
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool truth_positive = labels[i] == 1;
    // an abstention never claims the positive class
    const bool predicted_positive = !predictions[i].abstain && predictions[i].label == 1;
    if (predictions[i].abstain) ++report.abstained;
    if (predicted_positive && truth_positive) {
      ++report.tp;
    } else if (predicted_positive) {
      ++report.fp;
    } else if (truth_positive) {
      ++report.fn;
    } else {
      ++report.tn;
    }
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  report.precision = ratio(report.tp, report.tp + report.fp);
  report.recall = ratio(report.tp, report.tp + report.fn);
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall /
                        (report.precision + report.recall)
                  : 0.0;
  report.accuracy = ratio(report.tp + report.tn, report.n);
  report.precision_ci = wald_ci_halfwidth(report.precision, n_ci);
  report.recall_ci = wald_ci_halfwidth(report.recall, n_ci);
  report.f1_ci = wald_ci_halfwidth(report.f1, n_ci);
  report.accuracy_ci = wald_ci_halfwidth(report.accuracy, n_ci);
  return report;
}

ImportanceReport permutation_importance(const Model& model, const Matrix& rows,
                                        const std::vector<int>& labels,
                                        std::span<const std::string> names,
                                        int repeats, std::uint64_t seed,
                                        int threads) {
  if (rows.size() < 2) {
    throw ValidationError("permutation importance needs at least 2 rows");
  }
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();

  auto f1_of = [&](const Matrix& data) {
    std::vector<Prediction> preds(n);
    for (std::size_t i = 0; i < n; ++i) preds[i] = model.predict(data[i]);
    return metrics(preds, labels, n).f1;
  };

  ImportanceReport report;
  report.baseline_f1 = f1_of(rows);
  report.features.resize(d);

  parallel_for(d, threads, [&](std::size_t j) {
    FeatureImportance& entry = report.features[j];
    entry.feature = j < names.size() ? names[j] : "f" + std::to_string(j);
    if (repeats <= 0) return;
    std::vector<double> drops;
    drops.reserve(static_cast<std::size_t>(repeats));
    for (int rep = 0; rep < repeats; ++rep) {
      Rng rng(derive_seed(seed, j * 1000003ull + static_cast<std::uint64_t>(rep)));
      std::vector<double> column(n);
      for (std::size_t i = 0; i < n; ++i) column[i] = rows[i][j];
      rng.shuffle(column);
      Matrix shuffled = rows;
      for (std::size_t i = 0; i < n; ++i) shuffled[i][j] = column[i];
      drops.push_back(report.baseline_f1 - f1_of(shuffled));
    }
    const auto desc = descriptive(drops);
    entry.mean_drop = desc->mean;
    entry.std_drop = desc->stddev;
  });
  return report;
}

// --- model serialization ---------------------------------------------------

std::string Model::to_json() const {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["kind"] = trajkit::to_string(spec.kind);
  doc["seed"] = seed;
  doc["feature_names"] = feature_names;
  ordered_json hp;
  switch (spec.kind) {
    case ModelKind::SvmRbf:
      hp["c"] = spec.svm.c;
      hp["gamma"] = spec.svm.gamma;
      hp["tol"] = spec.svm.tol;
      hp["max_passes"] = spec.svm.max_passes;
      break;
    case ModelKind::Gbt:
      hp["trees"] = spec.gbt.trees;
      hp["max_depth"] = spec.gbt.max_depth;
      hp["learning_rate"] = spec.gbt.learning_rate;
      hp["subsample"] = spec.gbt.subsample;
      break;
    case ModelKind::Logistic:
    case ModelKind::Lasso:
      hp["learning_rate"] = spec.logistic.learning_rate;
      hp["iterations"] = spec.logistic.iterations;
      hp["l1"] = spec.logistic.l1;
      break;
    case ModelKind::Nn1:
      break;
  }
  doc["hyperparameters"] = std::move(hp);

  switch (spec.kind) {
    case ModelKind::SvmRbf:
    case ModelKind::Nn1:
      doc["rows"] = train_rows;
      doc["labels"] = train_labels;
      if (spec.kind == ModelKind::SvmRbf) {
        doc["alpha"] = alpha;
        doc["bias"] = bias;
        doc["gamma"] = gamma;
      }
      break;
    case ModelKind::Logistic:
    case ModelKind::Lasso:
      doc["weights"] = weights;
      doc["intercept"] = intercept;
      break;
    case ModelKind::Gbt: {
      doc["prior"] = prior;
      json all_trees = json::array();
      for (const auto& tree : trees) {
        json nodes = json::array();
        for (const GbtNode& node : tree) {
          nodes.push_back({node.feature, node.threshold, node.value, node.left,
                           node.right});
        }
        all_trees.push_back(std::move(nodes));
      }
      doc["trees"] = std::move(all_trees);
      break;
    }
  }
  return doc.dump(2);
}

Model Model::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model document is not valid JSON: ") +
                          e.what());
  }
  Model model;
  try {
    model.spec.kind = model_kind_from_string(doc.at("kind").get<std::string>());
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.feature_names = doc.value("feature_names", std::vector<std::string>());
    const json& hp = doc.at("hyperparameters");
    switch (model.spec.kind) {
      case ModelKind::SvmRbf:
        model.spec.svm.c = hp.at("c").get<double>();
        model.spec.svm.gamma = hp.at("gamma").get<double>();
        model.spec.svm.tol = hp.at("tol").get<double>();
        model.spec.svm.max_passes = hp.at("max_passes").get<int>();
        model.train_rows = doc.at("rows").get<Matrix>();
        model.train_labels = doc.at("labels").get<std::vector<int>>();
        model.alpha = doc.at("alpha").get<std::vector<double>>();
        model.bias = doc.at("bias").get<double>();
        model.gamma = doc.at("gamma").get<double>();
        break;
      case ModelKind::Nn1:
        model.train_rows = doc.at("rows").get<Matrix>();
        model.train_labels = doc.at("labels").get<std::vector<int>>();
        break;
      case ModelKind::Logistic:
      case ModelKind::Lasso:
        model.spec.logistic.learning_rate = hp.at("learning_rate").get<double>();
        model.spec.logistic.iterations = hp.at("iterations").get<int>();
        model.spec.logistic.l1 = hp.at("l1").get<double>();
        model.weights = doc.at("weights").get<std::vector<double>>();
        model.intercept = doc.at("intercept").get<double>();
        break;
      case ModelKind::Gbt: {
        model.spec.gbt.trees = hp.at("trees").get<int>();
        model.spec.gbt.max_depth = hp.at("max_depth").get<int>();
        model.spec.gbt.learning_rate = hp.at("learning_rate").get<double>();
        model.spec.gbt.subsample = hp.at("subsample").get<double>();
        model.prior = doc.at("prior").get<double>();
        for (const json& tree : doc.at("trees")) {
          std::vector<GbtNode> nodes;
          for (const json& n : tree) {
            nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(),
                             n.at(2).get<double>(), n.at(3).get<int>(),
                             n.at(4).get<int>()});
          }
          model.trees.push_back(std::move(nodes));
        }
        break;
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") + e.what());
  }
  return model;
}

}  // namespace trajkit
