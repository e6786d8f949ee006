// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "trajkit/parallel.hpp"

namespace trajkit {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(FeatureSubset subset) {
  switch (subset) {
    case FeatureSubset::All: return "all";
    case FeatureSubset::Movement: return "movement";
    case FeatureSubset::Social: return "social";
  }
  return "all";
}

const std::array<std::string, 8>& distribution_feature_names() {
  static const std::array<std::string, 8> names = {
      "linear_path_length", "walking_speed",
      "direction_change",   "velocity_entropy",
      "orientation_change_entropy", "levy_mu",
      "levy_c",             "group_count"};
  return names;
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InternalError("cannot write output file '" + path.string() + "'");
  }
  out << text;
}

fs::path ensure_out_dir(const RunConfig& config) {
  const fs::path dir = config.paths.out_dir.empty() ? "." : config.paths.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw InternalError("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

bool want_csv(const RunConfig& c) { return c.format != OutputFormat::Json; }
bool want_json(const RunConfig& c) { return c.format != OutputFormat::Csv; }

CohortLabel label_for(const Manifest& manifest, const std::string& cohort_id,
                      double threshold) {
  const Cohort* cohort = manifest.find_cohort(cohort_id);
  if (!cohort) {
    throw ValidationError("unknown cohort '" + cohort_id + "' in manifest");
  }
  return label_cohort(*cohort, threshold);
}

}  // namespace

SessionExtract extract_session(const BreakSession& session,
                               const FloorPlan& plan, const RunConfig& config) {
  SessionExtract extract;
  extract.movement = movement_pools(session, config.movement);
  extract.social = social_pools(session, plan, config.social);
  return extract;
}

PipelineInputs load_inputs(const RunConfig& config) {
  PipelineInputs inputs;
  if (config.paths.manifest.empty()) {
    throw MissingInputError("no manifest path configured");
  }
  if (config.paths.tracks.empty()) {
    throw MissingInputError("no tracks path configured");
  }
  inputs.manifest = load_manifest(config.paths.manifest);
  inputs.plan = config.paths.floorplan.empty()
                    ? default_floorplan()
                    : load_floorplan(config.paths.floorplan);
  inputs.sessions =
      load_sessions(config.paths.tracks, config.tracks_format, inputs.manifest,
                    inputs.plan, config.ingest, &inputs.ingest_report);
  return inputs;
}

FeatureTable extract_feature_table(std::span<const BreakSession> sessions,
                                   const Manifest& manifest,
                                   const FloorPlan& plan,
                                   const RunConfig& config) {
  if (sessions.empty()) throw ValidationError("no sessions");
  FeatureTable table;
  table.feature_names = feature_names_for(plan);
  table.rows.resize(sessions.size());
  parallel_for(sessions.size(), config.threads, [&](std::size_t i) {
    const BreakSession& session = sessions[i];
    SessionFeatureVector& row = table.rows[i];
    row.session_id = session.session_id;
    row.cohort_id = session.cohort_id;
    row.label = label_for(manifest, session.cohort_id, config.moca_threshold);

    const MovementFeatures movement =
        movement_features(session, config.movement);
    const SocialFeatures social =
        social_features(session, plan, config.social);
    for (std::size_t j = 0; j < kMovementFeatureCount; ++j) {
      row.values[j] = movement.values[j];
      row.defined[j] = movement.defined[j];
    }
    for (std::size_t j = 0; j < kSocialFeatureCount; ++j) {
      row.values[kMovementFeatureCount + j] = social.values[j];
      row.defined[kMovementFeatureCount + j] = social.defined[j];
    }
  });
  return table;
}

std::vector<StatsRow> compute_stats(std::span<const BreakSession> sessions,
                                    const Manifest& manifest,
                                    const FloorPlan& plan,
                                    const RunConfig& config) {
  if (sessions.empty()) throw ValidationError("no sessions");
  std::vector<SessionExtract> extracts(sessions.size());
  parallel_for(sessions.size(), config.threads, [&](std::size_t i) {
    extracts[i] = extract_session(sessions[i], plan, config);
  });

  // pool the raw values (not their session summaries) by class label
  std::array<std::vector<double>, 8> high_pool, low_pool;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const CohortLabel label =
        label_for(manifest, sessions[i].cohort_id, config.moca_threshold);
    auto& pools = label == CohortLabel::High ? high_pool : low_pool;
    const MovementPools& m = extracts[i].movement;
    const std::vector<double>* sources[8] = {
        &m.lpl,     &m.speed,  &m.direction_change, &m.velocity_entropy,
        &m.orientation_entropy, &m.levy_mu, &m.levy_c,
        &extracts[i].social.overall};
    for (std::size_t f = 0; f < 8; ++f) {
      pools[f].insert(pools[f].end(), sources[f]->begin(), sources[f]->end());
    }
  }

  std::vector<StatsRow> rows;
  for (std::size_t f = 0; f < 8; ++f) {
    StatsRow row;
    row.feature = distribution_feature_names()[f];
    row.n_high = high_pool[f].size();
    row.n_low = low_pool[f].size();
    if (row.n_high > 0 && row.n_low > 0) {
      row.result = wilcoxon_rank_sum(high_pool[f], low_pool[f]);
    } else {
      row.result.p_two_sided = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Dataset dataset_from_table(const FeatureTable& table, FeatureSubset subset) {
  std::size_t begin = 0, end = kFeatureCount;
  if (subset == FeatureSubset::Movement) {
    end = kMovementFeatureCount;
  } else if (subset == FeatureSubset::Social) {
    begin = kMovementFeatureCount;
  }
  Dataset dataset;
  dataset.feature_names.assign(table.feature_names.begin() + static_cast<std::ptrdiff_t>(begin),
                               table.feature_names.begin() + static_cast<std::ptrdiff_t>(end));
  for (const SessionFeatureVector& row : table.rows) {
    std::vector<double> values;
    values.reserve(end - begin);
    for (std::size_t j = begin; j < end; ++j) {
      values.push_back(row.defined[j] ? row.values[j]
                                      : std::numeric_limits<double>::quiet_NaN());
    }
    dataset.rows.push_back(std::move(values));
    dataset.labels.push_back(row.label == CohortLabel::Low ? 1 : 0);
  }
  return dataset;
}

std::vector<ClassifyRow> classify_table(const FeatureTable& table,
                                        const RunConfig& config) {
  if (table.rows.size() < 2) {
    throw ValidationError("classification needs at least 2 sessions");
  }
  std::vector<ClassifyRow> rows;
  for (FeatureSubset subset : kReportSubsets) {
    const Dataset dataset = dataset_from_table(table, subset);
    for (ModelKind kind : kReportModels) {
      LoocvOptions options;
      options.global_scaling = config.global_scaling;
      options.threads = config.threads;
      const std::vector<Prediction> predictions =
          loocv(dataset, config.model_spec(kind), config.seed, options);
      ClassifyRow row;
      row.subset = subset;
      row.model = kind;
      row.report = metrics(predictions, dataset.labels, dataset.labels.size());
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ImportanceRow> importance_table(const FeatureTable& table,
                                            const RunConfig& config) {
  if (table.rows.size() < 2) {
    throw ValidationError("importance needs at least 2 sessions");
  }
  std::vector<ImportanceRow> rows;
  for (FeatureSubset subset : kReportSubsets) {
    const Dataset dataset = dataset_from_table(table, subset);
    const ScalerState scaler = fit_scaler(dataset.rows);
    Matrix scaled;
    scaled.reserve(dataset.rows.size());
    for (const auto& row : dataset.rows) scaled.push_back(scaler.transform(row));
    const Model model =
        train(config.model_spec(config.importance_model), scaled,
              dataset.labels, config.seed, dataset.feature_names);
    const ImportanceReport report = permutation_importance(
        model, scaled, dataset.labels, dataset.feature_names,
        config.importance_repeats, config.seed, config.threads);
    ImportanceRow row;
    row.subset = subset;
    row.baseline_f1 = report.baseline_f1;
    row.features = report.features;
    rows.push_back(std::move(row));

    const fs::path dir = ensure_out_dir(config);
    write_text_file(dir / (std::string("model_") + to_string(subset) + ".json"),
                    model.to_json() + "\n");
  }
  return rows;
}

void write_feature_table(const FeatureTable& table, const RunConfig& config) {
  const fs::path dir = ensure_out_dir(config);
  const std::string hash = config.hash();
  if (want_json(config)) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["config_hash"] = hash;
    doc["feature_names"] = table.feature_names;
    doc["sessions"] = json::array();
    for (const SessionFeatureVector& row : table.rows) {
      ordered_json obj;
      obj["session_id"] = row.session_id;
      obj["cohort_id"] = row.cohort_id;
      obj["label"] = to_string(row.label);
      ordered_json values = json::array();
      for (std::size_t j = 0; j < kFeatureCount; ++j) {
        if (row.defined[j]) {
          values.push_back(row.values[j]);
        } else {
          values.push_back(nullptr);
        }
      }
      obj["values"] = std::move(values);
      doc["sessions"].push_back(std::move(obj));
    }
    write_text_file(dir / "features.json", doc.dump(2) + "\n");
  }
  if (want_csv(config)) {
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << "session_id,cohort_id,label";
    for (const std::string& name : table.feature_names) out << ',' << name;
    out << "\n";
    for (const SessionFeatureVector& row : table.rows) {
      out << row.session_id << ',' << row.cohort_id << ',' << to_string(row.label);
      for (std::size_t j = 0; j < kFeatureCount; ++j) {
        out << ',' << (row.defined[j] ? format_double(row.values[j]) : "");
      }
      out << "\n";
    }
    write_text_file(dir / "features.csv", out.str());
  }
}

FeatureTable load_feature_table(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) {
    throw MissingInputError("cannot open feature table '" + json_path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("feature table is not valid JSON: ") +
                          e.what());
  }
  FeatureTable table;
  try {
    table.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    if (table.feature_names.size() != kFeatureCount) {
      throw ValidationError("feature table must have " +
                            std::to_string(kFeatureCount) + " features");
    }
    for (const json& obj : doc.at("sessions")) {
      SessionFeatureVector row;
      row.session_id = obj.at("session_id").get<std::string>();
      row.cohort_id = obj.at("cohort_id").get<std::string>();
      row.label = cohort_label_from_string(obj.at("label").get<std::string>());
      const json& values = obj.at("values");
      if (values.size() != kFeatureCount) {
        throw ValidationError("feature row for '" + row.session_id +
                              "' has the wrong width");
      }
      for (std::size_t j = 0; j < kFeatureCount; ++j) {
        if (values[j].is_null()) {
          row.values[j] = std::numeric_limits<double>::quiet_NaN();
          row.defined[j] = false;
        } else {
          row.values[j] = values[j].get<double>();
          row.defined[j] = true;
        }
      }
      table.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed feature table: ") + e.what());
  }
  return table;
}

void write_stats(std::span<const StatsRow> rows, const RunConfig& config) {
  const fs::path dir = ensure_out_dir(config);
  const std::string hash = config.hash();
  if (want_json(config)) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["config_hash"] = hash;
    doc["rows"] = json::array();
    for (const StatsRow& row : rows) {
      ordered_json obj;
      obj["feature"] = row.feature;
      obj["n_high"] = row.n_high;
      obj["n_low"] = row.n_low;
      obj["statistic"] = row.result.statistic;
      obj["z"] = row.result.z;
      if (std::isnan(row.result.p_two_sided)) {
        obj["p"] = nullptr;
        obj["significant"] = false;
      } else {
        obj["p"] = row.result.p_two_sided;
        obj["significant"] = row.result.p_two_sided < 0.05;
      }
      obj["method"] =
          row.result.method == RankSumResult::Method::Exact ? "exact" : "normal";
      doc["rows"].push_back(std::move(obj));
    }
    write_text_file(dir / "stats.json", doc.dump(2) + "\n");
  }
  if (want_csv(config)) {
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << "feature,n_high,n_low,statistic,z,p,method,significant\n";
    for (const StatsRow& row : rows) {
      out << row.feature << ',' << row.n_high << ',' << row.n_low << ','
          << format_double(row.result.statistic) << ','
          << format_double(row.result.z) << ','
          << format_double(row.result.p_two_sided) << ','
          << (row.result.method == RankSumResult::Method::Exact ? "exact"
                                                                : "normal")
          << ','
          << (!std::isnan(row.result.p_two_sided) &&
                      row.result.p_two_sided < 0.05
                  ? "true"
                  : "false")
          << "\n";
    }
    write_text_file(dir / "stats.csv", out.str());
  }
}

void write_classification(std::span<const ClassifyRow> rows, std::size_t n,
                          const RunConfig& config) {
  const fs::path dir = ensure_out_dir(config);
  const std::string hash = config.hash();
  if (want_json(config)) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["config_hash"] = hash;
    doc["n_sessions"] = n;
    doc["positive_class"] = "low";
    doc["rows"] = json::array();
    for (const ClassifyRow& row : rows) {
      ordered_json obj;
      obj["feature_set"] = to_string(row.subset);
      obj["model"] = to_string(row.model);
      obj["precision"] = row.report.precision;
      obj["precision_ci"] = row.report.precision_ci;
      obj["recall"] = row.report.recall;
      obj["recall_ci"] = row.report.recall_ci;
      obj["f1"] = row.report.f1;
      obj["f1_ci"] = row.report.f1_ci;
      obj["accuracy"] = row.report.accuracy;
      obj["accuracy_ci"] = row.report.accuracy_ci;
      obj["tp"] = row.report.tp;
      obj["fp"] = row.report.fp;
      obj["tn"] = row.report.tn;
      obj["fn"] = row.report.fn;
      obj["abstained"] = row.report.abstained;
      doc["rows"].push_back(std::move(obj));
    }
    write_text_file(dir / "classification.json", doc.dump(2) + "\n");
  }
  if (want_csv(config)) {
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << "feature_set,model,precision,precision_ci,recall,recall_ci,f1,f1_ci,"
           "accuracy,accuracy_ci,tp,fp,tn,fn,abstained\n";
    for (const ClassifyRow& row : rows) {
      out << to_string(row.subset) << ',' << to_string(row.model) << ','
          << format_double(row.report.precision) << ','
          << format_double(row.report.precision_ci) << ','
          << format_double(row.report.recall) << ','
          << format_double(row.report.recall_ci) << ','
          << format_double(row.report.f1) << ','
          << format_double(row.report.f1_ci) << ','
          << format_double(row.report.accuracy) << ','
          << format_double(row.report.accuracy_ci) << ',' << row.report.tp
          << ',' << row.report.fp << ',' << row.report.tn << ','
          << row.report.fn << ',' << row.report.abstained << "\n";
    }
    write_text_file(dir / "classification.csv", out.str());
  }
}

void write_importance(std::span<const ImportanceRow> rows,
                      const RunConfig& config) {
  const fs::path dir = ensure_out_dir(config);
  const std::string hash = config.hash();
  if (want_json(config)) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["config_hash"] = hash;
    doc["model"] = to_string(config.importance_model);
    doc["rows"] = json::array();
    for (const ImportanceRow& row : rows) {
      for (const FeatureImportance& f : row.features) {
        ordered_json obj;
        obj["feature_set"] = to_string(row.subset);
        obj["feature"] = f.feature;
        obj["mean_drop"] = f.mean_drop;
        obj["std_drop"] = f.std_drop;
        obj["baseline_f1"] = row.baseline_f1;
        doc["rows"].push_back(std::move(obj));
      }
    }
    write_text_file(dir / "importance.json", doc.dump(2) + "\n");
  }
  if (want_csv(config)) {
    std::ostringstream out;
    out << "# config_hash=" << hash << "\n";
    out << "feature_set,feature,mean_drop,std_drop,baseline_f1\n";
    for (const ImportanceRow& row : rows) {
      for (const FeatureImportance& f : row.features) {
        out << to_string(row.subset) << ',' << f.feature << ','
            << format_double(f.mean_drop) << ',' << format_double(f.std_drop)
            << ',' << format_double(row.baseline_f1) << "\n";
      }
    }
    write_text_file(dir / "importance.csv", out.str());
  }
}

void Pipeline::run(const std::string& command) {
  if (command == "simulate") {
    cmd_simulate();
  } else if (command == "features") {
    cmd_features();
  } else if (command == "stats") {
    cmd_stats();
  } else if (command == "classify") {
    cmd_classify();
  } else if (command == "importance") {
    cmd_importance();
  } else if (command == "report") {
    cmd_report();
  } else {
    throw ValidationError("unknown command '" + command + "'");
  }
}

void Pipeline::cmd_simulate() {
  const FloorPlan plan = config_.paths.floorplan.empty()
                             ? default_floorplan()
                             : load_floorplan(config_.paths.floorplan);
  const Study study =
      simulate_study(config_.profile_high, config_.profile_low, config_.study,
                     plan, config_.noise, config_.seed);

  const fs::path dir = ensure_out_dir(config_);
  {
    std::ostringstream out;
    write_tracks(out, study.sessions, config_.tracks_format);
    const char* name = config_.tracks_format == TracksFormat::Jsonl
                           ? "tracks.jsonl"
                           : "tracks.csv";
    write_text_file(dir / name, out.str());
  }
  {
    std::ostringstream out;
    write_manifest(out, study.manifest);
    write_text_file(dir / "manifest.json", out.str());
  }
  {
    std::ostringstream out;
    write_floorplan(out, plan);
    write_text_file(dir / "floorplan.json", out.str());
  }
}

FeatureTable Pipeline::cmd_features() {
  const PipelineInputs inputs = load_inputs(config_);
  FeatureTable table = extract_feature_table(inputs.sessions, inputs.manifest,
                                             inputs.plan, config_);
  write_feature_table(table, config_);
  return table;
}

std::vector<StatsRow> Pipeline::cmd_stats() {
  const PipelineInputs inputs = load_inputs(config_);
  std::vector<StatsRow> rows =
      compute_stats(inputs.sessions, inputs.manifest, inputs.plan, config_);
  write_stats(rows, config_);
  return rows;
}

FeatureTable Pipeline::feature_table_for_learning() {
  if (!config_.paths.features.empty()) {
    return load_feature_table(config_.paths.features);
  }
  const fs::path written = fs::path(config_.paths.out_dir) / "features.json";
  std::error_code ec;
  if (fs::exists(written, ec)) {
    return load_feature_table(written.string());
  }
  const PipelineInputs inputs = load_inputs(config_);
  return extract_feature_table(inputs.sessions, inputs.manifest, inputs.plan,
                               config_);
}

std::vector<ClassifyRow> Pipeline::cmd_classify() {
  const FeatureTable table = feature_table_for_learning();
  std::vector<ClassifyRow> rows = classify_table(table, config_);
  write_classification(rows, table.rows.size(), config_);
  return rows;
}

std::vector<ImportanceRow> Pipeline::cmd_importance() {
  const FeatureTable table = feature_table_for_learning();
  std::vector<ImportanceRow> rows = importance_table(table, config_);
  write_importance(rows, config_);
  return rows;
}

void Pipeline::cmd_report() {
  const PipelineInputs inputs = load_inputs(config_);
  const FeatureTable table = extract_feature_table(
      inputs.sessions, inputs.manifest, inputs.plan, config_);
  write_feature_table(table, config_);
  write_stats(
      compute_stats(inputs.sessions, inputs.manifest, inputs.plan, config_),
      config_);

  // consume the freshly written table so the file path is what downstream
  // stages actually see
  const fs::path written = fs::path(config_.paths.out_dir) / "features.json";
  const FeatureTable reloaded = want_json(config_)
                                    ? load_feature_table(written.string())
                                    : table;
  std::vector<ClassifyRow> classify_rows = classify_table(reloaded, config_);
  write_classification(classify_rows, reloaded.rows.size(), config_);
  write_importance(importance_table(reloaded, config_), config_);
}

}  // namespace trajkit
