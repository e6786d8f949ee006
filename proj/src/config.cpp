// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trajkit {

using nlohmann::json;

const char* to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "both";
}

OutputFormat output_format_from_string(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "both") return OutputFormat::Both;
  throw ValidationError("unknown output format '" + std::string(s) + "'");
}

namespace {

json profile_to_json(const CohortProfile& p) {
  json j;
  j["label"] = to_string(p.label);
  j["bout_model"] =
      p.bout_length.kind == StepLengthModel::Kind::Levy ? "levy" : "gaussian";
  j["bout_a"] = p.bout_length.a;
  j["bout_b"] = p.bout_length.b;
  j["speed_mean"] = p.speed_mean;
  j["speed_std"] = p.speed_std;
  j["turn_sigma_deg"] = p.turn_sigma_deg;
  j["pause_prob"] = p.pause_prob;
  j["group_rate_per_person_min"] = p.group_rate_per_person_min;
  j["group_size_weights"] = p.group_size_weights;
  j["region_weights"] = p.region_weights;
  j["dwell_mean_s"] = p.dwell_mean_s;
  return j;
}

void profile_from_json(const json& j, CohortProfile& p) {
  if (j.contains("label")) {
    p.label = cohort_label_from_string(j["label"].get<std::string>());
  }
  if (j.contains("bout_model")) {
    const std::string kind = j["bout_model"].get<std::string>();
    if (kind == "levy") {
      p.bout_length.kind = StepLengthModel::Kind::Levy;
    } else if (kind == "gaussian") {
      p.bout_length.kind = StepLengthModel::Kind::Gaussian;
    } else {
      throw ValidationError("unknown bout model '" + kind + "'");
    }
  }
  if (j.contains("bout_a")) p.bout_length.a = j["bout_a"].get<double>();
  if (j.contains("bout_b")) p.bout_length.b = j["bout_b"].get<double>();
  if (j.contains("speed_mean")) p.speed_mean = j["speed_mean"].get<double>();
  if (j.contains("speed_std")) p.speed_std = j["speed_std"].get<double>();
  if (j.contains("turn_sigma_deg")) p.turn_sigma_deg = j["turn_sigma_deg"].get<double>();
  if (j.contains("pause_prob")) p.pause_prob = j["pause_prob"].get<double>();
  if (j.contains("group_rate_per_person_min")) {
    p.group_rate_per_person_min = j["group_rate_per_person_min"].get<double>();
  }
  if (j.contains("group_size_weights")) {
    p.group_size_weights = j["group_size_weights"].get<std::vector<double>>();
  }
  if (j.contains("region_weights")) {
    p.region_weights = j["region_weights"].get<std::vector<double>>();
  }
  if (j.contains("dwell_mean_s")) p.dwell_mean_s = j["dwell_mean_s"].get<double>();
}

json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = 1;
  j["paths"]["tracks"] = c.paths.tracks;
  j["paths"]["manifest"] = c.paths.manifest;
  j["paths"]["floorplan"] = c.paths.floorplan;
  j["paths"]["features"] = c.paths.features;
  j["paths"]["out_dir"] = c.paths.out_dir;
  j["tracks_format"] = to_string(c.tracks_format);
  j["ingest"]["gap_split_s"] = c.ingest.gap_split_s;
  j["ingest"]["bounds_margin_m"] = c.ingest.bounds_margin_m;
  j["movement"]["split_deg"] = c.movement.split_deg;
  j["movement"]["stationary_m"] = c.movement.stationary_m;
  j["movement"]["entropy_m"] = c.movement.entropy_m;
  j["movement"]["entropy_r_factor"] = c.movement.entropy_r_factor;
  j["movement"]["fencepost_correct"] = c.movement.fencepost_correct;
  j["movement"]["use_body_orientation"] = c.movement.use_body_orientation;
  j["movement"]["levy_min_samples"] = c.movement.levy_min_samples;
  j["social"]["d_max_m"] = c.social.d_max_m;
  j["social"]["facing_deg"] = c.social.facing_deg;
  j["social"]["min_persist_s"] = c.social.min_persist_s;
  j["social"]["stationary_m"] = c.social.stationary_m;
  j["moca_threshold"] = c.moca_threshold;
  j["models"]["svm"]["c"] = c.svm.c;
  j["models"]["svm"]["gamma"] = c.svm.gamma;
  j["models"]["svm"]["tol"] = c.svm.tol;
  j["models"]["svm"]["max_passes"] = c.svm.max_passes;
  j["models"]["gbt"]["trees"] = c.gbt.trees;
  j["models"]["gbt"]["max_depth"] = c.gbt.max_depth;
  j["models"]["gbt"]["learning_rate"] = c.gbt.learning_rate;
  j["models"]["gbt"]["subsample"] = c.gbt.subsample;
  j["models"]["logistic"]["learning_rate"] = c.logistic.learning_rate;
  j["models"]["logistic"]["iterations"] = c.logistic.iterations;
  j["models"]["lasso_l1"] = c.lasso_l1;
  j["learn"]["global_scaling"] = c.global_scaling;
  j["learn"]["importance_repeats"] = c.importance_repeats;
  j["learn"]["importance_model"] = to_string(c.importance_model);
  j["simulate"]["profile_high"] = profile_to_json(c.profile_high);
  j["simulate"]["profile_low"] = profile_to_json(c.profile_low);
  j["simulate"]["noise"]["position_sigma_m"] = c.noise.position_sigma_m;
  j["simulate"]["noise"]["orientation_sigma_deg"] = c.noise.orientation_sigma_deg;
  j["simulate"]["noise"]["correlation_time_s"] = c.noise.correlation_time_s;
  j["simulate"]["noise"]["dropout_prob"] = c.noise.dropout_prob;
  j["simulate"]["high_sessions"] = c.study.high_sessions;
  j["simulate"]["low_sessions"] = c.study.low_sessions;
  j["simulate"]["durations"] = c.study.durations;
  j["simulate"]["n_people"] = c.study.session.n_people;
  j["simulate"]["companion_fraction"] = c.study.session.companion_fraction;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["format"] = to_string(c.format);
  return j;
}

void config_from_json(const json& j, RunConfig& c) {
  if (j.contains("schema_version") && j["schema_version"].get<int>() != 1) {
    throw ValidationError("unsupported config schema_version");
  }
  if (j.contains("paths")) {
    const json& p = j["paths"];
    if (p.contains("tracks")) c.paths.tracks = p["tracks"].get<std::string>();
    if (p.contains("manifest")) c.paths.manifest = p["manifest"].get<std::string>();
    if (p.contains("floorplan")) c.paths.floorplan = p["floorplan"].get<std::string>();
    if (p.contains("features")) c.paths.features = p["features"].get<std::string>();
    if (p.contains("out_dir")) c.paths.out_dir = p["out_dir"].get<std::string>();
  }
  if (j.contains("tracks_format")) {
    c.tracks_format = tracks_format_from_string(j["tracks_format"].get<std::string>());
  }
  if (j.contains("ingest")) {
    const json& g = j["ingest"];
    if (g.contains("gap_split_s")) c.ingest.gap_split_s = g["gap_split_s"].get<double>();
    if (g.contains("bounds_margin_m")) {
      c.ingest.bounds_margin_m = g["bounds_margin_m"].get<double>();
    }
  }
  if (j.contains("movement")) {
    const json& m = j["movement"];
    if (m.contains("split_deg")) c.movement.split_deg = m["split_deg"].get<double>();
    if (m.contains("stationary_m")) c.movement.stationary_m = m["stationary_m"].get<double>();
    if (m.contains("entropy_m")) c.movement.entropy_m = m["entropy_m"].get<int>();
    if (m.contains("entropy_r_factor")) {
      c.movement.entropy_r_factor = m["entropy_r_factor"].get<double>();
    }
    if (m.contains("fencepost_correct")) {
      c.movement.fencepost_correct = m["fencepost_correct"].get<bool>();
    }
    if (m.contains("use_body_orientation")) {
      c.movement.use_body_orientation = m["use_body_orientation"].get<bool>();
    }
    if (m.contains("levy_min_samples")) {
      c.movement.levy_min_samples = m["levy_min_samples"].get<int>();
    }
  }
  if (j.contains("social")) {
    const json& s = j["social"];
    if (s.contains("d_max_m")) c.social.d_max_m = s["d_max_m"].get<double>();
    if (s.contains("facing_deg")) c.social.facing_deg = s["facing_deg"].get<double>();
    if (s.contains("min_persist_s")) c.social.min_persist_s = s["min_persist_s"].get<int>();
    if (s.contains("stationary_m")) c.social.stationary_m = s["stationary_m"].get<double>();
  }
  if (j.contains("moca_threshold")) c.moca_threshold = j["moca_threshold"].get<double>();
  if (j.contains("models")) {
    const json& m = j["models"];
    if (m.contains("svm")) {
      const json& s = m["svm"];
      if (s.contains("c")) c.svm.c = s["c"].get<double>();
      if (s.contains("gamma")) c.svm.gamma = s["gamma"].get<double>();
      if (s.contains("tol")) c.svm.tol = s["tol"].get<double>();
      if (s.contains("max_passes")) c.svm.max_passes = s["max_passes"].get<int>();
    }
    if (m.contains("gbt")) {
      const json& g = m["gbt"];
      if (g.contains("trees")) c.gbt.trees = g["trees"].get<int>();
      if (g.contains("max_depth")) c.gbt.max_depth = g["max_depth"].get<int>();
      if (g.contains("learning_rate")) c.gbt.learning_rate = g["learning_rate"].get<double>();
      if (g.contains("subsample")) c.gbt.subsample = g["subsample"].get<double>();
    }
    if (m.contains("logistic")) {
      const json& l = m["logistic"];
      if (l.contains("learning_rate")) {
        c.logistic.learning_rate = l["learning_rate"].get<double>();
      }
      if (l.contains("iterations")) c.logistic.iterations = l["iterations"].get<int>();
    }
    if (m.contains("lasso_l1")) c.lasso_l1 = m["lasso_l1"].get<double>();
  }
  if (j.contains("learn")) {
    const json& l = j["learn"];
    if (l.contains("global_scaling")) c.global_scaling = l["global_scaling"].get<bool>();
    if (l.contains("importance_repeats")) {
      c.importance_repeats = l["importance_repeats"].get<int>();
    }
    if (l.contains("importance_model")) {
      c.importance_model =
          model_kind_from_string(l["importance_model"].get<std::string>());
    }
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    if (s.contains("profile_high")) profile_from_json(s["profile_high"], c.profile_high);
    if (s.contains("profile_low")) profile_from_json(s["profile_low"], c.profile_low);
    if (s.contains("noise")) {
      const json& n = s["noise"];
      if (n.contains("position_sigma_m")) {
        c.noise.position_sigma_m = n["position_sigma_m"].get<double>();
      }
      if (n.contains("orientation_sigma_deg")) {
        c.noise.orientation_sigma_deg = n["orientation_sigma_deg"].get<double>();
      }
      if (n.contains("correlation_time_s")) {
        c.noise.correlation_time_s = n["correlation_time_s"].get<double>();
      }
      if (n.contains("dropout_prob")) c.noise.dropout_prob = n["dropout_prob"].get<double>();
    }
    if (s.contains("high_sessions")) c.study.high_sessions = s["high_sessions"].get<int>();
    if (s.contains("low_sessions")) c.study.low_sessions = s["low_sessions"].get<int>();
    if (s.contains("durations")) {
      c.study.durations = s["durations"].get<std::vector<std::int64_t>>();
    }
    if (s.contains("n_people")) c.study.session.n_people = s["n_people"].get<int>();
    if (s.contains("companion_fraction")) {
      c.study.session.companion_fraction = s["companion_fraction"].get<double>();
    }
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  if (j.contains("format")) {
    c.format = output_format_from_string(j["format"].get<std::string>());
  }
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig config;
  try {
    config_from_json(doc, config);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return config;
}

std::string RunConfig::to_json_text(int indent) const {
  return config_to_json(*this).dump(indent);
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
  json doc = config_to_json(*this);
  json* node = &doc;
  std::string key = dotted_key;
  std::size_t dot;
  while ((dot = key.find('.')) != std::string::npos) {
    const std::string head = key.substr(0, dot);
    if (!node->contains(head)) {
      throw ValidationError("unknown config key '" + dotted_key + "'");
    }
    node = &(*node)[head];
    key = key.substr(dot + 1);
  }
  if (!node->contains(key)) {
    throw ValidationError("unknown config key '" + dotted_key + "'");
  }
  json& leaf = (*node)[key];
  try {
    switch (leaf.type()) {
      case json::value_t::string:
        leaf = value;
        break;
      case json::value_t::boolean:
        if (value == "true" || value == "1") {
          leaf = true;
        } else if (value == "false" || value == "0") {
          leaf = false;
        } else {
          throw ValidationError("expected a boolean for '" + dotted_key + "'");
        }
        break;
      case json::value_t::number_unsigned:
        leaf = static_cast<std::uint64_t>(std::stoull(value));
        break;
      case json::value_t::number_integer:
        leaf = static_cast<std::int64_t>(std::stoll(value));
        break;
      case json::value_t::number_float:
        leaf = std::stod(value);
        break;
      case json::value_t::array:
        leaf = json::parse(value);
        break;
      default:
        throw ValidationError("config key '" + dotted_key + "' is not settable");
    }
  } catch (const std::invalid_argument&) {
    throw ValidationError("bad value '" + value + "' for '" + dotted_key + "'");
  } catch (const std::out_of_range&) {
    throw ValidationError("value '" + value + "' out of range for '" + dotted_key + "'");
  } catch (const json::exception& e) {
    throw ValidationError("bad value for '" + dotted_key + "': " + e.what());
  }
  config_from_json(doc, *this);
}

void RunConfig::apply_env_overrides(const char* prefix) {
  // every leaf path maps to PREFIX + upper-snake key
  const json doc = config_to_json(*this);
  std::vector<std::pair<std::string, std::string>> pending;
  const std::function<void(const json&, const std::string&)> walk =
      [&](const json& node, const std::string& path) {
        if (node.is_object()) {
          for (auto it = node.begin(); it != node.end(); ++it) {
            walk(it.value(), path.empty() ? it.key() : path + "." + it.key());
          }
          return;
        }
        if (path == "schema_version") return;
        std::string env_key = prefix;
        for (char ch : path) {
          env_key += ch == '.' ? '_' : static_cast<char>(std::toupper(ch));
        }
        if (const char* value = std::getenv(env_key.c_str())) {
          pending.emplace_back(path, value);
        }
      };
  walk(doc, "");
  for (const auto& [key, value] : pending) set(key, value);
}

std::string RunConfig::hash() const {
  // FNV-1a 64 over the canonical (sorted-key) serialization
  const std::string text = config_to_json(*this).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelSpec RunConfig::model_spec(ModelKind kind) const {
  ModelSpec spec = ModelSpec::make(kind);
  spec.svm = svm;
  spec.gbt = gbt;
  spec.logistic = logistic;
  if (kind == ModelKind::Lasso) {
    spec.logistic.l1 = lasso_l1;
  } else {
    spec.logistic.l1 = 0.0;
  }
  return spec;
}

}  // namespace trajkit
