// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trajkit {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw ValidationError("line " + std::to_string(line_no) + ": " + what);
}

double parse_double_field(std::string_view text, std::size_t line_no,
                          const char* field) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    line_error(line_no, std::string("bad value for '") + field + "'");
  }
  return value;
}

std::int64_t parse_int_field(std::string_view text, std::size_t line_no,
                             const char* field) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    line_error(line_no, std::string("bad value for '") + field + "'");
  }
  return value;
}

TrackRecord record_from_json_line(const std::string& line,
                                  std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    line_error(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) line_error(line_no, "expected a JSON object");
  TrackRecord rec;
  try {
    rec.session_id = obj.at("session_id").get<std::string>();
    rec.track_id = obj.at("track_id").get<std::string>();
    rec.t = obj.at("t").get<std::int64_t>();
    rec.x = obj.at("x").get<double>();
    rec.y = obj.at("y").get<double>();
    if (obj.contains("orientation") && !obj["orientation"].is_null()) {
      rec.orientation = obj["orientation"].get<double>();
    }
  } catch (const json::exception& e) {
    line_error(line_no, std::string("missing or mistyped field: ") + e.what());
  }
  return rec;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

constexpr const char* kCsvHeader = "session_id,track_id,t,x,y,orientation";

TrackRecord record_from_csv_line(const std::string& line, std::size_t line_no) {
  const auto fields = split_csv(line);
  if (fields.size() != 6) {
    line_error(line_no, "expected 6 comma-separated fields");
  }
  TrackRecord rec;
  rec.session_id = std::string(fields[0]);
  rec.track_id = std::string(fields[1]);
  if (rec.session_id.empty() || rec.track_id.empty()) {
    line_error(line_no, "empty session_id or track_id");
  }
  rec.t = parse_int_field(fields[2], line_no, "t");
  rec.x = parse_double_field(fields[3], line_no, "x");
  rec.y = parse_double_field(fields[4], line_no, "y");
  if (!fields[5].empty()) {
    rec.orientation = parse_double_field(fields[5], line_no, "orientation");
  }
  return rec;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

const char* to_string(TracksFormat format) {
  return format == TracksFormat::Jsonl ? "jsonl" : "csv";
}

TracksFormat tracks_format_from_string(std::string_view s) {
  if (s == "jsonl") return TracksFormat::Jsonl;
  if (s == "csv") return TracksFormat::Csv;
  throw ValidationError("unknown tracks format '" + std::string(s) + "'");
}

const SessionInfo* Manifest::find_session(const std::string& session_id) const {
  for (const SessionInfo& s : sessions) {
    if (s.session_id == session_id) return &s;
  }
  return nullptr;
}

const Cohort* Manifest::find_cohort(const std::string& cohort_id) const {
  for (const Cohort& c : cohorts) {
    if (c.cohort_id == cohort_id) return &c;
  }
  return nullptr;
}

std::vector<TrackRecord> parse_track_records(std::istream& in,
                                             TracksFormat format) {
  std::vector<TrackRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (format == TracksFormat::Csv && !header_seen) {
      header_seen = true;
      if (line != kCsvHeader) {
        line_error(line_no, std::string("expected header '") + kCsvHeader + "'");
      }
      continue;
    }
    records.push_back(format == TracksFormat::Jsonl
                          ? record_from_json_line(line, line_no)
                          : record_from_csv_line(line, line_no));
  }
  return records;
}

std::vector<BreakSession> assemble_sessions(std::vector<TrackRecord> records,
                                            const Manifest& manifest,
                                            const FloorPlan& plan,
                                            const IngestOptions& options,
                                            IngestReport* report) {
  IngestReport counts;
  counts.records_in = records.size();

  std::map<std::string, std::size_t> session_index;
  std::vector<BreakSession> sessions;
  sessions.reserve(manifest.sessions.size());
  for (const SessionInfo& info : manifest.sessions) {
    if (session_index.count(info.session_id)) {
      throw ValidationError("manifest lists session '" + info.session_id +
                            "' twice");
    }
    session_index[info.session_id] = sessions.size();
    BreakSession s;
    s.session_id = info.session_id;
    s.cohort_id = info.cohort_id;
    s.duration_s = info.duration_s;
    sessions.push_back(std::move(s));
  }

  // group by (session, track), keep time-sorted, reject duplicates
  std::map<std::pair<std::string, std::string>, std::vector<TrackRecord>> tracks;
  std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
  for (TrackRecord& rec : records) {
    if (!session_index.count(rec.session_id)) {
      throw ValidationError("records reference session '" + rec.session_id +
                            "' which is not in the manifest");
    }
    if (!seen.insert({rec.session_id, rec.track_id, rec.t}).second) {
      throw ValidationError("duplicate record for session '" + rec.session_id +
                            "' track '" + rec.track_id + "' at t=" +
                            std::to_string(rec.t));
    }
    tracks[{rec.session_id, rec.track_id}].push_back(std::move(rec));
  }

  for (auto& [key, recs] : tracks) {
    std::sort(recs.begin(), recs.end(),
              [](const TrackRecord& a, const TrackRecord& b) { return a.t < b.t; });

    // drop positions outside the inflated floor-plan bounding box
    std::vector<TrackRecord> in_bounds;
    in_bounds.reserve(recs.size());
    for (TrackRecord& rec : recs) {
      if (plan.bounds().contains({rec.x, rec.y}, options.bounds_margin_m)) {
        in_bounds.push_back(std::move(rec));
      } else {
        ++counts.dropped_out_of_bounds;
      }
    }

    // split at gaps, keep pieces with at least two samples
    std::size_t piece_start = 0;
    int piece_no = 0;
    auto flush_piece = [&](std::size_t end) {  // [piece_start, end)
      const std::size_t size = end - piece_start;
      if (size < 2) {
        counts.dropped_short += size;
        return;
      }
      Trajectory traj;
      traj.track_id = piece_no == 0
                          ? key.second
                          : key.second + "#" + std::to_string(piece_no);
      ++piece_no;
      traj.samples.reserve(size);
      for (std::size_t i = piece_start; i < end; ++i) {
        const TrackRecord& rec = in_bounds[i];
        TrackSample sample;
        sample.t = rec.t;
        sample.position = {rec.x, rec.y};
        sample.orientation = rec.orientation;
        traj.samples.push_back(sample);
      }
      counts.records_kept += size;
      sessions[session_index.at(key.first)].trajectories.push_back(
          std::move(traj));
    };
    for (std::size_t i = 1; i < in_bounds.size(); ++i) {
      const double gap =
          static_cast<double>(in_bounds[i].t - in_bounds[i - 1].t);
      if (gap > options.gap_split_s) {
        flush_piece(i);
        piece_start = i;
      }
    }
    if (!in_bounds.empty()) flush_piece(in_bounds.size());
  }

  for (BreakSession& session : sessions) {
    std::sort(session.trajectories.begin(), session.trajectories.end(),
              [](const Trajectory& a, const Trajectory& b) {
                return a.track_id < b.track_id;
              });
    validate_session(session, options.gap_split_s);
  }
  if (report) *report = counts;
  return sessions;
}

std::vector<BreakSession> parse_tracks(std::istream& in, TracksFormat format,
                                       const Manifest& manifest,
                                       const FloorPlan& plan,
                                       const IngestOptions& options,
                                       IngestReport* report) {
  return assemble_sessions(parse_track_records(in, format), manifest, plan,
                           options, report);
}

void write_tracks(std::ostream& out, std::span<const BreakSession> sessions,
                  TracksFormat format) {
  if (format == TracksFormat::Csv) out << kCsvHeader << "\n";
  for (const BreakSession& session : sessions) {
    for (const Trajectory& traj : session.trajectories) {
      for (const TrackSample& s : traj.samples) {
        if (format == TracksFormat::Jsonl) {
          ordered_json obj;
          obj["session_id"] = session.session_id;
          obj["track_id"] = traj.track_id;
          obj["t"] = s.t;
          obj["x"] = s.position.x;
          obj["y"] = s.position.y;
          if (s.orientation) obj["orientation"] = *s.orientation;
          out << obj.dump() << "\n";
        } else {
          out << session.session_id << ',' << traj.track_id << ',' << s.t << ','
              << format_double(s.position.x) << ',' << format_double(s.position.y)
              << ',' << (s.orientation ? format_double(*s.orientation) : "")
              << "\n";
        }
      }
    }
  }
}

Manifest parse_manifest(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw ValidationError("manifest needs a schema_version field");
  }
  if (doc["schema_version"].get<int>() != kSchemaVersion) {
    throw ValidationError("unsupported manifest schema_version");
  }
  Manifest manifest;
  try {
    for (const json& c : doc.value("cohorts", json::array())) {
      Cohort cohort;
      cohort.cohort_id = c.at("cohort_id").get<std::string>();
      cohort.moca_scores = c.at("moca_scores").get<std::vector<int>>();
      validate_cohort(cohort);
      manifest.cohorts.push_back(std::move(cohort));
    }
    for (const json& s : doc.value("sessions", json::array())) {
      SessionInfo info;
      info.session_id = s.at("session_id").get<std::string>();
      info.cohort_id = s.at("cohort_id").get<std::string>();
      info.date = s.value("date", std::string());
      info.duration_s = s.at("duration_s").get<std::int64_t>();
      if (info.duration_s <= 0) {
        throw ValidationError("session '" + info.session_id +
                              "' has a non-positive duration");
      }
      manifest.sessions.push_back(std::move(info));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  for (const SessionInfo& info : manifest.sessions) {
    if (!manifest.find_cohort(info.cohort_id)) {
      throw ValidationError("session '" + info.session_id +
                            "' references unknown cohort '" + info.cohort_id +
                            "'");
    }
  }
  return manifest;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open manifest file '" + path + "'");
  return parse_manifest(in);
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["cohorts"] = json::array();
  for (const Cohort& c : manifest.cohorts) {
    ordered_json obj;
    obj["cohort_id"] = c.cohort_id;
    obj["moca_scores"] = c.moca_scores;
    doc["cohorts"].push_back(std::move(obj));
  }
  doc["sessions"] = json::array();
  for (const SessionInfo& s : manifest.sessions) {
    ordered_json obj;
    obj["session_id"] = s.session_id;
    obj["cohort_id"] = s.cohort_id;
    obj["date"] = s.date;
    obj["duration_s"] = s.duration_s;
    doc["sessions"].push_back(std::move(obj));
  }
  out << doc.dump(2) << "\n";
}

FloorPlan parse_floorplan(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("floor plan is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw ValidationError("floor plan needs a schema_version field");
  }
  if (doc["schema_version"].get<int>() != kSchemaVersion) {
    throw ValidationError("unsupported floor plan schema_version");
  }
  std::vector<Region> regions;
  std::optional<BoundingBox> bounds;
  try {
    if (doc.contains("bounds")) {
      const json& b = doc["bounds"];
      bounds = BoundingBox{{b.at(0).at(0).get<double>(), b.at(0).at(1).get<double>()},
                           {b.at(1).at(0).get<double>(), b.at(1).at(1).get<double>()}};
    }
    for (const json& r : doc.value("regions", json::array())) {
      Region region;
      region.name = r.at("name").get<std::string>();
      for (const json& p : r.at("polygon")) {
        region.polygon.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
      regions.push_back(std::move(region));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed floor plan: ") + e.what());
  }
  if (!bounds && regions.empty()) {
    // sensible default footprint so an empty config still loads
    bounds = BoundingBox{{0.0, 0.0}, {50.0, 34.0}};
  }
  return FloorPlan::create(std::move(regions), bounds);
}

FloorPlan load_floorplan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open floor plan file '" + path + "'");
  return parse_floorplan(in);
}

void write_floorplan(std::ostream& out, const FloorPlan& plan) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["bounds"] = {{plan.bounds().lo.x, plan.bounds().lo.y},
                   {plan.bounds().hi.x, plan.bounds().hi.y}};
  doc["regions"] = json::array();
  for (const Region& r : plan.regions()) {
    ordered_json obj;
    obj["name"] = r.name;
    obj["polygon"] = json::array();
    for (const Point2D& p : r.polygon) obj["polygon"].push_back({p.x, p.y});
    doc["regions"].push_back(std::move(obj));
  }
  out << doc.dump(2) << "\n";
}

std::vector<BreakSession> load_sessions(const std::string& tracks_path,
                                        TracksFormat format,
                                        const Manifest& manifest,
                                        const FloorPlan& plan,
                                        const IngestOptions& options,
                                        IngestReport* report) {
  std::ifstream in(tracks_path);
  if (!in) throw MissingInputError("cannot open tracks file '" + tracks_path + "'");
  return parse_tracks(in, format, manifest, plan, options, report);
}

}  // namespace trajkit
