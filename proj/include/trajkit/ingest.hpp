// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajkit/model.hpp"

namespace trajkit {

// Wire form of one tracked observation, one record per line.
struct TrackRecord {
  std::string session_id;
  std::string track_id;
  std::int64_t t = 0;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> orientation;
};

enum class TracksFormat { Jsonl, Csv };

const char* to_string(TracksFormat format);
TracksFormat tracks_format_from_string(std::string_view s);

struct SessionInfo {
  std::string session_id;
  std::string cohort_id;
  std::string date;  // informational
  std::int64_t duration_s = 0;
};

// Sidecar file mapping sessions to cohorts and durations, plus the cohort
// score lists used for labeling.
struct Manifest {
  int schema_version = 1;
  std::vector<Cohort> cohorts;
  std::vector<SessionInfo> sessions;

  const SessionInfo* find_session(const std::string& session_id) const;
  const Cohort* find_cohort(const std::string& cohort_id) const;
};

struct IngestOptions {
  double gap_split_s = 2.0;      // longer timestamp gaps split the trajectory
  double bounds_margin_m = 1.0;  // slack before a position is out of bounds
};

// Drop accounting: records_in == records_kept + dropped_out_of_bounds
// + dropped_short after assembly.
struct IngestReport {
  std::size_t records_in = 0;
  std::size_t records_kept = 0;
  std::size_t dropped_out_of_bounds = 0;
  std::size_t dropped_short = 0;  // gap-split pieces with fewer than 2 samples
};

// Parses one records file. Malformed lines and duplicate (session, track, t)
// triples raise ValidationError with the offending line number.
std::vector<TrackRecord> parse_track_records(std::istream& in,
                                             TracksFormat format);

// Groups records by session and track, sorts by time, applies the
// out-of-bounds and gap-split rules and validates the result. Every session
// in the manifest appears in the output, in manifest order; records naming a
// session absent from the manifest are an error.
std::vector<BreakSession> assemble_sessions(std::vector<TrackRecord> records,
                                            const Manifest& manifest,
                                            const FloorPlan& plan,
                                            const IngestOptions& options = {},
                                            IngestReport* report = nullptr);

std::vector<BreakSession> parse_tracks(std::istream& in, TracksFormat format,
                                       const Manifest& manifest,
                                       const FloorPlan& plan,
                                       const IngestOptions& options = {},
                                       IngestReport* report = nullptr);

void write_tracks(std::ostream& out, std::span<const BreakSession> sessions,
                  TracksFormat format);

Manifest parse_manifest(std::istream& in);
Manifest load_manifest(const std::string& path);
void write_manifest(std::ostream& out, const Manifest& manifest);

FloorPlan parse_floorplan(std::istream& in);
FloorPlan load_floorplan(const std::string& path);
void write_floorplan(std::ostream& out, const FloorPlan& plan);

std::vector<BreakSession> load_sessions(const std::string& tracks_path,
                                        TracksFormat format,
                                        const Manifest& manifest,
                                        const FloorPlan& plan,
                                        const IngestOptions& options = {},
                                        IngestReport* report = nullptr);

}  // namespace trajkit
