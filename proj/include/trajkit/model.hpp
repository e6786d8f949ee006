// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trajkit {

// Error taxonomy mirrored by the C API status codes (and CLI exit codes).
class MissingInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2D& a, const Point2D& b);

struct BoundingBox {
  Point2D lo;
  Point2D hi;
  bool contains(const Point2D& p, double margin = 0.0) const;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
};

// One 1 Hz observation of one person. `t` is in whole seconds since the
// start of the break session; `orientation` is the body orientation in
// degrees in [0, 360) when the upstream tracker produced one.
struct TrackSample {
  std::int64_t t = 0;
  Point2D position;
  std::optional<double> orientation;
};

// One person-track within one session. Track ids carry no identity across
// sessions.
struct Trajectory {
  std::string track_id;
  std::vector<TrackSample> samples;
};

// Throws ValidationError unless timestamps are strictly increasing, there
// are at least two samples, no timestamp gap exceeds `max_gap_s`, and all
// values are finite / in range.
void validate_trajectory(const Trajectory& traj, double max_gap_s);

struct Region {
  std::string name;
  std::vector<Point2D> polygon;  // simple, implicitly closed
};

double polygon_area(const std::vector<Point2D>& polygon);
bool polygon_is_simple(const std::vector<Point2D>& polygon);
bool point_in_polygon(const Point2D& p, const std::vector<Point2D>& polygon);
bool polygons_overlap(const std::vector<Point2D>& a, const std::vector<Point2D>& b);

// A set of non-overlapping named regions plus a catch-all region named
// "other" (always kept last). Points that fall in no named region belong
// to "other".
class FloorPlan {
 public:
  FloorPlan() = default;

  // Validates the named regions and appends "other" if absent. When the
  // config supplies no explicit "other" polygon, the catch-all covers
  // `bounds` (or the named regions' bounding box if no bounds are given).
  static FloorPlan create(std::vector<Region> regions,
                          std::optional<BoundingBox> bounds = std::nullopt);

  const std::vector<Region>& regions() const { return regions_; }
  std::size_t region_count() const { return regions_.size(); }
  const BoundingBox& bounds() const { return bounds_; }

  // First named region containing the point, in declared order; "other"
  // as fallback.
  std::size_t region_index_of(const Point2D& p) const;
  const std::string& region_of(const Point2D& p) const;

 private:
  std::vector<Region> regions_;  // named regions first, "other" last
  BoundingBox bounds_;
};

struct BreakSession {
  std::string session_id;
  std::string cohort_id;
  std::int64_t duration_s = 0;  // 900 or 1800 nominal
  std::vector<Trajectory> trajectories;
};

void validate_session(const BreakSession& session, double max_gap_s);

struct Cohort {
  std::string cohort_id;
  std::vector<int> moca_scores;  // 30-point screening scores, each in [0, 30]
};

void validate_cohort(const Cohort& cohort);

enum class CohortLabel { High, Low };

const char* to_string(CohortLabel label);
CohortLabel cohort_label_from_string(std::string_view s);

inline constexpr double kDefaultMocaThreshold = 21.0;

// High iff the mean score is strictly above the threshold.
CohortLabel label_cohort(const Cohort& cohort,
                         double threshold = kDefaultMocaThreshold);

inline constexpr std::size_t kMovementFeatureCount = 14;
inline constexpr std::size_t kSocialFeatureCount = 18;
inline constexpr std::size_t kFeatureCount =
    kMovementFeatureCount + kSocialFeatureCount;
inline constexpr std::size_t kRegionCount = 8;  // 7 named areas + "other"

// Region inventory of the default floor plan, in feature order.
const std::array<std::string, kRegionCount>& canonical_regions();

// The fixed 32-entry feature order: 14 movement features (mean/std pairs of
// linear path length, walking speed, direction change, velocity entropy,
// orientation-change entropy, Levy mu, Levy c) followed by 18 social
// features (mean/std of the overall normalized group count, then mean/std
// per region).
const std::array<std::string, kFeatureCount>& canonical_feature_names();

// Same order with the given plan's region names substituted. The plan must
// have exactly kRegionCount regions.
std::vector<std::string> feature_names_for(const FloorPlan& plan);

// The 1700 m2 default layout: gym, dining, kitchen, lounge, activity,
// tech_bar and staff rectangles inside a 50 x 34 m footprint, with the
// connecting corridor falling into "other".
FloorPlan default_floorplan();

struct SessionFeatureVector {
  std::string session_id;
  std::string cohort_id;
  CohortLabel label = CohortLabel::High;
  std::array<double, kFeatureCount> values{};  // NaN where masked
  std::array<bool, kFeatureCount> defined{};
};

}  // namespace trajkit
