// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace trajkit {

double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool BoundingBox::contains(const Point2D& p, double margin) const {
  return p.x >= lo.x - margin && p.x <= hi.x + margin &&
         p.y >= lo.y - margin && p.y <= hi.y + margin;
}

void validate_trajectory(const Trajectory& traj, double max_gap_s) {
  if (traj.samples.size() < 2) {
    throw ValidationError("trajectory '" + traj.track_id +
                          "' has fewer than 2 samples");
  }
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const TrackSample& s = traj.samples[i];
    if (s.t < 0) {
      throw ValidationError("trajectory '" + traj.track_id +
                            "' has a negative timestamp");
    }
    if (!std::isfinite(s.position.x) || !std::isfinite(s.position.y)) {
      throw ValidationError("trajectory '" + traj.track_id +
                            "' has a non-finite position");
    }
    if (s.orientation && (!std::isfinite(*s.orientation) ||
                          *s.orientation < 0.0 || *s.orientation >= 360.0)) {
      throw ValidationError("trajectory '" + traj.track_id +
                            "' has an orientation outside [0, 360)");
    }
    if (i > 0) {
      const std::int64_t gap = s.t - traj.samples[i - 1].t;
      if (gap <= 0) {
        throw ValidationError("trajectory '" + traj.track_id +
                              "' has non-increasing timestamps at t=" +
                              std::to_string(s.t));
      }
      if (static_cast<double>(gap) > max_gap_s) {
        throw ValidationError("trajectory '" + traj.track_id +
                              "' has a gap larger than the split threshold");
      }
    }
  }
}

void validate_session(const BreakSession& session, double max_gap_s) {
  if (session.duration_s <= 0) {
    throw ValidationError("session '" + session.session_id +
                          "' has a non-positive duration");
  }
  std::set<std::string> ids;
  for (const Trajectory& traj : session.trajectories) {
    validate_trajectory(traj, max_gap_s);
    if (traj.samples.back().t >= session.duration_s) {
      throw ValidationError("session '" + session.session_id +
                            "' has samples at or beyond its duration");
    }
  }
}

void validate_cohort(const Cohort& cohort) {
  if (cohort.moca_scores.empty()) {
    throw ValidationError("cohort '" + cohort.cohort_id +
                          "' has an empty score list");
  }
  for (int s : cohort.moca_scores) {
    if (s < 0 || s > 30) {
      throw ValidationError("cohort '" + cohort.cohort_id +
                            "' has a score outside [0, 30]");
    }
  }
}

const char* to_string(CohortLabel label) {
  return label == CohortLabel::High ? "high" : "low";
}

CohortLabel cohort_label_from_string(std::string_view s) {
  if (s == "high") return CohortLabel::High;
  if (s == "low") return CohortLabel::Low;
  throw ValidationError("unknown cohort label '" + std::string(s) + "'");
}

CohortLabel label_cohort(const Cohort& cohort, double threshold) {
  validate_cohort(cohort);
  const double sum =
      std::accumulate(cohort.moca_scores.begin(), cohort.moca_scores.end(), 0.0);
  const double mean = sum / static_cast<double>(cohort.moca_scores.size());
  return mean > threshold ? CohortLabel::High : CohortLabel::Low;
}

double polygon_area(const std::vector<Point2D>& polygon) {
  // shoelace, absolute value
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D& a = polygon[i];
    const Point2D& b = polygon[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

namespace {

int orientation_sign(const Point2D& a, const Point2D& b, const Point2D& c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 1e-12) return 1;
  if (v < -1e-12) return -1;
  return 0;
}

bool on_segment(const Point2D& a, const Point2D& b, const Point2D& p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_intersect(const Point2D& a, const Point2D& b, const Point2D& c,
                        const Point2D& d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// proper crossing only: shared endpoints / touching boundaries do not count
bool segments_cross(const Point2D& a, const Point2D& b, const Point2D& c,
                    const Point2D& d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool point_strictly_inside(const Point2D& p, const std::vector<Point2D>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D& a = poly[i];
    const Point2D& b = poly[(i + 1) % n];
    if (orientation_sign(a, b, p) == 0 && on_segment(a, b, p)) return false;
  }
  return point_in_polygon(p, poly);
}

}  // namespace

bool polygon_is_simple(const std::vector<Point2D>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D& a = polygon[i];
    const Point2D& b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges, they always share an endpoint
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const Point2D& c = polygon[j];
      const Point2D& d = polygon[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_polygon(const Point2D& p, const std::vector<Point2D>& polygon) {
  // ray casting; points on the boundary count as inside
  const std::size_t n = polygon.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2D& a = polygon[i];
    const Point2D& b = polygon[j];
    if (orientation_sign(a, b, p) == 0 && on_segment(a, b, p)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool polygons_overlap(const std::vector<Point2D>& a,
                      const std::vector<Point2D>& b) {
  // interiors intersect iff an edge properly crosses, or one polygon holds
  // a vertex of the other strictly inside (touching boundaries are fine)
  const std::size_t na = a.size(), nb = b.size();
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (segments_cross(a[i], a[(i + 1) % na], b[j], b[(j + 1) % nb])) {
        return true;
      }
    }
  }
  for (const Point2D& p : a) {
    if (point_strictly_inside(p, b)) return true;
  }
  for (const Point2D& p : b) {
    if (point_strictly_inside(p, a)) return true;
  }
  return false;
}

FloorPlan FloorPlan::create(std::vector<Region> regions,
                            std::optional<BoundingBox> bounds) {
  std::vector<Region> named;
  std::optional<Region> other;
  std::set<std::string> names;
  for (Region& r : regions) {
    if (!names.insert(r.name).second) {
      throw ValidationError("duplicate region name '" + r.name + "'");
    }
    if (r.name == "other") {
      other = std::move(r);
    } else {
      named.push_back(std::move(r));
    }
  }
  for (const Region& r : named) {
    if (r.polygon.size() < 3 || !polygon_is_simple(r.polygon)) {
      throw ValidationError("region '" + r.name +
                            "' polygon is not a simple polygon");
    }
    if (polygon_area(r.polygon) <= 0.0) {
      throw ValidationError("region '" + r.name + "' has zero area");
    }
  }
  for (std::size_t i = 0; i < named.size(); ++i) {
    for (std::size_t j = i + 1; j < named.size(); ++j) {
      if (polygons_overlap(named[i].polygon, named[j].polygon)) {
        throw ValidationError("regions '" + named[i].name + "' and '" +
                              named[j].name + "' overlap");
      }
    }
  }

  BoundingBox box;
  if (bounds) {
    box = *bounds;
  } else {
    std::vector<const std::vector<Point2D>*> polys;
    for (const Region& r : named) polys.push_back(&r.polygon);
    if (other) polys.push_back(&other->polygon);
    if (polys.empty()) {
      throw ValidationError("floor plan needs bounds or at least one region");
    }
    box.lo = {std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    box.hi = {-std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};
    for (const auto* poly : polys) {
      for (const Point2D& p : *poly) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
      }
    }
  }
  if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y)) {
    throw ValidationError("floor plan bounding box has no area");
  }

  if (!other) {
    other = Region{"other",
                   {{box.lo.x, box.lo.y},
                    {box.hi.x, box.lo.y},
                    {box.hi.x, box.hi.y},
                    {box.lo.x, box.hi.y}}};
  } else if (other->polygon.size() < 3 || !polygon_is_simple(other->polygon) ||
             polygon_area(other->polygon) <= 0.0) {
    throw ValidationError("region 'other' polygon is not a simple polygon");
  }

  FloorPlan plan;
  plan.regions_ = std::move(named);
  plan.regions_.push_back(std::move(*other));
  plan.bounds_ = box;
  return plan;
}

std::size_t FloorPlan::region_index_of(const Point2D& p) const {
  for (std::size_t i = 0; i + 1 < regions_.size(); ++i) {
    if (point_in_polygon(p, regions_[i].polygon)) return i;
  }
  return regions_.size() - 1;  // "other"
}

const std::string& FloorPlan::region_of(const Point2D& p) const {
  return regions_[region_index_of(p)].name;
}

const std::array<std::string, kRegionCount>& canonical_regions() {
  static const std::array<std::string, kRegionCount> regions = {
      "gym",      "dining", "kitchen", "lounge",
      "activity", "tech_bar", "staff",  "other"};
  return regions;
}

const std::array<std::string, kFeatureCount>& canonical_feature_names() {
  static const std::array<std::string, kFeatureCount> names = [] {
    std::array<std::string, kFeatureCount> out;
    const char* movement[] = {"lpl",           "speed",
                              "direction_change", "velocity_entropy",
                              "orientation_entropy", "levy_mu",
                              "levy_c"};
    std::size_t i = 0;
    for (const char* base : movement) {
      out[i++] = std::string(base) + "_mean";
      out[i++] = std::string(base) + "_std";
    }
    out[i++] = "group_overall_mean";
    out[i++] = "group_overall_std";
    for (const std::string& r : canonical_regions()) {
      out[i++] = "group_" + r + "_mean";
      out[i++] = "group_" + r + "_std";
    }
    return out;
  }();
  return names;
}

std::vector<std::string> feature_names_for(const FloorPlan& plan) {
  if (plan.region_count() != kRegionCount) {
    throw ValidationError("floor plan must have exactly " +
                          std::to_string(kRegionCount) + " regions, got " +
                          std::to_string(plan.region_count()));
  }
  std::vector<std::string> out(canonical_feature_names().begin(),
                               canonical_feature_names().end());
  std::size_t i = kMovementFeatureCount + 2;
  for (const Region& r : plan.regions()) {
    out[i++] = "group_" + r.name + "_mean";
    out[i++] = "group_" + r.name + "_std";
  }
  return out;
}

FloorPlan default_floorplan() {
  auto rect = [](double x0, double y0, double x1, double y1) {
    return std::vector<Point2D>{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  };
  std::vector<Region> regions;
  regions.push_back({"gym", rect(0, 0, 18, 16)});
  regions.push_back({"dining", rect(18, 0, 34, 16)});
  regions.push_back({"kitchen", rect(34, 0, 50, 16)});
  regions.push_back({"lounge", rect(0, 20, 14, 34)});
  regions.push_back({"activity", rect(14, 20, 30, 34)});
  regions.push_back({"tech_bar", rect(30, 20, 40, 34)});
  regions.push_back({"staff", rect(40, 20, 50, 34)});
  return FloorPlan::create(std::move(regions),
                           BoundingBox{{0.0, 0.0}, {50.0, 34.0}});
}

}  // namespace trajkit
