// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trajkit/model.hpp"

namespace trajkit {

struct SocialParams {
  double d_max_m = 2.0;       // proxemic social distance
  double facing_deg = 120.0;  // tolerance around the bearing to the partner
  int min_persist_s = 3;      // frames a member set must persist
  double stationary_m = 0.25; // heading fallback ignores sub-threshold steps
};

struct PersonState {
  std::string track_id;
  Point2D position;
  // body orientation if tracked, else movement heading, else absent
  std::optional<double> orientation;
};

struct GroupFormation {
  std::int64_t t = 0;
  std::vector<std::string> member_ids;  // sorted, size >= 2
  Point2D centroid;
  std::string region;
};

// Pairwise criterion: two people can interact iff they are within d_max and
// every tracked orientation among the pair is within facing_deg of the
// bearing toward the other person. Groups are the connected components of
// size >= 2; the group's region comes from its centroid.
std::vector<GroupFormation> detect_groups(std::int64_t t,
                                          std::span<const PersonState> frame,
                                          const FloorPlan& plan,
                                          const SocialParams& params = {});

// One frame per second of the session; a person appears in frame t iff their
// trajectory has a sample at exactly t. Missing body orientation falls back
// to the movement heading of the nearest step.
std::vector<std::vector<PersonState>> build_frames(const BreakSession& session,
                                                   const SocialParams& params = {});

// Keeps a formation only when the identical member set occurs in at least
// min_persist_s consecutive frames; surviving formations retain their
// per-frame records. Never invents a formation absent from the input.
std::vector<std::vector<GroupFormation>> smooth_groups(
    std::vector<std::vector<GroupFormation>> frames, int min_persist_s);

// g/n with n counting only people who belong to some detected group; frames
// with n = 0 are undefined and excluded from aggregation.
std::optional<double> normalized_group_count(std::size_t groups,
                                             std::size_t participants);

// Per-frame normalized group counts, overall and split by the region each
// group's centroid falls into.
struct SocialPools {
  std::vector<double> overall;
  std::vector<std::vector<double>> by_region;  // one pool per plan region
};

SocialPools social_pools(const BreakSession& session, const FloorPlan& plan,
                         const SocialParams& params = {});

struct SocialFeatures {
  // mean/std of the overall normalized count followed by mean/std per
  // region, in plan order; 18 entries for the canonical 8-region plan
  std::vector<double> values;
  std::vector<bool> defined;
};

SocialFeatures summarize_social(const SocialPools& pools);

// Requires the canonical 8-region plan so the result is the fixed
// 18-entry block of the session feature vector.
SocialFeatures social_features(const BreakSession& session,
                               const FloorPlan& plan,
                               const SocialParams& params = {});

}  // namespace trajkit
