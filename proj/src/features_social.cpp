// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/features_social.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "trajkit/features_movement.hpp"
#include "trajkit/stats.hpp"

namespace trajkit {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double bearing_deg(const Point2D& from, const Point2D& to) {
  return std::atan2(to.y - from.y, to.x - from.x) * kRadToDeg;
}

bool faces(const PersonState& a, const PersonState& b, double facing_deg) {
  if (!a.orientation) return true;  // untracked orientation constrains nothing
  const double off = wrap_degrees(*a.orientation - bearing_deg(a.position, b.position));
  return std::abs(off) <= facing_deg;
}

bool pair_interacts(const PersonState& a, const PersonState& b,
                    const SocialParams& params) {
  if (distance(a.position, b.position) > params.d_max_m) return false;
  return faces(a, b, params.facing_deg) && faces(b, a, params.facing_deg);
}

}  // namespace

std::vector<GroupFormation> detect_groups(std::int64_t t,
                                          std::span<const PersonState> frame,
                                          const FloorPlan& plan,
                                          const SocialParams& params) {
  const std::size_t n = frame.size();
  // union-find over the interaction graph
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (pair_interacts(frame[i], frame[j], params)) {
        parent[find(i)] = find(j);
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < n; ++i) components[find(i)].push_back(i);

  std::vector<GroupFormation> groups;
  for (auto& [root, members] : components) {
    if (members.size() < 2) continue;
    GroupFormation g;
    g.t = t;
    Point2D centroid{0.0, 0.0};
    for (std::size_t idx : members) {
      g.member_ids.push_back(frame[idx].track_id);
      centroid.x += frame[idx].position.x;
      centroid.y += frame[idx].position.y;
    }
    centroid.x /= static_cast<double>(members.size());
    centroid.y /= static_cast<double>(members.size());
    std::sort(g.member_ids.begin(), g.member_ids.end());
    g.centroid = centroid;
    g.region = plan.region_of(centroid);
    groups.push_back(std::move(g));
  }
  // canonical order for deterministic output
  std::sort(groups.begin(), groups.end(),
            [](const GroupFormation& a, const GroupFormation& b) {
              return a.member_ids < b.member_ids;
            });
  return groups;
}

std::vector<std::vector<PersonState>> build_frames(const BreakSession& session,
                                                   const SocialParams& params) {
  std::vector<std::vector<PersonState>> frames(
      static_cast<std::size_t>(std::max<std::int64_t>(session.duration_s, 0)));
  for (const Trajectory& traj : session.trajectories) {
    const auto& samples = traj.samples;
    // movement heading per sample for the orientation fallback: direction of
    // the nearest step with real displacement, looking forward first
    std::vector<std::optional<double>> heading(samples.size());
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (distance(samples[i].position, samples[i + 1].position) >=
          params.stationary_m) {
        double h = bearing_deg(samples[i].position, samples[i + 1].position);
        if (h < 0.0) h += 360.0;
        heading[i] = h;
      }
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!heading[i] && i > 0) heading[i] = heading[i - 1];
    }
    for (std::size_t i = samples.size(); i-- > 1;) {
      if (!heading[i - 1] && heading[i]) heading[i - 1] = heading[i];
    }

    for (std::size_t i = 0; i < samples.size(); ++i) {
      const TrackSample& s = samples[i];
      if (s.t < 0 || s.t >= session.duration_s) continue;
      PersonState person;
      person.track_id = traj.track_id;
      person.position = s.position;
      person.orientation = s.orientation ? s.orientation : heading[i];
      frames[static_cast<std::size_t>(s.t)].push_back(std::move(person));
    }
  }
  return frames;
}

std::vector<std::vector<GroupFormation>> smooth_groups(
    std::vector<std::vector<GroupFormation>> frames, int min_persist_s) {
  if (min_persist_s <= 1) return frames;

  // run length of each member set ending at each frame
  std::map<std::vector<std::string>, std::pair<std::size_t, int>> last_seen;
  std::vector<std::vector<int>> run(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    run[t].resize(frames[t].size());
    for (std::size_t k = 0; k < frames[t].size(); ++k) {
      const auto& members = frames[t][k].member_ids;
      int length = 1;
      auto it = last_seen.find(members);
      if (it != last_seen.end() && it->second.first + 1 == t) {
        length = it->second.second + 1;
      }
      last_seen[members] = {t, length};
      run[t][k] = length;
    }
  }

  // a frame's record survives if its run (extended forward) reaches the
  // persistence threshold; walk backwards propagating the final run length
  std::map<std::vector<std::string>, std::pair<std::size_t, int>> next_run;
  std::vector<std::vector<GroupFormation>> out(frames.size());
  for (std::size_t t = frames.size(); t-- > 0;) {
    for (std::size_t k = 0; k < frames[t].size(); ++k) {
      const auto& members = frames[t][k].member_ids;
      int total = run[t][k];
      auto it = next_run.find(members);
      if (it != next_run.end() && it->second.first == t + 1) {
        total = it->second.second;  // run continues to the right
      }
      next_run[members] = {t, total};
      if (total >= min_persist_s) out[t].push_back(frames[t][k]);
    }
  }
  return out;
}

std::optional<double> normalized_group_count(std::size_t groups,
                                             std::size_t participants) {
  if (groups > 0 && participants < 2 * groups) {
    throw ValidationError("fewer than two participants per detected group");
  }
  if (participants == 0) return std::nullopt;
  return static_cast<double>(groups) / static_cast<double>(participants);
}

SocialPools social_pools(const BreakSession& session, const FloorPlan& plan,
                         const SocialParams& params) {
  SocialPools pools;
  pools.by_region.resize(plan.region_count());

  auto frames = build_frames(session, params);
  std::vector<std::vector<GroupFormation>> formations(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    formations[t] =
        detect_groups(static_cast<std::int64_t>(t), frames[t], plan, params);
  }
  formations = smooth_groups(std::move(formations), params.min_persist_s);

  std::vector<std::size_t> region_groups(plan.region_count());
  std::vector<std::size_t> region_participants(plan.region_count());
  for (const auto& frame_groups : formations) {
    std::fill(region_groups.begin(), region_groups.end(), 0);
    std::fill(region_participants.begin(), region_participants.end(), 0);
    std::size_t participants = 0;
    for (const GroupFormation& g : frame_groups) {
      participants += g.member_ids.size();
      const std::size_t r = plan.region_index_of(g.centroid);
      region_groups[r] += 1;
      region_participants[r] += g.member_ids.size();
    }
    if (const auto overall =
            normalized_group_count(frame_groups.size(), participants)) {
      pools.overall.push_back(*overall);
    }
    for (std::size_t r = 0; r < plan.region_count(); ++r) {
      if (const auto value = normalized_group_count(region_groups[r],
                                                    region_participants[r])) {
        pools.by_region[r].push_back(*value);
      }
    }
  }
  return pools;
}

SocialFeatures summarize_social(const SocialPools& pools) {
  SocialFeatures out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto push = [&](const std::vector<double>& pool) {
    const auto desc = descriptive(pool);
    if (desc) {
      out.values.push_back(desc->mean);
      out.defined.push_back(true);
      out.values.push_back(desc->stddev);
      out.defined.push_back(true);
    } else {
      out.values.push_back(nan);
      out.defined.push_back(false);
      out.values.push_back(nan);
      out.defined.push_back(false);
    }
  };
  push(pools.overall);
  for (const auto& pool : pools.by_region) push(pool);
  return out;
}

SocialFeatures social_features(const BreakSession& session,
                               const FloorPlan& plan,
                               const SocialParams& params) {
  if (plan.region_count() != kRegionCount) {
    throw ValidationError("social features need the canonical " +
                          std::to_string(kRegionCount) + "-region floor plan");
  }
  return summarize_social(social_pools(session, plan, params));
}

}  // namespace trajkit
