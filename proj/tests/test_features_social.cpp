// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "trajkit/features_social.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

namespace {

PersonState person(const std::string& id, double x, double y,
                   std::optional<double> orientation = std::nullopt) {
  return {id, {x, y}, orientation};
}

double bearing(const Point2D& from, const Point2D& to) {
  double deg = std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
  if (deg < 0) deg += 360.0;
  return deg;
}

}  // namespace

TEST_CASE("pairwise group criterion") {
  const FloorPlan plan = default_floorplan();
  SUBCASE("a facing triangle forms one group of three") {
    const Point2D centroid{10.0, 10.0};
    std::vector<PersonState> frame;
    for (int k = 0; k < 3; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / 3.0;
      const Point2D pos{centroid.x + 0.577 * std::cos(angle),
                        centroid.y + 0.577 * std::sin(angle)};
      frame.push_back(person("p" + std::to_string(k), pos.x, pos.y,
                             bearing(pos, centroid)));
    }
    const auto groups = detect_groups(0, frame, plan);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].member_ids.size() == 3);
    CHECK(groups[0].region == "gym");
    CHECK(groups[0].centroid.x == doctest::Approx(centroid.x).epsilon(1e-9));
  }
  SUBCASE("back-to-back pair is no group") {
    const std::vector<PersonState> frame = {person("a", 10, 10, 180.0),
                                            person("b", 11, 10, 0.0)};
    CHECK(detect_groups(0, frame, plan).empty());
  }
  SUBCASE("a distant facing pair is no group") {
    const std::vector<PersonState> frame = {person("a", 10, 10, 0.0),
                                            person("b", 15, 10, 180.0)};
    CHECK(detect_groups(0, frame, plan).empty());
  }
  SUBCASE("missing orientation constrains nothing") {
    const std::vector<PersonState> frame = {person("a", 10, 10),
                                            person("b", 11, 10)};
    CHECK(detect_groups(0, frame, plan).size() == 1);
    // one tracked orientation still has to pass
    const std::vector<PersonState> mixed = {person("a", 10, 10, 180.0),
                                            person("b", 11, 10)};
    CHECK(detect_groups(0, mixed, plan).empty());
  }
  SUBCASE("order of people does not matter") {
    Rng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<PersonState> frame;
      for (int k = 0; k < 8; ++k) {
        frame.push_back(person("p" + std::to_string(k), rng.uniform(5.0, 15.0),
                               rng.uniform(5.0, 15.0), rng.uniform(0.0, 360.0)));
      }
      const auto base = detect_groups(0, frame, plan);
      std::vector<PersonState> shuffled = frame;
      rng.shuffle(shuffled);
      const auto permuted = detect_groups(0, shuffled, plan);
      REQUIRE(base.size() == permuted.size());
      for (std::size_t g = 0; g < base.size(); ++g) {
        CHECK(base[g].member_ids == permuted[g].member_ids);
      }
    }
  }
  SUBCASE("rigid motion applied to positions and orientations together") {
    Rng rng(43);
    const double angle = 31.0;  // degrees
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<PersonState> frame, moved;
      for (int k = 0; k < 6; ++k) {
        const PersonState p = person("p" + std::to_string(k),
                                     rng.uniform(8.0, 13.0),
                                     rng.uniform(8.0, 13.0),
                                     rng.uniform(0.0, 360.0));
        frame.push_back(p);
        const double rad = angle * std::numbers::pi / 180.0;
        PersonState q = p;
        q.position = {std::cos(rad) * p.position.x - std::sin(rad) * p.position.y + 2.0,
                      std::sin(rad) * p.position.x + std::cos(rad) * p.position.y + 1.0};
        q.orientation = std::fmod(*p.orientation + angle, 360.0);
        moved.push_back(q);
      }
      const auto base = detect_groups(0, frame, plan);
      const auto rigid = detect_groups(0, moved, plan);
      REQUIRE(base.size() == rigid.size());
      for (std::size_t g = 0; g < base.size(); ++g) {
        CHECK(base[g].member_ids == rigid[g].member_ids);
      }
    }
  }
}

TEST_CASE("formation smoothing") {
  GroupFormation ab;
  ab.member_ids = {"a", "b"};
  auto at = [&](std::int64_t t) {
    GroupFormation g = ab;
    g.t = t;
    return g;
  };

  SUBCASE("one-frame flicker is removed") {
    std::vector<std::vector<GroupFormation>> frames(5);
    frames[2].push_back(at(2));
    const auto smoothed = smooth_groups(frames, 3);
    for (const auto& frame : smoothed) CHECK(frame.empty());
  }
  SUBCASE("three consecutive frames survive in all three") {
    std::vector<std::vector<GroupFormation>> frames(5);
    frames[1].push_back(at(1));
    frames[2].push_back(at(2));
    frames[3].push_back(at(3));
    const auto smoothed = smooth_groups(frames, 3);
    CHECK(smoothed[1].size() == 1);
    CHECK(smoothed[2].size() == 1);
    CHECK(smoothed[3].size() == 1);
  }
  SUBCASE("a run broken by one frame does not count") {
    std::vector<std::vector<GroupFormation>> frames(6);
    frames[0].push_back(at(0));
    frames[1].push_back(at(1));
    frames[3].push_back(at(3));
    const auto smoothed = smooth_groups(frames, 3);
    for (const auto& frame : smoothed) CHECK(frame.empty());
  }
  SUBCASE("persistence one is the identity") {
    std::vector<std::vector<GroupFormation>> frames(4);
    frames[0].push_back(at(0));
    frames[2].push_back(at(2));
    const auto smoothed = smooth_groups(frames, 1);
    CHECK(smoothed[0].size() == 1);
    CHECK(smoothed[2].size() == 1);
  }
  SUBCASE("never invents formations") {
    Rng rng(4711);
    std::vector<std::vector<GroupFormation>> frames(40);
    for (auto& frame : frames) {
      if (rng.uniform() < 0.6) frame.push_back(at(0));
      if (rng.uniform() < 0.3) {
        GroupFormation cd;
        cd.member_ids = {"c", "d"};
        frame.push_back(cd);
      }
    }
    const auto smoothed = smooth_groups(frames, 3);
    REQUIRE(smoothed.size() == frames.size());
    for (std::size_t t = 0; t < frames.size(); ++t) {
      for (const GroupFormation& g : smoothed[t]) {
        bool found = false;
        for (const GroupFormation& original : frames[t]) {
          found = found || original.member_ids == g.member_ids;
        }
        CHECK(found);
      }
      CHECK(smoothed[t].size() <= frames[t].size());
    }
  }
}

TEST_CASE("normalized group count") {
  CHECK(*normalized_group_count(2, 6) == doctest::Approx(1.0 / 3.0));
  CHECK(*normalized_group_count(1, 10) == doctest::Approx(0.1));
  CHECK(!normalized_group_count(0, 0).has_value());
  CHECK_THROWS_AS(normalized_group_count(1, 1), ValidationError);
}

namespace {

BreakSession persistent_pair_session(double x, double y, std::int64_t duration) {
  BreakSession session;
  session.session_id = "s";
  session.duration_s = duration;
  Trajectory a, b;
  a.track_id = "a";
  b.track_id = "b";
  for (std::int64_t t = 0; t < duration; ++t) {
    a.samples.push_back({t, {x, y}, 0.0});
    b.samples.push_back({t, {x + 1.0, y}, 180.0});
  }
  session.trajectories = {a, b};
  return session;
}

}  // namespace

TEST_CASE("session-level social features") {
  const FloorPlan plan = default_floorplan();
  SUBCASE("no groups masks all eighteen") {
    BreakSession session;
    session.duration_s = 60;
    const SocialFeatures f = social_features(session, plan);
    REQUIRE(f.values.size() == kSocialFeatureCount);
    for (bool defined : f.defined) CHECK(!defined);
  }
  SUBCASE("a persistent pair in the gym") {
    const BreakSession session = persistent_pair_session(8.0, 8.0, 120);
    const SocialFeatures f = social_features(session, plan);
    CHECK(f.defined[0]);
    CHECK(f.values[0] == doctest::Approx(0.5));  // overall mean
    CHECK(f.values[1] == doctest::Approx(0.0));  // overall std
    CHECK(f.defined[2]);                         // gym is the first region
    CHECK(f.values[2] == doctest::Approx(0.5));
    CHECK(f.values[3] == doctest::Approx(0.0));
    for (std::size_t r = 1; r < kRegionCount; ++r) {
      CHECK(!f.defined[2 + 2 * r]);  // every other region stays masked
    }
  }
  SUBCASE("wrong region count is rejected") {
    const FloorPlan tiny = FloorPlan::create({}, BoundingBox{{0, 0}, {10, 10}});
    CHECK_THROWS_AS(social_features(persistent_pair_session(5, 5, 30), tiny),
                    ValidationError);
  }
}

TEST_CASE("pool recount against a brute-force frame scan") {
  const FloorPlan plan = default_floorplan();
  SocialParams params;
  Rng rng(20240202);

  BreakSession session;
  session.session_id = "rand";
  session.duration_s = 120;
  for (int k = 0; k < 6; ++k) {
    Trajectory traj;
    traj.track_id = "p" + std::to_string(k);
    Point2D pos{rng.uniform(2.0, 48.0), rng.uniform(2.0, 32.0)};
    for (std::int64_t t = 0; t < session.duration_s; ++t) {
      if (rng.uniform() < 0.6) {  // mill around so member sets persist a bit
        pos.x = std::clamp(pos.x + rng.normal(0.0, 0.8), 0.0, 50.0);
        pos.y = std::clamp(pos.y + rng.normal(0.0, 0.8), 0.0, 34.0);
      }
      traj.samples.push_back({t, pos, rng.uniform(0.0, 360.0)});
    }
    session.trajectories.push_back(std::move(traj));
  }

  const SocialPools pools = social_pools(session, plan, params);

  // independent recount: rebuild per-frame member sets, apply the
  // persistence rule by literal run scanning, then recount G values
  const auto frames = build_frames(session, params);
  std::vector<std::vector<GroupFormation>> raw(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    raw[t] = detect_groups(static_cast<std::int64_t>(t), frames[t], plan, params);
  }
  std::set<std::vector<std::string>> sets;
  for (const auto& frame : raw) {
    for (const auto& g : frame) sets.insert(g.member_ids);
  }
  std::vector<std::vector<GroupFormation>> kept(frames.size());
  for (const auto& members : sets) {
    std::vector<int> present(frames.size(), 0);
    for (std::size_t t = 0; t < frames.size(); ++t) {
      for (const auto& g : raw[t]) {
        if (g.member_ids == members) present[t] = 1;
      }
    }
    std::size_t t = 0;
    while (t < present.size()) {
      if (!present[t]) {
        ++t;
        continue;
      }
      std::size_t end = t;
      while (end < present.size() && present[end]) ++end;
      if (end - t >= static_cast<std::size_t>(params.min_persist_s)) {
        for (std::size_t u = t; u < end; ++u) {
          for (const auto& g : raw[u]) {
            if (g.member_ids == members) kept[u].push_back(g);
          }
        }
      }
      t = end;
    }
  }
  std::vector<double> overall;
  std::vector<std::vector<double>> by_region(plan.region_count());
  for (const auto& frame : kept) {
    std::size_t participants = 0;
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> region_counts;
    for (const auto& g : frame) {
      participants += g.member_ids.size();
      auto& [groups, members] = region_counts[plan.region_index_of(g.centroid)];
      groups += 1;
      members += g.member_ids.size();
    }
    if (participants > 0) {
      overall.push_back(static_cast<double>(frame.size()) /
                        static_cast<double>(participants));
    }
    for (const auto& [region, counts] : region_counts) {
      by_region[region].push_back(static_cast<double>(counts.first) /
                                  static_cast<double>(counts.second));
    }
  }

  REQUIRE(pools.overall.size() == overall.size());
  for (std::size_t i = 0; i < overall.size(); ++i) {
    CHECK(pools.overall[i] == doctest::Approx(overall[i]).epsilon(1e-12));
  }
  REQUIRE(pools.by_region.size() == by_region.size());
  for (std::size_t r = 0; r < by_region.size(); ++r) {
    REQUIRE(pools.by_region[r].size() == by_region[r].size());
    for (std::size_t i = 0; i < by_region[r].size(); ++i) {
      CHECK(pools.by_region[r][i] == doctest::Approx(by_region[r][i]).epsilon(1e-12));
    }
  }

  SUBCASE("normalized counts never exceed one half") {
    for (double g : pools.overall) CHECK(g <= 0.5 + 1e-12);
    for (const auto& pool : pools.by_region) {
      for (double g : pool) CHECK(g <= 0.5 + 1e-12);
    }
  }
  SUBCASE("per-region groups sum to the frame total") {
    for (const auto& frame : kept) {
      std::map<std::string, std::size_t> by_name;
      for (const auto& g : frame) by_name[g.region] += 1;
      std::size_t total = 0;
      for (const auto& [name, count] : by_name) total += count;
      CHECK(total == frame.size());
    }
  }
}
