// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trajkit/model.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/simulate.hpp"

using namespace trajkit;

TEST_CASE("label_cohort threshold semantics") {
  CHECK(label_cohort({"x", {22, 22, 22}}) == CohortLabel::High);
  CHECK(label_cohort({"x", {21}}) == CohortLabel::Low);  // 21 is not > 21
  CHECK(label_cohort({"x", {30}}) == CohortLabel::High);
  CHECK(label_cohort({"x", {21, 22}}) == CohortLabel::High);  // mean 21.5
  CHECK_THROWS_AS(label_cohort({"x", {}}), ValidationError);
  CHECK_THROWS_AS(label_cohort({"x", {31}}), ValidationError);
  CHECK_THROWS_AS(label_cohort({"x", {-1}}), ValidationError);

  // reconfigurable cut point
  CHECK(label_cohort({"x", {20}}, 19.0) == CohortLabel::High);
  CHECK(label_cohort({"x", {20}}, 20.0) == CohortLabel::Low);
}

TEST_CASE("six-cohort fixture labels") {
  const auto cohorts = default_cohorts();
  REQUIRE(cohorts.size() == 6);
  const char* expect_high = "ACE";
  for (const Cohort& cohort : cohorts) {
    const bool should_be_high =
        std::string(expect_high).find(cohort.cohort_id) != std::string::npos;
    CHECK(label_cohort(cohort) ==
          (should_be_high ? CohortLabel::High : CohortLabel::Low));
  }
  // subject counts of the study population
  CHECK(cohorts[0].moca_scores.size() == 11);
  CHECK(cohorts[1].moca_scores.size() == 7);
  CHECK(cohorts[2].moca_scores.size() == 12);
  CHECK(cohorts[3].moca_scores.size() == 10);
  CHECK(cohorts[4].moca_scores.size() == 13);
  CHECK(cohorts[5].moca_scores.size() == 13);
}

TEST_CASE("labeling is invariant under score duplication") {
  Rng rng(20240811);
  for (int trial = 0; trial < 200; ++trial) {
    Cohort cohort{"r", {}};
    const std::size_t n = 1 + rng.bounded(12);
    for (std::size_t i = 0; i < n; ++i) {
      cohort.moca_scores.push_back(static_cast<int>(rng.bounded(31)));
    }
    Cohort doubled = cohort;
    doubled.moca_scores.insert(doubled.moca_scores.end(),
                               cohort.moca_scores.begin(),
                               cohort.moca_scores.end());
    CHECK(label_cohort(cohort) == label_cohort(doubled));
  }
}

TEST_CASE("trajectory validation") {
  Trajectory traj;
  traj.track_id = "t";
  traj.samples = {{0, {1.0, 1.0}, std::nullopt}, {1, {2.0, 1.0}, std::nullopt}};
  CHECK_NOTHROW(validate_trajectory(traj, 2.0));

  SUBCASE("too short") {
    traj.samples.resize(1);
    CHECK_THROWS_AS(validate_trajectory(traj, 2.0), ValidationError);
  }
  SUBCASE("non-monotonic timestamps") {
    traj.samples.push_back({1, {3.0, 1.0}, std::nullopt});
    CHECK_THROWS_AS(validate_trajectory(traj, 2.0), ValidationError);
    traj.samples.back().t = 0;
    CHECK_THROWS_AS(validate_trajectory(traj, 2.0), ValidationError);
  }
  SUBCASE("oversized gap") {
    traj.samples.push_back({10, {3.0, 1.0}, std::nullopt});
    CHECK_THROWS_AS(validate_trajectory(traj, 2.0), ValidationError);
  }
  SUBCASE("orientation range") {
    traj.samples[0].orientation = 360.0;
    CHECK_THROWS_AS(validate_trajectory(traj, 2.0), ValidationError);
    traj.samples[0].orientation = 359.5;
    CHECK_NOTHROW(validate_trajectory(traj, 2.0));
  }
  SUBCASE("non-finite position") {
    traj.samples[0].position.x = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_trajectory(traj, 2.0), ValidationError);
  }
}

TEST_CASE("polygon helpers") {
  const std::vector<Point2D> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_area(square) == doctest::Approx(1.0));
  CHECK(polygon_is_simple(square));
  CHECK(point_in_polygon({0.5, 0.5}, square));
  CHECK(!point_in_polygon({1.5, 0.5}, square));

  const std::vector<Point2D> bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK(!polygon_is_simple(bowtie));

  const std::vector<Point2D> shifted = {{2, 0}, {3, 0}, {3, 1}, {2, 1}};
  CHECK(!polygons_overlap(square, shifted));
  const std::vector<Point2D> touching = {{1, 0}, {2, 0}, {2, 1}, {1, 1}};
  CHECK(!polygons_overlap(square, touching));  // shared edge is fine
  const std::vector<Point2D> cutting = {{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}};
  CHECK(polygons_overlap(square, cutting));
  const std::vector<Point2D> inside = {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}};
  CHECK(polygons_overlap(square, inside));
}

TEST_CASE("floor plan construction and lookup") {
  std::vector<Region> regions;
  regions.push_back({"gym", {{0, 0}, {10, 0}, {10, 10}, {0, 10}}});
  const FloorPlan plan = FloorPlan::create(regions);
  REQUIRE(plan.region_count() == 2);
  CHECK(plan.regions().back().name == "other");
  CHECK(plan.region_of({5, 5}) == "gym");

  SUBCASE("overlap is rejected with both names") {
    regions.push_back({"dining", {{5, 5}, {15, 5}, {15, 15}, {5, 15}}});
    try {
      FloorPlan::create(regions);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("gym") != std::string::npos);
      CHECK(what.find("dining") != std::string::npos);
    }
  }
  SUBCASE("empty region list still has the catch-all") {
    const FloorPlan empty =
        FloorPlan::create({}, BoundingBox{{0, 0}, {50, 34}});
    REQUIRE(empty.region_count() == 1);
    CHECK(empty.region_of({1, 1}) == "other");
  }
  SUBCASE("duplicate names rejected") {
    regions.push_back({"gym", {{20, 20}, {21, 20}, {21, 21}, {20, 21}}});
    CHECK_THROWS_AS(FloorPlan::create(regions), ValidationError);
  }
  SUBCASE("degenerate polygon rejected") {
    CHECK_THROWS_AS(FloorPlan::create({{"flat", {{0, 0}, {1, 0}, {2, 0}}}}),
                    ValidationError);
  }
}

TEST_CASE("default floor plan matches the canonical inventory") {
  const FloorPlan plan = default_floorplan();
  REQUIRE(plan.region_count() == kRegionCount);
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    CHECK(plan.regions()[i].name == canonical_regions()[i]);
  }
  CHECK(plan.bounds().width() * plan.bounds().height() == doctest::Approx(1700.0));
  CHECK(plan.region_of({5.0, 5.0}) == "gym");
  CHECK(plan.region_of({25.0, 18.0}) == "other");  // corridor strip
  CHECK(plan.region_of({45.0, 30.0}) == "staff");
}

TEST_CASE("canonical feature names") {
  const auto& names = canonical_feature_names();
  REQUIRE(names.size() == kFeatureCount);
  CHECK(names[0] == "lpl_mean");
  CHECK(names[13] == "levy_c_std");
  CHECK(names[14] == "group_overall_mean");
  CHECK(names[16] == "group_gym_mean");
  CHECK(names[31] == "group_other_std");
  CHECK(kMovementFeatureCount + kSocialFeatureCount == kFeatureCount);

  const auto derived = feature_names_for(default_floorplan());
  CHECK(std::equal(derived.begin(), derived.end(), names.begin()));

  // a non-canonical plan cannot produce the 32-entry vector
  CHECK_THROWS_AS(
      feature_names_for(FloorPlan::create({}, BoundingBox{{0, 0}, {1, 1}})),
      ValidationError);
}

TEST_CASE("bounding box containment with margin") {
  const BoundingBox box{{0, 0}, {10, 10}};
  CHECK(box.contains({5, 5}));
  CHECK(!box.contains({10.5, 5}));
  CHECK(box.contains({10.5, 5}, 1.0));
  CHECK(!box.contains({11.5, 5}, 1.0));
}
