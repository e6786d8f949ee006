// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "trajkit/ingest.hpp"
#include "trajkit/rng.hpp"

using namespace trajkit;

namespace {

Manifest one_session_manifest(std::int64_t duration = 900) {
  Manifest m;
  m.cohorts = {{"A", {24, 25, 26}}};
  m.sessions = {{"s1", "A", "2024-01-01", duration}};
  return m;
}

const FloorPlan& test_plan() {
  static const FloorPlan plan = default_floorplan();
  return plan;
}

std::vector<BreakSession> parse_text(const std::string& text,
                                     const Manifest& manifest,
                                     TracksFormat format = TracksFormat::Jsonl,
                                     IngestReport* report = nullptr) {
  std::istringstream in(text);
  return parse_tracks(in, format, manifest, test_plan(), {}, report);
}

}  // namespace

TEST_CASE("two records become one two-sample trajectory") {
  const std::string text =
      R"({"session_id":"s1","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":1,"x":2.0,"y":2.0,"orientation":90.0})" "\n";
  const auto sessions = parse_text(text, one_session_manifest());
  REQUIRE(sessions.size() == 1);
  REQUIRE(sessions[0].trajectories.size() == 1);
  const Trajectory& traj = sessions[0].trajectories[0];
  REQUIRE(traj.samples.size() == 2);
  CHECK(traj.samples[0].position.x == doctest::Approx(1.0));
  CHECK(!traj.samples[0].orientation.has_value());
  CHECK(traj.samples[1].orientation == doctest::Approx(90.0));
}

TEST_CASE("gap splitting drops singleton pieces") {
  const std::string text =
      R"({"session_id":"s1","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":1,"x":2.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":5,"x":3.0,"y":2.0})" "\n";
  IngestReport report;
  const auto sessions = parse_text(text, one_session_manifest(),
                                   TracksFormat::Jsonl, &report);
  REQUIRE(sessions[0].trajectories.size() == 1);
  CHECK(sessions[0].trajectories[0].samples.size() == 2);
  CHECK(report.records_in == 3);
  CHECK(report.records_kept == 2);
  CHECK(report.dropped_short == 1);
  CHECK(report.dropped_out_of_bounds == 0);
}

TEST_CASE("a two-second gap stays in one piece") {
  const std::string text =
      R"({"session_id":"s1","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":2,"x":2.0,"y":2.0})" "\n";
  const auto sessions = parse_text(text, one_session_manifest());
  CHECK(sessions[0].trajectories.size() == 1);
}

TEST_CASE("ingest errors") {
  SUBCASE("malformed line reports the line number") {
    const std::string text =
        R"({"session_id":"s1","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n"
        "not json\n";
    try {
      parse_text(text, one_session_manifest());
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("duplicate observation is rejected") {
    const std::string text =
        R"({"session_id":"s1","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n"
        R"({"session_id":"s1","track_id":"t1","t":0,"x":1.5,"y":2.0})" "\n";
    CHECK_THROWS_AS(parse_text(text, one_session_manifest()), ValidationError);
  }
  SUBCASE("unknown session is rejected") {
    const std::string text =
        R"({"session_id":"nope","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n";
    CHECK_THROWS_AS(parse_text(text, one_session_manifest()), ValidationError);
  }
  SUBCASE("missing field is rejected") {
    const std::string text = R"({"session_id":"s1","track_id":"t1","t":0})" "\n";
    CHECK_THROWS_AS(parse_text(text, one_session_manifest()), ValidationError);
  }
}

TEST_CASE("csv parsing") {
  const std::string text =
      "session_id,track_id,t,x,y,orientation\n"
      "s1,t1,0,1.0,2.0,45.5\n"
      "s1,t1,1,2.0,2.0,\n";
  const auto sessions =
      parse_text(text, one_session_manifest(), TracksFormat::Csv);
  REQUIRE(sessions[0].trajectories.size() == 1);
  const Trajectory& traj = sessions[0].trajectories[0];
  CHECK(traj.samples[0].orientation == doctest::Approx(45.5));
  CHECK(!traj.samples[1].orientation.has_value());

  SUBCASE("wrong header is rejected") {
    std::istringstream bad("a,b,c\n");
    Manifest m = one_session_manifest();
    CHECK_THROWS_AS(parse_tracks(bad, TracksFormat::Csv, m, test_plan()),
                    ValidationError);
  }
  SUBCASE("wrong field count reports the line") {
    const std::string short_line =
        "session_id,track_id,t,x,y,orientation\n"
        "s1,t1,0,1.0\n";
    try {
      parse_text(short_line, one_session_manifest(), TracksFormat::Csv);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("out-of-bounds positions are dropped, not fatal") {
  // the default plan spans 50 x 34 with a 1 m margin
  const std::string text =
      R"({"session_id":"s1","track_id":"t1","t":0,"x":1.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":1,"x":2.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":2,"x":200.0,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":3,"x":-50.9,"y":2.0})" "\n"
      R"({"session_id":"s1","track_id":"t1","t":4,"x":3.0,"y":2.0})" "\n";
  IngestReport report;
  const auto sessions = parse_text(text, one_session_manifest(),
                                   TracksFormat::Jsonl, &report);
  CHECK(report.dropped_out_of_bounds == 2);
  // t=0,1 survive; the t=4 sample is isolated after the drops and goes too
  CHECK(report.records_kept == 2);
  CHECK(report.dropped_short == 1);
  CHECK(report.records_kept + report.dropped_out_of_bounds +
            report.dropped_short == report.records_in);
  REQUIRE(sessions[0].trajectories.size() == 1);
  CHECK(sessions[0].trajectories[0].samples.size() == 2);
}

TEST_CASE("record accounting holds under fuzzing") {
  Rng rng(999);
  for (int trial = 0; trial < 20; ++trial) {
    Manifest manifest = one_session_manifest(3600);
    std::ostringstream text;
    std::size_t emitted = 0;
    for (int track = 0; track < 4; ++track) {
      std::int64_t t = 0;
      for (int i = 0; i < 40; ++i) {
        t += 1 + static_cast<std::int64_t>(rng.bounded(4));  // gaps up to 4 s
        const double x = rng.uniform(-3.0, 53.0);
        const double y = rng.uniform(-3.0, 37.0);
        text << "{\"session_id\":\"s1\",\"track_id\":\"t" << track
             << "\",\"t\":" << t << ",\"x\":" << x << ",\"y\":" << y << "}\n";
        ++emitted;
      }
    }
    IngestReport report;
    parse_text(text.str(), manifest, TracksFormat::Jsonl, &report);
    CHECK(report.records_in == emitted);
    CHECK(report.records_kept + report.dropped_out_of_bounds +
              report.dropped_short == report.records_in);
  }
}

TEST_CASE("write then parse is the identity on assembled sessions") {
  Rng rng(31002);
  Manifest manifest;
  manifest.cohorts = {{"A", {24}}, {"B", {18}}};
  manifest.sessions = {{"s1", "A", "2024-01-01", 600},
                       {"s2", "B", "2024-01-02", 600}};
  std::ostringstream text;
  for (const char* session : {"s1", "s2"}) {
    for (int track = 0; track < 3; ++track) {
      for (int t = 0; t < 50; ++t) {
        text << "{\"session_id\":\"" << session << "\",\"track_id\":\"p"
             << track << "\",\"t\":" << t << ",\"x\":" << rng.uniform(1.0, 49.0)
             << ",\"y\":" << rng.uniform(1.0, 33.0);
        if (rng.uniform() < 0.5) {
          text << ",\"orientation\":" << rng.uniform(0.0, 359.0);
        }
        text << "}\n";
      }
    }
  }
  const auto first = parse_text(text.str(), manifest);

  for (TracksFormat format : {TracksFormat::Jsonl, TracksFormat::Csv}) {
    std::ostringstream serialized;
    write_tracks(serialized, first, format);
    std::istringstream in(serialized.str());
    const auto second = parse_tracks(in, format, manifest, test_plan());
    REQUIRE(second.size() == first.size());
    for (std::size_t s = 0; s < first.size(); ++s) {
      REQUIRE(second[s].trajectories.size() == first[s].trajectories.size());
      for (std::size_t k = 0; k < first[s].trajectories.size(); ++k) {
        const Trajectory& a = first[s].trajectories[k];
        const Trajectory& b = second[s].trajectories[k];
        REQUIRE(a.track_id == b.track_id);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
          CHECK(a.samples[i].t == b.samples[i].t);
          CHECK(a.samples[i].position.x == b.samples[i].position.x);
          CHECK(a.samples[i].position.y == b.samples[i].position.y);
          CHECK(a.samples[i].orientation == b.samples[i].orientation);
        }
      }
    }
  }
}

TEST_CASE("manifest parsing") {
  const std::string text = R"({
    "schema_version": 1,
    "cohorts": [{"cohort_id": "A", "moca_scores": [22, 24]}],
    "sessions": [{"session_id": "s1", "cohort_id": "A", "date": "2024-03-04", "duration_s": 900}]
  })";
  std::istringstream in(text);
  const Manifest manifest = parse_manifest(in);
  REQUIRE(manifest.sessions.size() == 1);
  CHECK(manifest.find_session("s1") != nullptr);
  CHECK(manifest.find_cohort("A") != nullptr);
  CHECK(manifest.find_cohort("Z") == nullptr);

  SUBCASE("round trip") {
    std::ostringstream out;
    write_manifest(out, manifest);
    std::istringstream again(out.str());
    const Manifest second = parse_manifest(again);
    CHECK(second.sessions.size() == manifest.sessions.size());
    CHECK(second.cohorts[0].moca_scores == manifest.cohorts[0].moca_scores);
  }
  SUBCASE("sessions must reference known cohorts") {
    const std::string bad = R"({
      "schema_version": 1,
      "cohorts": [],
      "sessions": [{"session_id": "s1", "cohort_id": "A", "duration_s": 900}]
    })";
    std::istringstream bin(bad);
    CHECK_THROWS_AS(parse_manifest(bin), ValidationError);
  }
  SUBCASE("schema version is mandatory") {
    std::istringstream bin("{}");
    CHECK_THROWS_AS(parse_manifest(bin), ValidationError);
  }
}

TEST_CASE("a 315-session manifest yields 315 sessions") {
  Manifest manifest;
  manifest.cohorts = {{"A", {24}}, {"B", {18}}, {"C", {23}},
                      {"D", {19}}, {"E", {25}}, {"F", {20}}};
  const char* ids = "ABCDEF";
  for (int i = 0; i < 315; ++i) {
    manifest.sessions.push_back({"s" + std::to_string(i),
                                 std::string(1, ids[i % 6]), "2024-01-01",
                                 i % 3 == 2 ? 1800 : 900});
  }
  // records for only a few sessions; the rest stay empty but present
  std::ostringstream text;
  text << R"({"session_id":"s0","track_id":"t","t":0,"x":1,"y":1})" << "\n"
       << R"({"session_id":"s0","track_id":"t","t":1,"x":2,"y":1})" << "\n";
  const auto sessions = parse_text(text.str(), manifest);
  CHECK(sessions.size() == 315);
  CHECK(sessions[0].trajectories.size() == 1);
  CHECK(sessions[10].trajectories.empty());
}

TEST_CASE("floor plan files") {
  const std::string text = R"({
    "schema_version": 1,
    "regions": [{"name": "gym", "polygon": [[0,0],[10,0],[10,10],[0,10]]}]
  })";
  std::istringstream in(text);
  const FloorPlan plan = parse_floorplan(in);
  REQUIRE(plan.region_count() == 2);
  CHECK(plan.region_of({5, 5}) == "gym");
  CHECK(plan.region_of({20, 5}) == "other");

  SUBCASE("empty region list gets the catch-all") {
    std::istringstream empty(R"({"schema_version": 1, "regions": []})");
    const FloorPlan p = parse_floorplan(empty);
    CHECK(p.region_count() == 1);
    CHECK(p.regions()[0].name == "other");
  }
  SUBCASE("overlapping named regions fail with both names") {
    const std::string bad = R"({
      "schema_version": 1,
      "regions": [
        {"name": "gym", "polygon": [[0,0],[10,0],[10,10],[0,10]]},
        {"name": "lounge", "polygon": [[5,5],[15,5],[15,15],[5,15]]}
      ]
    })";
    std::istringstream bin(bad);
    try {
      parse_floorplan(bin);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("gym") != std::string::npos);
      CHECK(what.find("lounge") != std::string::npos);
    }
  }
  SUBCASE("write then parse preserves the plan") {
    std::ostringstream out;
    write_floorplan(out, default_floorplan());
    std::istringstream again(out.str());
    const FloorPlan second = parse_floorplan(again);
    REQUIRE(second.region_count() == kRegionCount);
    for (std::size_t i = 0; i < kRegionCount; ++i) {
      CHECK(second.regions()[i].name == default_floorplan().regions()[i].name);
    }
    CHECK(second.region_of({5, 5}) == "gym");
  }
}
