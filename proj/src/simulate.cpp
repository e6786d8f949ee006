// Copyright 2026 trajkit contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "trajkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trajkit/rng.hpp"

namespace trajkit {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kWallMargin = 0.5;     // interior box agents move in
constexpr double kArriveRadius = 0.3;   // close enough to the meeting spot
constexpr double kMaxBoutLength = 60.0; // heavy-tail draws capped to the site scale

double wrap_to_360(double deg) {
  double m = std::fmod(deg, 360.0);
  if (m < 0.0) m += 360.0;
  if (m >= 360.0) m = 0.0;
  return m;
}

}  // namespace

void CohortProfile::validate() const {
  if (!(speed_std > 0.0) || !(speed_mean > 0.0)) {
    throw ValidationError("profile speed model needs positive mean and std");
  }
  if (!(turn_sigma_deg >= 0.0)) {
    throw ValidationError("profile turn sigma must be non-negative");
  }
  if (pause_prob < 0.0 || pause_prob > 1.0) {
    throw ValidationError("profile pause probability outside [0, 1]");
  }
  if (!(group_rate_per_person_min >= 0.0)) {
    throw ValidationError("profile group rate must be non-negative");
  }
  if (!(bout_length.b > 0.0)) {
    throw ValidationError("profile bout-length scale must be positive");
  }
  if (!(dwell_mean_s > 0.0)) {
    throw ValidationError("profile dwell mean must be positive");
  }
  double weight_sum = 0.0;
  for (double w : group_size_weights) {
    if (w < 0.0) throw ValidationError("negative group size weight");
    weight_sum += w;
  }
  if (group_size_weights.empty() || weight_sum <= 0.0) {
    throw ValidationError("group size weights must sum to a positive value");
  }
  for (double w : region_weights) {
    if (w < 0.0) throw ValidationError("negative region weight");
  }
}

CohortProfile default_high_profile() {
  CohortProfile p;
  p.label = CohortLabel::High;
  p.bout_length = {StepLengthModel::Kind::Levy, 0.5, 1.2};
  p.speed_mean = 1.2;
  p.speed_std = 0.3;
  p.turn_sigma_deg = 10.0;
  p.pause_prob = 0.06;
  p.group_rate_per_person_min = 0.35;
  p.group_size_weights = {0.2, 0.4, 0.4};
  p.region_weights = {0.30, 0.05, 0.05, 0.10, 0.30, 0.15, 0.05};
  p.dwell_mean_s = 60.0;
  return p;
}

CohortProfile default_low_profile() {
  CohortProfile p;
  p.label = CohortLabel::Low;
  p.bout_length = {StepLengthModel::Kind::Gaussian, 1.0, 0.5};
  p.speed_mean = 0.85;
  p.speed_std = 0.3;
  p.turn_sigma_deg = 35.0;
  p.pause_prob = 0.12;  // twice the high-profile rate
  p.group_rate_per_person_min = 0.18;
  p.group_size_weights = {1.0};
  p.region_weights = {0.05, 0.30, 0.10, 0.35, 0.05, 0.05, 0.10};
  p.dwell_mean_s = 30.0;
  return p;
}

double default_position_sigma() {
  return kTargetMeanRadialError / std::sqrt(std::numbers::pi / 2.0);
}

double default_orientation_sigma() {
  return kTargetMeanAbsOrientationError / std::sqrt(2.0 / std::numbers::pi);
}

NoiseModel::NoiseModel()
    : position_sigma_m(default_position_sigma()),
      orientation_sigma_deg(default_orientation_sigma()) {}

void NoiseModel::validate() const {
  if (position_sigma_m < 0.0 || orientation_sigma_deg < 0.0) {
    throw ValidationError("noise sigmas must be non-negative");
  }
  if (correlation_time_s < 0.0) {
    throw ValidationError("noise correlation time must be non-negative");
  }
  if (dropout_prob < 0.0 || dropout_prob >= 1.0) {
    throw ValidationError("dropout probability outside [0, 1)");
  }
}

namespace {

struct Agent {
  const CohortProfile* profile = nullptr;
  Point2D pos;
  double heading_deg = 0.0;
  enum class Mode { Walk, Converge, Dwell } mode = Mode::Walk;
  double bout_remaining = 0.0;
  double speed = 1.0;
  // group state
  Point2D spot;
  Point2D center;
  double dwell_remaining = 0.0;
};

struct TrueSample {
  Point2D pos;
  double orientation_deg = 0.0;
};

double draw_bout(Rng& rng, const StepLengthModel& model) {
  if (model.kind == StepLengthModel::Kind::Levy) {
    return std::min(rng.levy(model.a, model.b), kMaxBoutLength);
  }
  return rng.truncated_normal(model.a, model.b, 0.3);
}

double draw_speed(Rng& rng, const CohortProfile& profile) {
  return rng.truncated_normal(profile.speed_mean, profile.speed_std, 0.1);
}

Point2D random_point_in_polygon(Rng& rng, const std::vector<Point2D>& polygon,
                                const BoundingBox& bounds) {
  Point2D lo{bounds.hi.x, bounds.hi.y}, hi{bounds.lo.x, bounds.lo.y};
  for (const Point2D& p : polygon) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Point2D p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
    if (point_in_polygon(p, polygon)) return p;
  }
  // degenerate polygon; fall back to the vertex mean
  Point2D mean{0.0, 0.0};
  for (const Point2D& p : polygon) {
    mean.x += p.x;
    mean.y += p.y;
  }
  mean.x /= static_cast<double>(polygon.size());
  mean.y /= static_cast<double>(polygon.size());
  return mean;
}

}  // namespace

BreakSession simulate_session(const CohortProfile& profile,
                              const CohortProfile& companion_profile,
                              const FloorPlan& plan, std::int64_t duration_s,
                              const SimulateOptions& options,
                              const NoiseModel& noise, std::uint64_t seed,
                              const std::string& session_id,
                              const std::string& cohort_id) {
  profile.validate();
  companion_profile.validate();
  noise.validate();
  if (duration_s <= 0) throw ValidationError("duration must be positive");
  if (options.n_people < 1) throw ValidationError("need at least one person");
  if (options.companion_fraction < 0.0 || options.companion_fraction > 1.0) {
    throw ValidationError("companion fraction outside [0, 1]");
  }

  const BoundingBox& box = plan.bounds();
  const double inner_lo_x = box.lo.x + kWallMargin;
  const double inner_hi_x = box.hi.x - kWallMargin;
  const double inner_lo_y = box.lo.y + kWallMargin;
  const double inner_hi_y = box.hi.y - kWallMargin;
  const std::size_t named_regions = plan.region_count() - 1;

  Rng rng(derive_seed(seed, 0x5e5510));
  const std::size_t n = static_cast<std::size_t>(options.n_people);

  std::vector<Agent> agents(n);
  for (Agent& agent : agents) {
    agent.profile = rng.uniform() < options.companion_fraction
                        ? &companion_profile
                        : &profile;
    agent.pos = {rng.uniform(inner_lo_x, inner_hi_x),
                 rng.uniform(inner_lo_y, inner_hi_y)};
    agent.heading_deg = rng.uniform(0.0, 360.0);
    agent.bout_remaining = draw_bout(rng, agent.profile->bout_length);
    agent.speed = draw_speed(rng, *agent.profile);
  }

  std::vector<std::vector<TrueSample>> truth(n);
  for (auto& series : truth) series.reserve(static_cast<std::size_t>(duration_s));

  for (std::int64_t t = 0; t < duration_s; ++t) {
    // group events: a free agent may call a meeting and pull in free peers
    for (std::size_t i = 0; i < n; ++i) {
      Agent& initiator = agents[i];
      if (initiator.mode != Agent::Mode::Walk) continue;
      if (rng.uniform() >= initiator.profile->group_rate_per_person_min / 60.0) {
        continue;
      }
      std::vector<std::size_t> free_peers;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && agents[j].mode == Agent::Mode::Walk) free_peers.push_back(j);
      }
      if (free_peers.empty()) continue;
      const std::size_t target_size =
          initiator.profile->group_size_weights.empty()
              ? 2
              : 2 + rng.categorical(initiator.profile->group_size_weights);
      std::vector<std::size_t> members = {i};
      while (members.size() < target_size && !free_peers.empty()) {
        const std::size_t pick = rng.bounded(free_peers.size());
        members.push_back(free_peers[pick]);
        free_peers.erase(free_peers.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      if (members.size() < 2) continue;

      const std::vector<double>& weights = initiator.profile->region_weights;
      std::size_t region_idx;
      if (weights.size() == named_regions && named_regions > 0) {
        region_idx = rng.categorical(weights);
      } else {
        region_idx = named_regions == 0 ? 0 : rng.bounded(named_regions);
      }
      const Region& region = plan.regions()[region_idx];
      const Point2D center = random_point_in_polygon(rng, region.polygon, box);
      for (std::size_t m : members) {
        Agent& member = agents[m];
        const double radius = rng.uniform(0.4, 1.1);
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        member.spot = {
            std::clamp(center.x + radius * std::cos(angle), inner_lo_x, inner_hi_x),
            std::clamp(center.y + radius * std::sin(angle), inner_lo_y, inner_hi_y)};
        member.center = center;
        member.mode = Agent::Mode::Converge;
        member.speed = draw_speed(rng, *member.profile);
      }
    }

    // advance every agent one second and record the true sample
    for (std::size_t i = 0; i < n; ++i) {
      Agent& agent = agents[i];
      const CohortProfile& prof = *agent.profile;
      double orientation = agent.heading_deg;

      switch (agent.mode) {
        case Agent::Mode::Dwell: {
          orientation = std::atan2(agent.center.y - agent.pos.y,
                                   agent.center.x - agent.pos.x) * kRadToDeg;
          agent.dwell_remaining -= 1.0;
          if (agent.dwell_remaining <= 0.0) {
            agent.mode = Agent::Mode::Walk;
            agent.heading_deg = rng.uniform(0.0, 360.0);
            agent.bout_remaining = draw_bout(rng, prof.bout_length);
            agent.speed = draw_speed(rng, prof);
          }
          break;
        }
        case Agent::Mode::Converge: {
          const double dist = distance(agent.pos, agent.spot);
          const double bearing = std::atan2(agent.spot.y - agent.pos.y,
                                            agent.spot.x - agent.pos.x);
          orientation = bearing * kRadToDeg;
          if (dist <= std::max(agent.speed, kArriveRadius)) {
            agent.pos = agent.spot;
            agent.mode = Agent::Mode::Dwell;
            agent.dwell_remaining = rng.exponential(prof.dwell_mean_s);
            orientation = std::atan2(agent.center.y - agent.pos.y,
                                     agent.center.x - agent.pos.x) * kRadToDeg;
          } else {
            agent.pos.x += agent.speed * std::cos(bearing);
            agent.pos.y += agent.speed * std::sin(bearing);
            agent.heading_deg = bearing * kRadToDeg;
          }
          break;
        }
        case Agent::Mode::Walk: {
          if (rng.uniform() < prof.pause_prob) {
            break;  // stand for this step
          }
          if (prof.turn_sigma_deg > 0.0) {
            agent.heading_deg += rng.normal(0.0, prof.turn_sigma_deg);
          }
          double rad = agent.heading_deg * kDegToRad;
          Point2D next{agent.pos.x + agent.speed * std::cos(rad),
                       agent.pos.y + agent.speed * std::sin(rad)};
          if (next.x < inner_lo_x || next.x > inner_hi_x ||
              next.y < inner_lo_y || next.y > inner_hi_y) {
            // turn back toward the middle of the site
            const Point2D target{
                rng.uniform(box.lo.x + box.width() * 0.25,
                            box.lo.x + box.width() * 0.75),
                rng.uniform(box.lo.y + box.height() * 0.25,
                            box.lo.y + box.height() * 0.75)};
            agent.heading_deg = std::atan2(target.y - agent.pos.y,
                                           target.x - agent.pos.x) * kRadToDeg;
            rad = agent.heading_deg * kDegToRad;
            next = {agent.pos.x + agent.speed * std::cos(rad),
                    agent.pos.y + agent.speed * std::sin(rad)};
            next.x = std::clamp(next.x, inner_lo_x, inner_hi_x);
            next.y = std::clamp(next.y, inner_lo_y, inner_hi_y);
          }
          agent.pos = next;
          agent.bout_remaining -= agent.speed;
          if (agent.bout_remaining <= 0.0) {
            agent.bout_remaining = draw_bout(rng, prof.bout_length);
            agent.speed = draw_speed(rng, prof);
          }
          orientation = agent.heading_deg;
          break;
        }
      }
      truth[i].push_back({agent.pos, wrap_to_360(orientation)});
    }
  }

  // measurement model: per-axis position jitter, orientation noise, dropout
  BreakSession session;
  session.session_id = session_id;
  session.cohort_id = cohort_id;
  session.duration_s = duration_s;
  const double rho = noise.correlation_time_s > 0.0
                         ? std::exp(-1.0 / noise.correlation_time_s)
                         : 0.0;
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    Rng noise_rng(derive_seed(seed, 0xab0de + i));
    Trajectory traj;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%03zu", i);
    traj.track_id = buf;
    double ex = noise_rng.normal(0.0, noise.position_sigma_m);
    double ey = noise_rng.normal(0.0, noise.position_sigma_m);
    for (std::int64_t t = 0; t < duration_s; ++t) {
      const TrueSample& s = truth[i][static_cast<std::size_t>(t)];
      if (t > 0) {
        ex = rho * ex + innovation * noise_rng.normal(0.0, noise.position_sigma_m);
        ey = rho * ey + innovation * noise_rng.normal(0.0, noise.position_sigma_m);
      }
      const double no = noise_rng.normal(0.0, noise.orientation_sigma_deg);
      const bool dropped = noise_rng.uniform() < noise.dropout_prob;
      if (dropped) continue;
      TrackSample sample;
      sample.t = t;
      sample.position = {std::clamp(s.pos.x + ex, box.lo.x, box.hi.x),
                         std::clamp(s.pos.y + ey, box.lo.y, box.hi.y)};
      sample.orientation = wrap_to_360(s.orientation_deg + no);
      traj.samples.push_back(sample);
    }
    if (!traj.samples.empty()) session.trajectories.push_back(std::move(traj));
  }
  return session;
}

std::vector<Cohort> default_cohorts() {
  return {
      {"A", {22, 23, 24, 25, 26, 22, 24, 25, 23, 25, 25}},
      {"B", {14, 16, 17, 18, 19, 15, 20}},
      {"C", {21, 22, 23, 24, 25, 22, 23, 24, 21, 25, 23, 23}},
      {"D", {17, 18, 19, 20, 21, 16, 20, 19, 19, 21}},
      {"E", {23, 24, 25, 26, 27, 24, 25, 26, 23, 27, 25, 25, 25}},
      {"F", {18, 19, 20, 21, 22, 17, 21, 20, 19, 22, 20, 21, 20}},
  };
}

Study simulate_study(const CohortProfile& high, const CohortProfile& low,
                     const StudyOptions& options, const FloorPlan& plan,
                     const NoiseModel& noise, std::uint64_t seed) {
  if (options.high_sessions < 1 || options.low_sessions < 1) {
    throw ValidationError("study needs at least one session per class");
  }
  if (options.durations.empty()) {
    throw ValidationError("study needs at least one duration");
  }

  Study study;
  study.manifest.cohorts = default_cohorts();
  const char* high_cohorts[] = {"A", "C", "E"};
  const char* low_cohorts[] = {"B", "D", "F"};

  int remaining_high = options.high_sessions;
  int remaining_low = options.low_sessions;
  int high_emitted = 0, low_emitted = 0;
  std::size_t index = 0;
  while (remaining_high > 0 || remaining_low > 0) {
    // interleave classes so the duration cycle treats both alike
    const bool emit_high =
        remaining_high > 0 && (remaining_low == 0 || index % 2 == 0 ||
                               remaining_high >= remaining_low * 2);
    const CohortProfile& profile = emit_high ? high : low;
    const std::string cohort_id =
        emit_high ? high_cohorts[high_emitted % 3] : low_cohorts[low_emitted % 3];
    (emit_high ? high_emitted : low_emitted)++;
    (emit_high ? remaining_high : remaining_low)--;

    char sid[16];
    std::snprintf(sid, sizeof(sid), "S%04zu", index + 1);
    const std::int64_t duration =
        options.durations[index % options.durations.size()];

    SessionInfo info;
    info.session_id = sid;
    info.cohort_id = cohort_id;
    {
      char date[16];
      std::snprintf(date, sizeof(date), "2024-%02zu-%02zu",
                    1 + (index / 28) % 12, 1 + index % 28);
      info.date = date;
    }
    info.duration_s = duration;
    study.manifest.sessions.push_back(info);

    study.sessions.push_back(simulate_session(
        profile, high, plan, duration, options.session, noise,
        derive_seed(seed, 0x57001 + index), sid, cohort_id));
    ++index;
  }

  // normalize through the ingestion rules (gap splits, bounds checks) so the
  // returned sessions equal what a consumer reads back from the files
  std::vector<TrackRecord> records;
  for (const BreakSession& session : study.sessions) {
    for (const Trajectory& traj : session.trajectories) {
      for (const TrackSample& s : traj.samples) {
        records.push_back({session.session_id, traj.track_id, s.t, s.position.x,
                           s.position.y, s.orientation});
      }
    }
  }
  study.sessions =
      assemble_sessions(std::move(records), study.manifest, plan, {});
  return study;
}

}  // namespace trajkit
