#pragma once

#include "tdg/policy.hpp"
#include "tdg/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace tdg {

/// Exported event kinds (internal bookkeeping events are not logged).
enum class EventKind {
  Arrival,
  EngagementStart,
  Capture,
  Breach,
  Escape,
  Reselect,
  Anomaly,
};

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::Arrival;
  int id = -1;          ///< intruder id; -1 for defender-only events
  Vec2 pos = Vec2::Zero();
};

struct Counters {
  int64_t arrived = 0;
  int64_t captured = 0;
  int64_t breached = 0;
  int64_t escaped = 0;
};

/// Straight-line motion segment of one agent (agent -1 is the defender).
struct Segment {
  int agent = -1;
  double t0 = 0.0, t1 = 0.0;
  Vec2 x0 = Vec2::Zero(), x1 = Vec2::Zero();
};

struct TrialRecord {
  uint64_t seed = 0;
  double horizon = 0.0;
  GameParams params;
  StrategyConfig strategy;
  std::vector<Event> events;
  Counters counters;
  std::vector<Segment> segments; ///< filled only when trajectories are kept
};

struct Arrival {
  double t = 0.0;
  double theta = 0.0;
};

/// Arrival schedule: one intruder every `period` starting at t=0 (inclusive
/// of the horizon), each with a single uniform angle draw from `rng`.
std::vector<Arrival> schedule_arrivals(double horizon, const GameParams& p,
                                       TrialRng& rng);

/// Runs one full trial of the game, event-driven, and returns its record.
/// `seed` is the per-trial seed (derive from a master seed with trial_seed).
TrialRecord run_trial(const GameParams& p, const StrategyConfig& cfg,
                      double horizon, uint64_t seed,
                      bool emit_trajectories = false);

/// Fraction of the intruders scheduled by time t that have been captured:
/// captures in [0, t] divided by floor(t / period) + 1.
double capture_fraction(const TrialRecord& rec, double t);

nlohmann::json trial_to_json(const TrialRecord& rec);
TrialRecord trial_from_json(const nlohmann::json& j);

/// Consistency audit of a recorded trial without re-running it: event times
/// sorted, captures on the capture circle, arrivals on the outer ring,
/// counters matching the event log, and (when present) segments continuous
/// and within the speed bounds. Returns human-readable violations.
std::vector<std::string> verify_trial(const TrialRecord& rec);

} // namespace tdg
