#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tdg {
namespace {

const GameParams kP{};

// piecewise-linear position of one agent from its recorded segments
Vec2 segment_pos(const TrialRecord& rec, int agent, double t) {
  const Segment* hit = nullptr;
  for (const Segment& s : rec.segments) {
    if (s.agent != agent) continue;
    if (s.t0 - 1e-9 <= t && t <= s.t1 + 1e-9) hit = &s;
    if (s.t0 > t) break;
  }
  REQUIRE(hit != nullptr);
  if (hit->t1 - hit->t0 < 1e-15) return hit->x0;
  const double u = (t - hit->t0) / (hit->t1 - hit->t0);
  return hit->x0 + u * (hit->x1 - hit->x0);
}

TrialRecord one_arrival_trial(Objective obj, uint64_t seed) {
  GameParams p = kP;
  p.period = 1e9; // only the t=0 arrival fits the horizon
  StrategyConfig cfg;
  cfg.objective = obj;
  return run_trial(p, cfg, 20.0, seed);
}

} // namespace

TEST_CASE("event kind names round-trip") {
  for (EventKind k : {EventKind::Arrival, EventKind::EngagementStart,
                      EventKind::Capture, EventKind::Breach, EventKind::Escape,
                      EventKind::Reselect, EventKind::Anomaly}) {
    CHECK(event_kind_from_string(to_string(k)) == k);
  }
  CHECK(to_string(EventKind::EngagementStart) == "engagement_start");
  CHECK_THROWS(event_kind_from_string("teleport"));
}

TEST_CASE("arrival schedule spacing and reproducibility") {
  TrialRng rng(99);
  const auto as = schedule_arrivals(10.0, kP, rng);
  REQUIRE(as.size() == 6); // t = 0, 2, ..., 10 inclusive
  for (size_t i = 0; i < as.size(); ++i) {
    CHECK(as[i].t == doctest::Approx(2.0 * static_cast<double>(i)));
    CHECK(as[i].theta > -kPi);
    CHECK(as[i].theta <= kPi);
  }
  TrialRng rng2(99);
  const auto bs = schedule_arrivals(10.0, kP, rng2);
  for (size_t i = 0; i < as.size(); ++i) {
    CHECK(as[i].theta == bs[i].theta);
  }
}

TEST_CASE("identical seeds give identical records") {
  const StrategyConfig cfg;
  const TrialRecord a = run_trial(kP, cfg, 500.0, 1234);
  const TrialRecord b = run_trial(kP, cfg, 500.0, 1234);
  CHECK(trial_to_json(a).dump() == trial_to_json(b).dump());
  const TrialRecord c = run_trial(kP, cfg, 500.0, 1235);
  CHECK(trial_to_json(a).dump() != trial_to_json(c).dump());
}

TEST_CASE("trajectory emission does not change the event stream") {
  const StrategyConfig cfg;
  const TrialRecord lean = run_trial(kP, cfg, 300.0, 7);
  const TrialRecord fat = run_trial(kP, cfg, 300.0, 7, true);
  CHECK(lean.segments.empty());
  CHECK(!fat.segments.empty());
  CHECK(trial_to_json(lean)["events"].dump() ==
        trial_to_json(fat)["events"].dump());
}

TEST_CASE("record round-trips through json") {
  const StrategyConfig cfg;
  const TrialRecord rec = run_trial(kP, cfg, 200.0, 5, true);
  const nlohmann::json j = trial_to_json(rec);
  const TrialRecord back = trial_from_json(j);
  CHECK(trial_to_json(back).dump() == j.dump());
  CHECK(back.seed == rec.seed);
  CHECK(back.events.size() == rec.events.size());
  CHECK(back.segments.size() == rec.segments.size());
}

TEST_CASE("run_trial validates its parameters") {
  GameParams p = kP;
  p.period = -1.0;
  CHECK_THROWS_AS(run_trial(p, StrategyConfig{}, 100.0, 1),
                  NonPositiveParameter);
  p = kP;
  p.rho_t = 4.4;
  CHECK_THROWS_AS(run_trial(p, StrategyConfig{}, 100.0, 1),
                  AssumptionViolation);
}

TEST_CASE("a lone intruder is captured at the nominal times") {
  const Coefficients k = coefficients(kP);
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    const TrialRecord t = one_arrival_trial(Objective::MinTime, seed);
    REQUIRE(t.counters.arrived == 1);
    REQUIRE(t.counters.captured == 1);
    const auto cap = std::find_if(
        t.events.begin(), t.events.end(),
        [](const Event& e) { return e.kind == EventKind::Capture; });
    REQUIRE(cap != t.events.end());
    CHECK(cap->t == doctest::Approx(8.48884931087937).epsilon(1e-6));
    CHECK(cap->pos.norm() == doctest::Approx(k.capture_radius).epsilon(1e-9));

    const TrialRecord d = one_arrival_trial(Objective::MinDistance, seed);
    REQUIRE(d.counters.captured == 1);
    const auto dcap = std::find_if(
        d.events.begin(), d.events.end(),
        [](const Event& e) { return e.kind == EventKind::Capture; });
    REQUIRE(dcap != d.events.end());
    CHECK(dcap->t == doctest::Approx(212.0 / 21.0).epsilon(1e-6));
    CHECK(dcap->pos.norm() == doctest::Approx(k.capture_radius).epsilon(1e-9));
  }
}

TEST_CASE("counters add up against the event log") {
  const TrialRecord rec = run_trial(kP, StrategyConfig{}, 2000.0, 31);
  int64_t arr = 0, cap = 0, bre = 0, esc = 0;
  for (const Event& e : rec.events) {
    switch (e.kind) {
      case EventKind::Arrival: ++arr; break;
      case EventKind::Capture: ++cap; break;
      case EventKind::Breach: ++bre; break;
      case EventKind::Escape: ++esc; break;
      default: break;
    }
  }
  CHECK(arr == rec.counters.arrived);
  CHECK(cap == rec.counters.captured);
  CHECK(bre == rec.counters.breached);
  CHECK(esc == rec.counters.escaped);
  CHECK(cap + bre + esc <= arr);
  CHECK(std::is_sorted(rec.events.begin(), rec.events.end(),
                       [](const Event& a, const Event& b) { return a.t < b.t; }));
}

TEST_CASE("recorded trials pass the audit") {
  for (uint64_t seed : {7ull, 8ull}) {
    const TrialRecord rec = run_trial(kP, StrategyConfig{}, 400.0, seed, true);
    const auto issues = verify_trial(rec);
    for (const std::string& s : issues) {
      CAPTURE(s);
      CHECK(false);
    }
    CHECK(issues.empty());
  }
}

TEST_CASE("the audit flags doctored records") {
  TrialRecord rec = run_trial(kP, StrategyConfig{}, 300.0, 7, true);
  REQUIRE(verify_trial(rec).empty());

  TrialRecord off = rec;
  for (Event& e : off.events) {
    if (e.kind == EventKind::Capture) {
      e.pos *= 1.01; // push the capture off the capture circle
      break;
    }
  }
  CHECK(!verify_trial(off).empty());

  TrialRecord drift = rec;
  drift.counters.captured += 1;
  CHECK(!verify_trial(drift).empty());

  TrialRecord warp = rec;
  if (warp.segments.size() > 3) {
    warp.segments[2].x1 += Vec2(0.5, 0.0); // teleport between segments
    CHECK(!verify_trial(warp).empty());
  }
}

TEST_CASE("event geometry agrees with the recorded trajectories") {
  for (uint64_t seed : {3ull, 11ull, 27ull}) {
    const TrialRecord rec = run_trial(kP, StrategyConfig{}, 250.0, seed, true);
    REQUIRE(verify_trial(rec).empty());
    for (const Event& e : rec.events) {
      switch (e.kind) {
        case EventKind::Arrival:
          CHECK(e.pos.norm() == doctest::Approx(9.0).epsilon(1e-9));
          break;
        case EventKind::Capture: {
          // defender and intruder meet at the event point
          const Vec2 xd = segment_pos(rec, -1, e.t);
          const Vec2 xa = segment_pos(rec, e.id, e.t);
          CHECK((xd - e.pos).norm() < 1e-6);
          CHECK((xa - e.pos).norm() < 1e-6);
          break;
        }
        case EventKind::Breach: {
          const Vec2 xa = segment_pos(rec, e.id, e.t);
          CHECK((xa - e.pos).norm() < 1e-6);
          CHECK(e.pos.norm() == doctest::Approx(kP.r_t).epsilon(1e-6));
          break;
        }
        case EventKind::EngagementStart: {
          // the defender stands exactly on the target's sensing boundary
          const Vec2 xd = segment_pos(rec, -1, e.t);
          const Vec2 xa = segment_pos(rec, e.id, e.t);
          CHECK((xd - e.pos).norm() < 1e-6);
          CHECK((xd - xa).norm() == doctest::Approx(kP.rho_a).epsilon(1e-6));
          break;
        }
        default:
          break;
      }
    }
  }
}

TEST_CASE("capture fraction over the scheduled arrivals") {
  TrialRecord rec;
  rec.params = kP; // period 2: arrivals at 0, 2, 4, ...
  rec.events.push_back({1.0, EventKind::Capture, 0, Vec2::Zero()});
  rec.events.push_back({4.0, EventKind::Capture, 1, Vec2::Zero()});
  CHECK(capture_fraction(rec, -1.0) == 1.0);
  CHECK(capture_fraction(rec, 0.5) == doctest::Approx(0.0));
  CHECK(capture_fraction(rec, 1.0) == doctest::Approx(1.0));
  CHECK(capture_fraction(rec, 3.9) == doctest::Approx(0.5));
  CHECK(capture_fraction(rec, 4.0) == doctest::Approx(2.0 / 3.0));
  CHECK(capture_fraction(rec, 100.0) == doctest::Approx(2.0 / 51.0));
}

TEST_CASE("long default run stays consistent and fast enough to test") {
  const TrialRecord rec = run_trial(kP, StrategyConfig{}, 3000.0, 42);
  CHECK(rec.counters.arrived == 1501);
  CHECK(rec.counters.captured > 0);
  CHECK(rec.counters.breached > 0);
  CHECK(rec.counters.escaped == 0); // radial or outward runs never exit
  // every capture sits on the capture circle
  const Coefficients k = coefficients(kP);
  for (const Event& e : rec.events) {
    if (e.kind == EventKind::Capture)
      CHECK(e.pos.norm() == doctest::Approx(k.capture_radius).epsilon(1e-6));
  }
  // the long-run fraction clears the published floor for this strategy
  CHECK(capture_fraction(rec, 3000.0) > 0.15);
}

} // namespace tdg
