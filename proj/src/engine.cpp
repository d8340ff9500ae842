#include "tdg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace tdg {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Arrival: return "arrival";
    case EventKind::EngagementStart: return "engagement_start";
    case EventKind::Capture: return "capture";
    case EventKind::Breach: return "breach";
    case EventKind::Escape: return "escape";
    case EventKind::Reselect: return "reselect";
    case EventKind::Anomaly: return "anomaly";
  }
  return "unknown";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "arrival") return EventKind::Arrival;
  if (s == "engagement_start") return EventKind::EngagementStart;
  if (s == "capture") return EventKind::Capture;
  if (s == "breach") return EventKind::Breach;
  if (s == "escape") return EventKind::Escape;
  if (s == "reselect") return EventKind::Reselect;
  if (s == "anomaly") return EventKind::Anomaly;
  throw std::invalid_argument("unknown event kind: " + s);
}

std::vector<Arrival> schedule_arrivals(double horizon, const GameParams& p,
                                       TrialRng& rng) {
  std::vector<Arrival> out;
  for (int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * p.period;
    if (t > horizon) break;
    out.push_back({t, rng.uniform_angle()});
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;
// Sensor dead time after losing contact. Without it a path that grazes the
// sensing circle tangentially re-triggers onset and exit at the same instant
// forever; 1e-6 shifts the re-check past the tangency (position error bounded
// by the closing speed, ~2e-6, far below every verification tolerance).
constexpr double kOnsetRefractory = 1e-6;

/// First s >= 0 with |p0 + v s| <= R, assuming we start outside (or on) R.
std::optional<double> enter_time(const Vec2& p0, const Vec2& v, double R) {
  const double c = p0.squaredNorm() - R * R;
  if (c <= 0.0) return 0.0;
  const double a = v.squaredNorm();
  if (a < 1e-18) return std::nullopt;
  const double b = p0.dot(v);
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = (-b - std::sqrt(disc)) / a;
  if (s < 0.0) return std::nullopt;
  return s;
}

/// First s >= 0 with |p0 + v s| >= R (the later quadratic root).
std::optional<double> exit_time(const Vec2& p0, const Vec2& v, double R) {
  const double a = v.squaredNorm();
  const double c = p0.squaredNorm() - R * R;
  if (a < 1e-18) return c >= 0.0 ? std::optional<double>(0.0) : std::nullopt;
  const double b = p0.dot(v);
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = (-b + std::sqrt(disc)) / a;
  if (s < 0.0) return std::nullopt;
  return s;
}

/// Internal event types; enum order is the tie-break priority at equal times.
enum class Ev {
  Capture = 0,
  BreachCross,
  RingExit,
  SensingOnset,
  RangeExit,
  ProbeCheck,
  ConvergeArrive,
  EngagementStart,
  DefenderWaypoint,
  IdleCenter,
  NewArrival,
  None,
};

struct Cand {
  double t = kInf;
  Ev ev = Ev::None;
  int id = -1;
};

struct Intr {
  int id = -1;
  double arrival_t = 0.0;
  Vec2 anchor = Vec2::Zero();
  double anchor_t = 0.0;
  Vec2 vel = Vec2::Zero();
  IntruderMode mode = IntruderMode::Incognito;
  Vec2 aim = Vec2::Zero();
  bool probed = false;       // one probe per sensing episode
  double probe_end = kInf;
  Vec2 probe_start_xd = Vec2::Zero();
  double onset_block = -kInf;  // no onset candidates before this time

  Vec2 pos(double t) const { return anchor + vel * (t - anchor_t); }
};

enum class DAct { Idle, Transit, Waiting, Pursuing };

struct Plan {
  int target = -1;
  double t_eng_abs = 0.0;
  double transit_end = 0.0;
  double t_cap_end = 0.0;
  Vec2 x_eng = Vec2::Zero();
  Vec2 x_p = Vec2::Zero();
  Vec2 ia = Vec2::Zero(); // planned intruder position at engagement
};

struct Sim {
  const GameParams& P;
  const StrategyConfig& cfg;
  double horizon;
  bool emit;
  Coefficients C;
  TrialRecord rec;

  std::vector<Arrival> arrivals;
  size_t next_arr = 0;
  std::vector<Intr> intr;
  std::vector<int> live;
  int64_t live_count = 0;
  CapturabilityCache cache;

  Vec2 d_anchor = Vec2::Zero();
  double d_anchor_t = 0.0;
  Vec2 d_vel = Vec2::Zero();
  DAct act = DAct::Idle;
  Plan plan;

  double now = 0.0;

  Sim(const GameParams& p, const StrategyConfig& c, double h, bool e)
      : P(p), cfg(c), horizon(h), emit(e), C(coefficients(p)) {}

  Vec2 dpos(double t) const { return d_anchor + d_vel * (t - d_anchor_t); }

  void reanchor_def(double t, const Vec2& pos, const Vec2& vel, DAct a) {
    if (emit && t > d_anchor_t)
      rec.segments.push_back({-1, d_anchor_t, t, d_anchor, pos});
    d_anchor = pos;
    d_anchor_t = t;
    d_vel = vel;
    act = a;
  }

  void reanchor_intr(Intr& a, double t, const Vec2& pos, const Vec2& vel) {
    if (emit && t > a.anchor_t)
      rec.segments.push_back({a.id, a.anchor_t, t, a.anchor, pos});
    a.anchor = pos;
    a.anchor_t = t;
    a.vel = vel;
  }

  void push_event(double t, EventKind k, int id, const Vec2& pos) {
    rec.events.push_back({t, k, id, pos});
    const auto& c = rec.counters;
    if (c.arrived != c.captured + c.breached + c.escaped + live_count)
      throw InternalInconsistency("intruder counters stopped balancing");
  }

  void drop_live(int id) {
    auto it = std::find(live.begin(), live.end(), id);
    if (it == live.end())
      throw InternalInconsistency("terminal transition of a non-live intruder");
    *it = live.back();
    live.pop_back();
    --live_count;
  }

  /// Re-runs the intruder's pure mode machine against what it can see at t
  /// and applies the outcome (velocity, aim, probe scheduling, latch).
  void apply_transition(Intr& a, double t, bool at_probe_check,
                        bool force_visible = false) {
    const Vec2 ap = a.pos(t);
    const Vec2 dp = dpos(t);
    TransitionContext ctx;
    ctx.mode = a.mode;
    ctx.x_a = ap;
    ctx.aim = a.aim;
    ctx.probed_this_episode = a.probed;
    const bool in_range =
        force_visible ||
        (dp - ap).squaredNorm() <= P.rho_a * P.rho_a;
    if (in_range) ctx.x_d = dp;
    if (at_probe_check && in_range) {
      ctx.probe_start_x_d = a.probe_start_xd;
      ctx.observed_disp = dp - a.probe_start_xd;
    }
    const TransitionResult res = intruder_transition(ctx, P);
    if (res.mode == IntruderMode::Incognito) a.probed = false;
    if (res.mode != IntruderMode::Probing) a.probe_end = kInf;
    if (res.start_probe) {
      a.probed = true;
      a.probe_end = t + kProbeWindow;
      a.probe_start_xd = dp;
    }
    a.aim = res.aim;
    reanchor_intr(a, t, ap, res.velocity);
    a.mode = res.mode;
  }

  void select_target(double t) {
    const Vec2 dp = dpos(t);
    std::vector<Candidate> pool;
    for (int i : live) {
      Intr& a = intr[i];
      if (a.mode != IntruderMode::Incognito &&
          a.mode != IntruderMode::ResumedRadial)
        continue;
      const Vec2 ap = a.pos(t);
      if ((ap - dp).squaredNorm() <= P.rho_a * P.rho_a) continue;
      if (a.mode == IntruderMode::ResumedRadial) {
        // out of range with the range-exit event still pending at this very
        // timestamp: canonicalize before the pool sees it
        a.mode = IntruderMode::Incognito;
        a.probed = false;
        a.probe_end = kInf;
      }
      if (ap.norm() > C.outer_radius + kTol) continue;
      pool.push_back({a.id, PolarPoint::from(ap)});
    }
    while (!pool.empty()) {
      const auto sel = defender_select(pool, dp, cfg, P, &cache);
      if (!sel) break;
      Intr& a = intr[*sel];
      const PolarPoint apol = PolarPoint::from(a.pos(t));
      const auto es = try_earliest_engagement(dp, apol, cfg.objective, P);
      if (!es) {
        // capturable by the angle test yet no sensing-safe plan: log and
        // fall through to the next candidate
        push_event(t, EventKind::Anomaly, a.id, a.pos(t));
        pool.erase(std::find_if(pool.begin(), pool.end(),
                                [&](const Candidate& c) { return c.id == *sel; }));
        continue;
      }
      plan.target = a.id;
      plan.t_eng_abs = t + es->t_eng;
      plan.transit_end = t + es->transit_distance;
      plan.t_cap_end = plan.t_eng_abs + es->t_cap;
      plan.x_eng = es->x_eng;
      plan.x_p = es->x_p;
      plan.ia = (apol.r - P.nu * es->t_eng) * unit(apol.theta);
      if (es->transit_distance > 1e-12)
        reanchor_def(t, dp, (es->x_eng - dp) / es->transit_distance,
                     DAct::Transit);
      else
        reanchor_def(t, es->x_eng, Vec2::Zero(), DAct::Waiting);
      return;
    }
    plan.target = -1;
    reanchor_def(t, dp, defender_idle_motion(dp), DAct::Idle);
  }

  Cand best_candidate() const {
    Cand best;
    auto consider = [&](double t, Ev ev, int id) {
      if (t < now) t = now;
      if (t > horizon) return;
      if (std::tie(t, ev, id) <
          std::tie(best.t, best.ev, best.id))
        best = {t, ev, id};
    };

    if (next_arr < arrivals.size())
      consider(arrivals[next_arr].t, Ev::NewArrival, static_cast<int>(intr.size()));

    switch (act) {
      case DAct::Idle:
        if (d_vel.squaredNorm() > 0.0)
          consider(d_anchor_t + d_anchor.norm(), Ev::IdleCenter, -1);
        break;
      case DAct::Transit:
        consider(plan.transit_end, Ev::DefenderWaypoint, plan.target);
        consider(plan.t_eng_abs, Ev::EngagementStart, plan.target);
        break;
      case DAct::Waiting:
        consider(plan.t_eng_abs, Ev::EngagementStart, plan.target);
        break;
      case DAct::Pursuing:
        consider(plan.t_cap_end, Ev::Capture, plan.target);
        break;
    }

    const Vec2 dp = dpos(now);
    const double rho2 = P.rho_a * P.rho_a;
    for (int i : live) {
      const Intr& a = intr[i];
      const Vec2 ap = a.pos(now);

      if (auto s = enter_time(ap, a.vel, P.r_t))
        consider(now + *s, Ev::BreachCross, a.id);
      if (auto s = exit_time(ap, a.vel, C.outer_radius))
        consider(now + *s, Ev::RingExit, a.id);

      switch (a.mode) {
        case IntruderMode::Incognito: {
          const double t0 = std::max(now, a.onset_block);
          if (t0 > horizon) break;
          auto consider_onset = [&](double t_on) {
            // contacts inside the vetting cushion count as the engagement
            const bool covered_by_plan =
                a.id == plan.target &&
                (act == DAct::Transit || act == DAct::Waiting) &&
                t_on >= plan.t_eng_abs - kOnsetCushion;
            if (!covered_by_plan) consider(t_on, Ev::SensingOnset, a.id);
          };
          const Vec2 rel = a.pos(t0) - dpos(t0);
          if (rel.squaredNorm() > rho2) {
            if (auto s = enter_time(rel, a.vel - d_vel, P.rho_a))
              consider_onset(t0 + *s);
          } else {
            // contact was made during the sensor dead time
            consider_onset(t0);
          }
          break;
        }
        case IntruderMode::ResumedRadial: {
          const Vec2 rel = ap - dp;
          if (rel.squaredNorm() <= rho2) {
            if (auto s = exit_time(rel, a.vel - d_vel, P.rho_a))
              consider(now + *s, Ev::RangeExit, a.id);
          } else {
            consider(now, Ev::RangeExit, a.id);
          }
          break;
        }
        case IntruderMode::Probing:
          consider(a.probe_end, Ev::ProbeCheck, a.id);
          break;
        case IntruderMode::ConvergingToXp: {
          if (a.id == plan.target && act == DAct::Pursuing) break;
          const double dist = (a.aim - ap).norm();
          consider(now + dist / P.nu, Ev::ConvergeArrive, a.id);
          break;
        }
        default:
          break;
      }
    }
    return best;
  }

  void handle_arrival() {
    const Arrival& ar = arrivals[next_arr++];
    now = ar.t;
    const int id = static_cast<int>(intr.size());
    Intr a;
    a.id = id;
    a.arrival_t = ar.t;
    a.anchor = C.outer_radius * unit(ar.theta);
    a.anchor_t = ar.t;
    a.vel = -P.nu * unit(ar.theta);
    intr.push_back(a);
    live.push_back(id);
    ++live_count;
    ++rec.counters.arrived;
    push_event(ar.t, EventKind::Arrival, id, intr[id].anchor);

    Intr& ref = intr[id];
    if ((dpos(now) - ref.anchor).squaredNorm() <= P.rho_a * P.rho_a)
      apply_transition(ref, now, false);
    if (act == DAct::Idle) {
      select_target(now);
    } else if (act == DAct::Transit || act == DAct::Waiting) {
      // commitment review: before the engagement starts, an arrival may
      // force a re-selection, but only if the committed target is no
      // longer capturable from where the defender stands now
      const Vec2 tp = intr[plan.target].pos(now);
      if (!is_capturable(PolarPoint::from(dpos(now)), PolarPoint::from(tp),
                         P, &cache))
        abandon_plan_and_reselect(now);
    }
  }

  void handle_engagement_start(double t) {
    now = t;
    Intr& a = intr[plan.target];
    reanchor_def(t, plan.x_eng, (plan.x_p - plan.x_eng).normalized(),
                 DAct::Pursuing);
    // snap the intruder onto the planned radial track, then let it sense us
    reanchor_intr(a, t, plan.ia, a.vel);
    apply_transition(a, t, false, /*force_visible=*/true);
    if (a.mode != IntruderMode::Probing ||
        (a.aim - plan.x_p).norm() > 1e-6) {
      std::ostringstream os;
      os.precision(17);
      os << "engaged intruder did not start probing toward the planned "
            "capture point: t=" << t << " id=" << a.id << " mode="
         << to_string(a.mode) << " aim_gap=" << (a.aim - plan.x_p).norm()
         << " |xd-xa|=" << (plan.x_eng - plan.ia).norm() << " r_a="
         << plan.ia.norm() << " ia=(" << plan.ia.x() << "," << plan.ia.y()
         << ") x_eng=(" << plan.x_eng.x() << "," << plan.x_eng.y()
         << ") x_p=(" << plan.x_p.x() << "," << plan.x_p.y()
         << ") aim=(" << a.aim.x() << "," << a.aim.y() << ")";
      throw InternalInconsistency(os.str());
    }
    a.aim = plan.x_p; // exact convergence bookkeeping
    push_event(t, EventKind::EngagementStart, a.id, plan.x_eng);
  }

  void handle_capture(double t) {
    now = t;
    Intr& a = intr[plan.target];
    if (std::abs(plan.x_p.norm() - C.capture_radius) > 1e-6)
      throw InternalInconsistency("capture point left the capture circle");
    reanchor_intr(a, t, plan.x_p, Vec2::Zero());
    a.mode = IntruderMode::Captured;
    a.probe_end = kInf;
    drop_live(a.id);
    ++rec.counters.captured;
    push_event(t, EventKind::Capture, a.id, plan.x_p);
    reanchor_def(t, plan.x_p, Vec2::Zero(), DAct::Idle);
    plan.target = -1;
    select_target(t);
  }

  void abandon_plan_and_reselect(double t) {
    const Vec2 dp = dpos(t);
    push_event(t, EventKind::Reselect, -1, dp);
    plan.target = -1;
    reanchor_def(t, dp, Vec2::Zero(), DAct::Idle);
    select_target(t);
  }

  void handle_breach(double t, int id) {
    now = t;
    Intr& a = intr[id];
    const Vec2 bp = a.pos(t);
    reanchor_intr(a, t, bp, Vec2::Zero());
    a.mode = IntruderMode::Breached;
    a.probe_end = kInf;
    drop_live(id);
    ++rec.counters.breached;
    push_event(t, EventKind::Breach, id, bp);
    if (plan.target == id && act != DAct::Idle) abandon_plan_and_reselect(t);
  }

  void handle_ring_exit(double t, int id) {
    now = t;
    Intr& a = intr[id];
    const Vec2 xp = a.pos(t);
    reanchor_intr(a, t, xp, Vec2::Zero());
    a.mode = IntruderMode::Escaped;
    a.probe_end = kInf;
    drop_live(id);
    ++rec.counters.escaped;
    push_event(t, EventKind::Escape, id, xp);
    if (plan.target == id && act != DAct::Idle) abandon_plan_and_reselect(t);
  }

  void handle_sensing_onset(double t, int id) {
    now = t;
    Intr& a = intr[id];
    const bool premature = plan.target == id &&
                           (act == DAct::Transit || act == DAct::Waiting) &&
                           t < plan.t_eng_abs - kOnsetCushion;
    if (premature) {
      // the planned target saw us before the planned engagement: the radial
      // prediction underlying the plan is void
      push_event(t, EventKind::Anomaly, id, a.pos(t));
      apply_transition(a, t, false, /*force_visible=*/true);
      abandon_plan_and_reselect(t);
      return;
    }
    apply_transition(a, t, false, /*force_visible=*/true);
  }

  void handle_probe_check(double t, int id) {
    now = t;
    Intr& a = intr[id];
    a.probe_end = kInf;
    apply_transition(a, t, true);
  }

  void handle_converge_arrive(double t, int id) {
    now = t;
    Intr& a = intr[id];
    // reached the aim point with nobody there: fall back to the evasion
    // logic (stay latched) or go dark if the defender is out of range
    const bool in_range =
        (dpos(t) - a.pos(t)).squaredNorm() <= P.rho_a * P.rho_a;
    a.mode = in_range ? IntruderMode::ResumedRadial : IntruderMode::Incognito;
    if (!in_range) a.probed = false;
    apply_transition(a, t, false);
  }

  void handle_range_exit(double t, int id) {
    now = t;
    Intr& a = intr[id];
    a.mode = IntruderMode::Incognito;
    a.probed = false;
    a.probe_end = kInf;
    a.onset_block = t + kOnsetRefractory;
    // velocity is already radial; no re-anchor needed
  }

  /// After each event: catch mode flips that have no dedicated trigger
  /// (dominance circle newly reaching the target while sensed, or an
  /// intruder left deep inside sensing range without an onset event).
  void sweep(double t) {
    const Vec2 dp = dpos(t);
    const double rho2 = P.rho_a * P.rho_a;
    for (int i : live) {
      Intr& a = intr[i];
      if (a.mode == IntruderMode::ResumedRadial) {
        const Vec2 ap = a.pos(t);
        if ((ap - dp).squaredNorm() <= rho2 &&
            breach_possible(apollonius(ap, dp, P), P))
          apply_transition(a, t, false);
      } else if (a.mode == IntruderMode::Incognito) {
        // contacts inside the vetting cushion count as the engagement: let
        // the engagement handler run the first transition at t_eng exactly
        if (a.id == plan.target &&
            (act == DAct::Transit || act == DAct::Waiting) &&
            t >= plan.t_eng_abs - kOnsetCushion)
          continue;
        const Vec2 ap = a.pos(t);
        const double margin = P.rho_a - kTol;
        if ((ap - dp).squaredNorm() < margin * margin)
          apply_transition(a, t, false);
      }
    }
  }

  void dispatch(const Cand& c) {
    switch (c.ev) {
      case Ev::NewArrival: handle_arrival(); break;
      case Ev::IdleCenter:
        now = c.t;
        reanchor_def(c.t, Vec2::Zero(), Vec2::Zero(), DAct::Idle);
        break;
      case Ev::DefenderWaypoint:
        now = c.t;
        reanchor_def(c.t, plan.x_eng, Vec2::Zero(), DAct::Waiting);
        break;
      case Ev::EngagementStart: handle_engagement_start(c.t); break;
      case Ev::Capture: handle_capture(c.t); break;
      case Ev::BreachCross: handle_breach(c.t, c.id); break;
      case Ev::RingExit: handle_ring_exit(c.t, c.id); break;
      case Ev::SensingOnset: handle_sensing_onset(c.t, c.id); break;
      case Ev::RangeExit: handle_range_exit(c.t, c.id); break;
      case Ev::ProbeCheck: handle_probe_check(c.t, c.id); break;
      case Ev::ConvergeArrive: handle_converge_arrive(c.t, c.id); break;
      case Ev::None: break;
    }
  }

  void finalize() {
    if (!emit) return;
    if (horizon > d_anchor_t)
      rec.segments.push_back({-1, d_anchor_t, horizon, d_anchor, dpos(horizon)});
    for (int i : live) {
      Intr& a = intr[i];
      if (horizon > a.anchor_t)
        rec.segments.push_back({a.id, a.anchor_t, horizon, a.anchor, a.pos(horizon)});
    }
  }
};

} // namespace

TrialRecord run_trial(const GameParams& p, const StrategyConfig& cfg,
                      double horizon, uint64_t seed, bool emit_trajectories) {
  validate_params(p);
  Sim sim(p, cfg, horizon, emit_trajectories);
  sim.rec.seed = seed;
  sim.rec.horizon = horizon;
  sim.rec.params = p;
  sim.rec.strategy = cfg;

  TrialRng rng(seed);
  sim.arrivals = schedule_arrivals(horizon, p, rng);
  sim.rec.events.reserve(sim.arrivals.size() * 4);

  size_t steps = 0;
  while (true) {
    const Cand c = sim.best_candidate();
    if (c.ev == Ev::None) break;
    if (++steps > 100'000'000)
      throw InternalInconsistency("event budget exhausted; the loop is stuck");
    sim.dispatch(c);
    sim.sweep(sim.now);
  }
  sim.finalize();
  return sim.rec;
}

double capture_fraction(const TrialRecord& rec, double t) {
  if (t < 0.0) return 1.0;
  const double denom = std::floor(t / rec.params.period) + 1.0;
  int64_t caps = 0;
  for (const auto& e : rec.events) {
    if (e.t > t) break;
    if (e.kind == EventKind::Capture) ++caps;
  }
  return static_cast<double>(caps) / denom;
}

nlohmann::json trial_to_json(const TrialRecord& rec) {
  nlohmann::json j;
  j["header"] = {
      {"seed", rec.seed},
      {"horizon", rec.horizon},
      {"params",
       {{"r_t", rec.params.r_t},
        {"rho_a", rec.params.rho_a},
        {"rho_t", rec.params.rho_t},
        {"nu", rec.params.nu},
        {"period", rec.params.period}}},
      {"strategy",
       {{"w", rec.strategy.w},
        {"objective", to_string(rec.strategy.objective)}}},
  };
  j["counters"] = {{"arrived", rec.counters.arrived},
                   {"captured", rec.counters.captured},
                   {"breached", rec.counters.breached},
                   {"escaped", rec.counters.escaped}};
  auto events = nlohmann::json::array();
  for (const auto& e : rec.events)
    events.push_back({{"t", e.t},
                      {"kind", to_string(e.kind)},
                      {"id", e.id},
                      {"x", e.pos.x()},
                      {"y", e.pos.y()}});
  j["events"] = std::move(events);
  auto segments = nlohmann::json::array();
  for (const auto& s : rec.segments)
    segments.push_back({{"agent", s.agent},
                        {"t0", s.t0},
                        {"t1", s.t1},
                        {"x0", {s.x0.x(), s.x0.y()}},
                        {"x1", {s.x1.x(), s.x1.y()}}});
  j["segments"] = std::move(segments);
  return j;
}

TrialRecord trial_from_json(const nlohmann::json& j) {
  TrialRecord rec;
  const auto& h = j.at("header");
  rec.seed = h.at("seed").get<uint64_t>();
  rec.horizon = h.at("horizon").get<double>();
  const auto& p = h.at("params");
  rec.params.r_t = p.at("r_t").get<double>();
  rec.params.rho_a = p.at("rho_a").get<double>();
  rec.params.rho_t = p.at("rho_t").get<double>();
  rec.params.nu = p.at("nu").get<double>();
  rec.params.period = p.at("period").get<double>();
  const auto& s = h.at("strategy");
  rec.strategy.w = s.at("w").get<double>();
  rec.strategy.objective = objective_from_string(s.at("objective").get<std::string>());
  const auto& c = j.at("counters");
  rec.counters.arrived = c.at("arrived").get<int64_t>();
  rec.counters.captured = c.at("captured").get<int64_t>();
  rec.counters.breached = c.at("breached").get<int64_t>();
  rec.counters.escaped = c.at("escaped").get<int64_t>();
  for (const auto& e : j.at("events")) {
    Event ev;
    ev.t = e.at("t").get<double>();
    ev.kind = event_kind_from_string(e.at("kind").get<std::string>());
    ev.id = e.at("id").get<int>();
    ev.pos = Vec2(e.at("x").get<double>(), e.at("y").get<double>());
    rec.events.push_back(ev);
  }
  if (j.contains("segments")) {
    for (const auto& sj : j.at("segments")) {
      Segment seg;
      seg.agent = sj.at("agent").get<int>();
      seg.t0 = sj.at("t0").get<double>();
      seg.t1 = sj.at("t1").get<double>();
      seg.x0 = Vec2(sj.at("x0")[0].get<double>(), sj.at("x0")[1].get<double>());
      seg.x1 = Vec2(sj.at("x1")[0].get<double>(), sj.at("x1")[1].get<double>());
      rec.segments.push_back(seg);
    }
  }
  return rec;
}

std::vector<std::string> verify_trial(const TrialRecord& rec) {
  std::vector<std::string> issues;
  auto complain = [&](const std::string& msg) { issues.push_back(msg); };
  const Coefficients C = coefficients(rec.params);

  double prev_t = 0.0;
  Counters tally;
  for (size_t i = 0; i < rec.events.size(); ++i) {
    const Event& e = rec.events[i];
    std::ostringstream tag;
    tag << "event " << i << " (" << to_string(e.kind) << " t=" << e.t << ")";
    if (e.t < prev_t) complain(tag.str() + ": time went backwards");
    prev_t = std::max(prev_t, e.t);
    if (e.t < -1e-12 || e.t > rec.horizon + 1e-9)
      complain(tag.str() + ": time outside [0, horizon]");
    switch (e.kind) {
      case EventKind::Arrival:
        ++tally.arrived;
        if (std::abs(e.pos.norm() - C.outer_radius) > 1e-9)
          complain(tag.str() + ": arrival off the outer ring");
        break;
      case EventKind::Capture:
        ++tally.captured;
        if (std::abs(e.pos.norm() - C.capture_radius) > 1e-6)
          complain(tag.str() + ": capture off the capture circle");
        break;
      case EventKind::Breach:
        ++tally.breached;
        if (std::abs(e.pos.norm() - rec.params.r_t) > 1e-6)
          complain(tag.str() + ": breach off the target boundary");
        break;
      case EventKind::Escape:
        ++tally.escaped;
        break;
      default:
        break;
    }
  }
  if (tally.arrived != rec.counters.arrived)
    complain("arrival counter does not match the event log");
  if (tally.captured != rec.counters.captured)
    complain("capture counter does not match the event log");
  if (tally.breached != rec.counters.breached)
    complain("breach counter does not match the event log");
  if (tally.escaped != rec.counters.escaped)
    complain("escape counter does not match the event log");
  if (rec.counters.captured + rec.counters.breached + rec.counters.escaped >
      rec.counters.arrived)
    complain("more outcomes than arrivals");

  std::vector<size_t> order(rec.segments.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const Segment& sa = rec.segments[a];
    const Segment& sb = rec.segments[b];
    if (sa.agent != sb.agent) return sa.agent < sb.agent;
    return sa.t0 < sb.t0;
  });
  for (size_t k = 0; k < order.size(); ++k) {
    const Segment& s = rec.segments[order[k]];
    std::ostringstream tag;
    tag << "segment agent=" << s.agent << " t0=" << s.t0;
    if (s.t1 < s.t0) complain(tag.str() + ": negative duration");
    const double dur = s.t1 - s.t0;
    if (dur > 0.0) {
      const double speed = (s.x1 - s.x0).norm() / dur;
      const double cap = s.agent == -1 ? 1.0 : rec.params.nu;
      if (speed > cap + 1e-9)
        complain(tag.str() + ": speed above the agent bound");
    }
    if (k + 1 < order.size()) {
      const Segment& nxt = rec.segments[order[k + 1]];
      if (nxt.agent == s.agent) {
        if (std::abs(nxt.t0 - s.t1) > 1e-9)
          complain(tag.str() + ": gap before the next segment");
        else if ((nxt.x0 - s.x1).norm() > 1e-9)
          complain(tag.str() + ": position jump between segments");
      }
    }
  }
  return issues;
}

} // namespace tdg
