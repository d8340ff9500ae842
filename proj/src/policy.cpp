#include "tdg/policy.hpp"

#include <algorithm>
#include <cmath>

namespace tdg {

std::string to_string(IntruderMode m) {
  switch (m) {
    case IntruderMode::Incognito: return "incognito";
    case IntruderMode::Probing: return "probing";
    case IntruderMode::ConvergingToXp: return "converging_to_xp";
    case IntruderMode::ResumedRadial: return "resumed_radial";
    case IntruderMode::Breaching: return "breaching";
    case IntruderMode::Captured: return "captured";
    case IntruderMode::Breached: return "breached";
    case IntruderMode::Escaped: return "escaped";
  }
  return "unknown";
}

IntruderMode intruder_mode_from_string(const std::string& s) {
  if (s == "incognito") return IntruderMode::Incognito;
  if (s == "probing") return IntruderMode::Probing;
  if (s == "converging_to_xp") return IntruderMode::ConvergingToXp;
  if (s == "resumed_radial") return IntruderMode::ResumedRadial;
  if (s == "breaching") return IntruderMode::Breaching;
  if (s == "captured") return IntruderMode::Captured;
  if (s == "breached") return IntruderMode::Breached;
  if (s == "escaped") return IntruderMode::Escaped;
  throw std::invalid_argument("unknown intruder mode: " + s);
}

bool is_terminal(IntruderMode m) {
  return m == IntruderMode::Captured || m == IntruderMode::Breached ||
         m == IntruderMode::Escaped;
}

std::optional<int> defender_select(const std::vector<Candidate>& candidates,
                                   const Vec2& x_d, const StrategyConfig& cfg,
                                   const GameParams& p,
                                   CapturabilityCache* cache) {
  struct Scored {
    double score;
    int id;
    const Candidate* c;
  };
  std::vector<Scored> order;
  order.reserve(candidates.size());
  for (const auto& c : candidates) {
    const double score = (1.0 - cfg.w) * c.pos.r +
                         cfg.w * (c.pos.cart() - x_d).norm();
    order.push_back({score, c.id, &c});
  }
  std::sort(order.begin(), order.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.id < b.id;
  });
  const PolarPoint dpos = PolarPoint::from(x_d);
  for (const auto& s : order) {
    if (is_capturable(dpos, s.c->pos, p, cache)) return s.id;
  }
  return std::nullopt;
}

Vec2 defender_idle_motion(const Vec2& x_d) {
  const double n = x_d.norm();
  if (n <= 1e-9) return Vec2::Zero();
  return -x_d / n;
}

Vec2 breach_point(const Circle& c) {
  const double n = c.center.norm();
  if (n < 1e-12) {
    if (c.radius <= 0.0) return c.center;
    throw DegenerateCenter("dominance circle centered at the origin has no unique deepest point");
  }
  return c.center * (1.0 - c.radius / n);
}

namespace {

Vec2 radial_inward(const Vec2& x_a, const GameParams& p) {
  const double n = x_a.norm();
  if (n < 1e-12) return Vec2::Zero();
  return -p.nu * x_a / n;
}

Vec2 toward(const Vec2& from, const Vec2& to, double speed) {
  const Vec2 d = to - from;
  const double n = d.norm();
  if (n < 1e-12) return Vec2::Zero();
  return speed * d / n;
}

} // namespace

TransitionResult intruder_transition(const TransitionContext& ctx,
                                     const GameParams& p) {
  TransitionResult out;
  out.mode = ctx.mode;
  out.aim = ctx.aim;

  if (is_terminal(ctx.mode)) {
    out.velocity = Vec2::Zero();
    return out;
  }

  if (ctx.mode == IntruderMode::ConvergingToXp ||
      ctx.mode == IntruderMode::Breaching) {
    out.velocity = toward(ctx.x_a, ctx.aim, p.nu);
    return out;
  }

  if (ctx.mode == IntruderMode::Probing) {
    if (ctx.observed_disp && ctx.probe_start_x_d) {
      const Vec2 disp = *ctx.observed_disp;
      const Vec2 want = ctx.aim - *ctx.probe_start_x_d;
      const double dn = disp.norm(), wn = want.norm();
      bool pursuing = false;
      if (dn > 0.5 * kProbeWindow && wn > 1e-12) {
        const double c = std::clamp(disp.dot(want) / (dn * wn), -1.0, 1.0);
        pursuing = std::acos(c) <= kProbeAngleTol;
      }
      if (pursuing) {
        out.mode = IntruderMode::ConvergingToXp;
        out.velocity = toward(ctx.x_a, ctx.aim, p.nu);
      } else {
        out.mode = IntruderMode::ResumedRadial;
        out.velocity = radial_inward(ctx.x_a, p);
      }
      return out;
    }
    if (!ctx.x_d) { // defender slipped out of range mid-probe
      out.mode = IntruderMode::Incognito;
      out.velocity = radial_inward(ctx.x_a, p);
      return out;
    }
    out.velocity = toward(ctx.x_a, ctx.aim, p.nu);
    return out;
  }

  // Incognito / ResumedRadial
  if (!ctx.x_d) {
    out.mode = IntruderMode::Incognito;
    out.velocity = radial_inward(ctx.x_a, p);
    return out;
  }

  const Circle dom = apollonius(ctx.x_a, *ctx.x_d, p);
  if (breach_possible(dom, p)) {
    out.mode = IntruderMode::Breaching;
    out.aim = breach_point(dom);
    out.velocity = toward(ctx.x_a, out.aim, p.nu);
    return out;
  }
  if (escape_possible(dom, p)) {
    out.mode = IntruderMode::ResumedRadial;
    out.velocity = radial_inward(ctx.x_a, p);
    return out;
  }
  if (!ctx.probed_this_episode) {
    out.mode = IntruderMode::Probing;
    out.aim = farthest_point(dom);
    out.velocity = toward(ctx.x_a, out.aim, p.nu);
    out.start_probe = true;
    return out;
  }
  out.mode = IntruderMode::ResumedRadial;
  out.velocity = radial_inward(ctx.x_a, p);
  return out;
}

} // namespace tdg
