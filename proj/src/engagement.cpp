#include "tdg/engagement.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace tdg {

namespace {

constexpr int kGridN = 8192;       // optimizer grid intervals per branch
constexpr int kSepGridN = 512;     // separation-maximizer grid intervals
constexpr double kSepTol = 1e-6;   // golden-section window in t
constexpr double kReachSlack = 1e-9;

uint64_t bits_of(double v) {
  uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

} // namespace

SurfaceDomain surface_domain(double r_a0, const GameParams& p) {
  const Coefficients c = coefficients(p);
  SurfaceDomain d;
  d.r_a_min = p.r_t + (c.gamma - c.beta) * p.rho_a;
  if (r_a0 < d.r_a_min - 1e-12) {
    std::ostringstream os;
    os << "intruder radius " << r_a0 << " below engagement floor " << d.r_a_min;
    throw IntruderTooDeep(os.str());
  }
  d.r_a_max = std::min(r_a0, p.r_t + (c.gamma + c.beta) * p.rho_a);
  d.t_min = std::max(0.0, (r_a0 - d.r_a_max) / p.nu);
  d.t_max = (r_a0 - d.r_a_min) / p.nu;
  return d;
}

double surface_rhs(double r_a0, double t, const GameParams& p) {
  const Coefficients c = coefficients(p);
  const double ra = r_a0 - t * p.nu;
  const double a = p.r_t + c.gamma * p.rho_a;
  const double b = ra - c.beta * p.rho_a;
  return (a * a - b * b) / (4.0 * c.beta * p.rho_a * ra);
}

double theta_on_surface(double r_a0, double t, const GameParams& p) {
  double v = surface_rhs(r_a0, t, p);
  if (v < -1e-9 || v > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "surface RHS " << v << " outside [0,1] at r_a0=" << r_a0
       << " t=" << t;
    throw OutOfDomain(os.str());
  }
  v = std::min(1.0, std::max(0.0, v));
  return 2.0 * std::asin(std::sqrt(v));
}

Vec2 surface_point(const PolarPoint& intruder, double t, double sgn,
                   const GameParams& p) {
  const double th = sgn * theta_on_surface(intruder.r, t, p);
  const double ra = intruder.r - t * p.nu;
  return ra * unit(intruder.theta) + p.rho_a * unit(intruder.theta + th);
}

std::optional<double> try_theta_max(double t, double theta_rel, double r,
                                    double r_a0, const GameParams& p) {
  const double ra = r_a0 - t * p.nu;
  const double r_eng =
      std::sqrt(ra * ra + p.rho_a * p.rho_a +
                2.0 * ra * p.rho_a * std::cos(theta_rel));
  const double sarg = std::clamp(p.rho_a * std::sin(theta_rel) / r_eng, -1.0, 1.0);
  const double phi = std::asin(sarg);
  if (r < 1e-12) {
    if (r_eng <= t + kReachSlack) return kPi;
    return std::nullopt;
  }
  double c = (r_eng * r_eng + r * r - t * t) / (2.0 * r_eng * r);
  if (c > 1.0 + kReachSlack) return std::nullopt;
  c = std::clamp(c, -1.0, 1.0);
  const double tm = std::acos(c) + phi;
  return std::clamp(tm, 0.0, kPi);
}

double theta_max(double t, double theta_rel, double r, double r_a0,
                 const GameParams& p) {
  auto v = try_theta_max(t, theta_rel, r, r_a0, p);
  if (!v) {
    std::ostringstream os;
    os << "surface point at t=" << t << " unreachable from r=" << r;
    throw Unreachable(os.str());
  }
  return *v;
}

std::optional<SeparationSolution>
try_max_angular_separation(double r, double r_a0, const GameParams& p) {
  SurfaceDomain dom;
  try {
    dom = surface_domain(r_a0, p);
  } catch (const IntruderTooDeep&) {
    return std::nullopt;
  }
  const double t_lo = dom.t_min, t_hi = dom.t_max;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;

  auto f = [&](double t, double sgn) -> double {
    const double th = sgn * theta_on_surface(r_a0, t, p);
    auto tm = try_theta_max(t, th, r, r_a0, p);
    return tm ? *tm : -1.0;
  };

  bool found = false;
  SeparationSolution best;
  for (double sgn : {+1.0, -1.0}) {
    int besti = 0;
    double bestf = -2.0;
    for (int i = 0; i <= kSepGridN; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / kSepGridN;
      const double v = f(t, sgn);
      if (v > bestf) {
        bestf = v;
        besti = i;
      }
    }
    if (bestf < 0.0) continue;
    double a = t_lo + (t_hi - t_lo) * std::max(0, besti - 1) / kSepGridN;
    double b = t_lo + (t_hi - t_lo) * std::min(kSepGridN, besti + 1) / kSepGridN;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    while (b - a > kSepTol) {
      if (f(c, sgn) >= f(d, sgn)) {
        b = d;
        d = c;
        c = b - gr * (b - a);
      } else {
        a = c;
        c = d;
        d = a + gr * (b - a);
      }
    }
    const double t = 0.5 * (a + b);
    const double v = f(t, sgn);
    if (!found || v > best.theta_max) {
      found = true;
      best.theta_max = v;
      best.t_star = t;
      best.theta_star = sgn * theta_on_surface(r_a0, t, p);
    }
  }
  if (!found) return std::nullopt;
  return best;
}

SeparationSolution max_angular_separation(double r, double r_a0,
                                          const GameParams& p) {
  surface_domain(r_a0, p); // propagate IntruderTooDeep with its message
  auto s = try_max_angular_separation(r, r_a0, p);
  if (!s) {
    std::ostringstream os;
    os << "no surface point of intruder at r=" << r_a0
       << " reachable from defender radius " << r;
    throw Unreachable(os.str());
  }
  return *s;
}

bool is_capturable(const PolarPoint& defender, const PolarPoint& intruder,
                   const GameParams& p, CapturabilityCache* cache) {
  double sep_max;
  if (cache) {
    const auto key = std::make_pair(bits_of(defender.r), bits_of(intruder.r));
    auto it = cache->table.find(key);
    if (it != cache->table.end()) {
      sep_max = it->second;
    } else {
      auto s = try_max_angular_separation(defender.r, intruder.r, p);
      sep_max = s ? s->theta_max : -1.0;
      cache->table.emplace(key, sep_max);
    }
  } else {
    auto s = try_max_angular_separation(defender.r, intruder.r, p);
    sep_max = s ? s->theta_max : -1.0;
  }
  if (sep_max < 0.0) return false;
  const double sep = std::abs(wrap_angle(intruder.theta - defender.theta));
  return sep <= sep_max;
}

std::string to_string(Objective o) {
  return o == Objective::MinTime ? "min_time" : "min_distance";
}

Objective objective_from_string(const std::string& s) {
  if (s == "min_time") return Objective::MinTime;
  if (s == "min_distance") return Objective::MinDistance;
  throw std::invalid_argument("unknown objective: " + s);
}

double plan_sensing_onset(const Vec2& x_d, const PolarPoint& intruder,
                          const Vec2& x_eng, double t_eng,
                          const GameParams& p) {
  const double inf = std::numeric_limits<double>::infinity();
  const Vec2 ia = intruder.cart();
  const Vec2 iv = -p.nu * unit(intruder.theta);
  const double d = (x_eng - x_d).norm();
  if (d > 1e-15) {
    const Vec2 dv = (x_eng - x_d) / d;
    auto t = sensing_onset(x_d, dv, ia, iv, p.rho_a, 0.0, std::min(d, t_eng));
    if (t) return *t;
  }
  if (d < t_eng) {
    const Vec2 ia_d = ia + iv * d;
    auto t = sensing_onset(x_eng, Vec2::Zero(), ia_d, iv, p.rho_a, d, t_eng);
    if (t) return *t;
  }
  return inf;
}

namespace {

struct SurfaceEval {
  Vec2 x_eng;
  double theta_rel;
  double dist;
};

SurfaceEval eval_point(const Vec2& x_d, const PolarPoint& intr, double t,
                       double sgn, const GameParams& p) {
  SurfaceEval e;
  e.theta_rel = sgn * theta_on_surface(intr.r, t, p);
  const double ra = intr.r - t * p.nu;
  e.x_eng = ra * unit(intr.theta) + p.rho_a * unit(intr.theta + e.theta_rel);
  e.dist = (e.x_eng - x_d).norm();
  return e;
}

bool feasible(const Vec2& x_d, const PolarPoint& intr, double t, double sgn,
              const GameParams& p) {
  const SurfaceEval e = eval_point(x_d, intr, t, sgn, p);
  if (e.dist > t + kReachSlack) return false;
  // inflated-disk test: see kOnsetPad/kOnsetCushion in the header
  GameParams padded = p;
  padded.rho_a += kOnsetPad;
  if (plan_sensing_onset(x_d, intr, e.x_eng, t, padded) < t - kOnsetCushion)
    return false;
  return true;
}

EngagementSolution finish_solution(const Vec2& x_d, const PolarPoint& intr,
                                   double t, double sgn, const GameParams& p) {
  EngagementSolution s;
  const SurfaceEval e = eval_point(x_d, intr, t, sgn, p);
  s.t_eng = t;
  s.theta_rel = e.theta_rel;
  s.x_eng = e.x_eng;
  s.transit_distance = e.dist;
  const double ra = intr.r - t * p.nu;
  const Vec2 ia = ra * unit(intr.theta);
  const Circle c = apollonius(ia, e.x_eng, p);
  s.x_p = farthest_point(c);
  s.t_cap = (s.x_p - ia).norm() / p.nu;
  s.total_time = s.t_eng + s.t_cap;
  return s;
}

} // namespace

std::optional<EngagementSolution>
try_earliest_engagement(const Vec2& x_d, const PolarPoint& intruder,
                        Objective obj, const GameParams& p) {
  SurfaceDomain dom;
  try {
    dom = surface_domain(intruder.r, p);
  } catch (const IntruderTooDeep&) {
    return std::nullopt;
  }
  const double t_lo = dom.t_min, t_hi = dom.t_max;

  bool have = false;
  double best_t = 0.0, best_sgn = +1.0, best_key = 0.0;

  if (obj == Objective::MinTime) {
    for (double sgn : {+1.0, -1.0}) {
      double prev_t = 0.0;
      bool have_prev = false, prev_ok = false;
      for (int i = 0; i <= kGridN; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / kGridN;
        const bool ok = feasible(x_d, intruder, t, sgn, p);
        if (ok) {
          if (have_prev && !prev_ok) {
            double lo = prev_t, hi = t;
            for (int k = 0; k < 60; ++k) {
              const double mid = 0.5 * (lo + hi);
              if (feasible(x_d, intruder, mid, sgn, p))
                hi = mid;
              else
                lo = mid;
            }
            t = hi;
          }
          if (!have || t < best_key) {
            have = true;
            best_key = t;
            best_t = t;
            best_sgn = sgn;
          }
          break;
        }
        prev_t = t;
        have_prev = true;
        prev_ok = ok;
      }
    }
  } else {
    for (double sgn : {+1.0, -1.0}) {
      for (int i = 0; i <= kGridN; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / kGridN;
        if (!feasible(x_d, intruder, t, sgn, p)) continue;
        const SurfaceEval e = eval_point(x_d, intruder, t, sgn, p);
        if (!have || e.dist < best_key) {
          have = true;
          best_key = e.dist;
          best_t = t;
          best_sgn = sgn;
        }
      }
    }
  }

  if (!have) return std::nullopt;
  return finish_solution(x_d, intruder, best_t, best_sgn, p);
}

EngagementSolution earliest_engagement(const Vec2& x_d,
                                       const PolarPoint& intruder,
                                       Objective obj, const GameParams& p) {
  auto s = try_earliest_engagement(x_d, intruder, obj, p);
  if (!s) {
    std::ostringstream os;
    os << "no feasible engagement point for intruder at r=" << intruder.r;
    throw Infeasible(os.str());
  }
  return *s;
}

} // namespace tdg
