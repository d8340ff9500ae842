#include "tdg/geometry.hpp"

#include <cmath>
#include <sstream>

namespace tdg {

void validate_params(const GameParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << name << " must be positive and finite, got " << v;
      throw NonPositiveParameter(os.str());
    }
  };
  positive(p.r_t, "r_t");
  positive(p.rho_a, "rho_a");
  positive(p.rho_t, "rho_t");
  positive(p.nu, "nu");
  positive(p.period, "period");

  if (!(p.nu < 1.0)) {
    std::ostringstream os;
    os << "speed ratio must satisfy nu < 1, got nu = " << p.nu;
    throw AssumptionViolation(os.str());
  }

  const double lhs1 = (1.0 + 2.0 * p.nu / (1.0 - p.nu * p.nu)) * p.rho_a;
  if (!(lhs1 <= p.rho_t)) {
    std::ostringstream os;
    os << "annulus too narrow: (1 + 2*nu/(1-nu^2))*rho_a = " << lhs1
       << " > rho_t = " << p.rho_t;
    throw AssumptionViolation(os.str());
  }

  const double lhs2 = p.nu * p.r_t;
  if (!(lhs2 <= p.rho_t)) {
    std::ostringstream os;
    os << "annulus too narrow: nu*r_t = " << lhs2 << " > rho_t = " << p.rho_t;
    throw AssumptionViolation(os.str());
  }
}

Coefficients coefficients(const GameParams& p) {
  Coefficients c;
  c.alpha = 1.0 / (1.0 - p.nu * p.nu);
  c.gamma = p.nu * c.alpha;
  c.beta = p.nu * c.gamma;
  c.capture_radius = p.r_t + 2.0 * c.gamma * p.rho_a;
  c.outer_radius = p.r_t + p.rho_t;
  return c;
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  if (w > kPi) w -= 2.0 * kPi;
  return w;
}

Vec2 unit(double theta) { return Vec2(std::cos(theta), std::sin(theta)); }

PolarPoint PolarPoint::from(const Vec2& x) {
  PolarPoint p;
  p.r = x.norm();
  p.theta = p.r > 0.0 ? wrap_angle(std::atan2(x.y(), x.x())) : 0.0;
  return p;
}

Circle apollonius(const Vec2& xa, const Vec2& xd, const GameParams& p) {
  const Coefficients c = coefficients(p);
  Circle out;
  out.center = c.alpha * xa - c.beta * xd;
  out.radius = c.gamma * (xa - xd).norm();
  return out;
}

Vec2 farthest_point(const Circle& c) {
  const double n = c.center.norm();
  if (n < 1e-12) {
    if (c.radius <= 0.0) return c.center;
    throw DegenerateCenter("circle centered at the origin has no unique farthest point");
  }
  return c.center * (1.0 + c.radius / n);
}

bool breach_possible(const Circle& c, const GameParams& p) {
  // 1e-12 guard band: the engagement-onset circle is exactly tangent to
  // the target disk, and tangency must not read as an intersection.
  return c.center.norm() - c.radius < p.r_t - 1e-12;
}

bool escape_possible(const Circle& c, const GameParams& p) {
  const Coefficients k = coefficients(p);
  return c.center.norm() + c.radius > k.outer_radius + 1e-12;
}

double capture_time(const Vec2& xa, const Vec2& xd, const GameParams& p) {
  const Vec2 xp = farthest_point(apollonius(xa, xd, p));
  return (xp - xa).norm() / p.nu;
}

std::optional<double> sensing_onset(const Vec2& pd, const Vec2& vd,
                                    const Vec2& pa, const Vec2& va,
                                    double rho, double t0, double t1) {
  if (t1 < t0) return std::nullopt;
  const Vec2 dp = pd - pa;
  const Vec2 dv = vd - va;
  const double c = dp.squaredNorm() - rho * rho;
  if (c <= 0.0) return t0; // already within range
  const double a = dv.squaredNorm();
  if (a < 1e-18) return std::nullopt; // constant separation
  const double b = dp.dot(dv);
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double s = (-b - std::sqrt(disc)) / a;
  if (s < 0.0) return std::nullopt; // closest approach already behind
  const double t = t0 + s;
  if (t > t1) return std::nullopt;
  return t;
}

} // namespace tdg
