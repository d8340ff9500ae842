#include "tdg/bounds.hpp"

#include <cmath>

namespace tdg {

OrbitArcs orbit_arcs(const GameParams& p) {
  const Coefficients c = coefficients(p);
  const double floor_r = p.r_t + (c.gamma - c.beta) * p.rho_a;
  OrbitArcs out;
  out.k = static_cast<int>(std::ceil(p.rho_t / (p.period * p.nu)));
  double prod = 1.0;
  for (int i = 1; i <= out.k; ++i) {
    const double r_a = p.r_t + p.rho_t - (i - 1) * p.period * p.nu;
    double phi = 0.0;
    if (r_a >= floor_r) {
      const auto s = try_max_angular_separation(c.capture_radius, r_a, p);
      phi = s ? s->theta_max : 0.0;
    }
    out.phi.push_back(phi);
    const double qi = phi / (2.0 * kPi);
    out.q.push_back(qi);
    prod *= (1.0 - qi);
  }
  out.p_omega = 1.0 - prod;
  return out;
}

FailureSequence failure_sequence(const GameParams& p) {
  const Coefficients c = coefficients(p);
  FailureSequence out;
  out.ell = static_cast<int>(
      std::ceil((2.0 * p.r_t + 2.0 * c.gamma * p.rho_a - p.rho_t / p.nu) /
                p.period));
  const double guard = p.rho_t / p.nu - p.r_t;
  for (int i = 1; i <= out.ell; ++i) {
    double r = c.capture_radius - i * p.period;
    if (r < 0.0) {
      r = 0.0;
      out.negative_radius = true;
    }
    double pi_;
    if (r <= guard) {
      pi_ = 1.0;
    } else {
      const auto s = try_max_angular_separation(r, c.outer_radius, p);
      pi_ = s ? std::min(1.0, s->theta_max / (2.0 * kPi)) : 0.0;
    }
    out.p.push_back(pi_);
  }
  const auto s = try_max_angular_separation(c.capture_radius, c.outer_radius, p);
  out.t_star = s ? s->t_star : 0.0;
  return out;
}

double tau_avg(const GameParams& p) {
  const OrbitArcs oa = orbit_arcs(p);
  const FailureSequence fs = failure_sequence(p);
  double sum = 0.0;
  for (int j = 1; j <= fs.ell; ++j) {
    double pref = 1.0;
    for (int i = 1; i < j; ++i) pref *= (1.0 - fs.p[i - 1]);
    sum += pref * fs.p[j - 1] * (fs.t_star + j * p.period);
  }
  return oa.p_omega * fs.t_star + (1.0 - oa.p_omega) * sum;
}

BoundReport bound_report(const GameParams& p) {
  validate_params(p);
  BoundReport r;
  r.period = p.period;
  const OrbitArcs oa = orbit_arcs(p);
  r.k = oa.k;
  r.phi = oa.phi;
  r.q = oa.q;
  r.p_omega = oa.p_omega;
  const FailureSequence fs = failure_sequence(p);
  r.ell = fs.ell;
  r.p = fs.p;
  r.t_star = fs.t_star;
  r.negative_radius = fs.negative_radius;
  double sum = 0.0;
  for (int j = 1; j <= fs.ell; ++j) {
    double pref = 1.0;
    for (int i = 1; i < j; ++i) pref *= (1.0 - fs.p[i - 1]);
    sum += pref * fs.p[j - 1] * (fs.t_star + j * p.period);
  }
  r.tau_avg = oa.p_omega * fs.t_star + (1.0 - oa.p_omega) * sum;
  r.t_1 = p.rho_t / p.nu - p.rho_a / (1.0 + p.nu);
  const double raw =
      p.period * (1.0 - p.nu) / (p.rho_a + (1.0 - p.nu) * r.tau_avg);
  r.c_infinity = raw;
  if (raw > 1.0) {
    r.c_infinity = 1.0;
    r.clamped = true;
  }
  return r;
}

std::pair<double, BoundReport> c_infinity(const GameParams& p) {
  BoundReport r = bound_report(p);
  return {r.c_infinity, r};
}

nlohmann::json bound_to_json(const BoundReport& r) {
  return nlohmann::json{{"period", r.period},
                        {"k", r.k},
                        {"phi", r.phi},
                        {"q", r.q},
                        {"p_omega", r.p_omega},
                        {"ell", r.ell},
                        {"p", r.p},
                        {"t_star", r.t_star},
                        {"tau_avg", r.tau_avg},
                        {"t_1", r.t_1},
                        {"c_infinity", r.c_infinity},
                        {"clamped", r.clamped},
                        {"negative_radius", r.negative_radius}};
}

} // namespace tdg
