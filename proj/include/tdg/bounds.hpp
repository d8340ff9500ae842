#pragma once

#include "tdg/engagement.hpp"

#include <json.hpp>

#include <utility>
#include <vector>

namespace tdg {

/// Closed-form lower-bound machinery for the long-run capture fraction of
/// the earliest-breach strategy, with every intermediate quantity exposed.
struct BoundReport {
  double period = 0.0;
  int k = 0;                 ///< number of arrival orbits inside the annulus
  std::vector<double> phi;   ///< capturable arc angle per orbit
  std::vector<double> q;     ///< phi_i / (2*pi)
  double p_omega = 0.0;      ///< 1 - prod(1 - q_i)
  int ell = 0;               ///< modeled consecutive-failure steps
  std::vector<double> p;     ///< per-step success probability
  double t_star = 0.0;       ///< engagement delay at the widest-arc point
  double tau_avg = 0.0;      ///< mean time charged per capture cycle
  double t_1 = 0.0;          ///< rho_t/nu - rho_a/(1+nu)
  double c_infinity = 0.0;   ///< T(1-nu) / (rho_a + (1-nu)tau_avg), clamped
  bool clamped = false;          ///< c_infinity hit the 1.0 ceiling
  bool negative_radius = false;  ///< a failure step drove the radius below 0
};

struct OrbitArcs {
  int k = 0;
  std::vector<double> phi;
  std::vector<double> q;
  double p_omega = 0.0;
};

/// Arrival orbits at radii r_t + rho_t - (i-1)*T*nu, i = 1..k with
/// k = ceil(rho_t/(T*nu)); phi_i is the widest capturable separation seen
/// from the capture circle (0 when the orbit sinks below the surface floor
/// or nothing is reachable).
OrbitArcs orbit_arcs(const GameParams& p);

struct FailureSequence {
  int ell = 0;
  std::vector<double> p;
  double t_star = 0.0;
  bool negative_radius = false;
};

/// Success probabilities after i consecutive failed selection rounds, the
/// defender having drifted inward to radius r_t + 2*gamma*rho_a - i*T
/// (clamped at 0; probability 1 at or below the guarantee radius
/// rho_t/nu - r_t).
FailureSequence failure_sequence(const GameParams& p);

/// Mean capture-cycle time:
///   p_omega*t_star + (1-p_omega) * sum_j prod_{i<j}(1-p_i) * p_j * (t_star + j*T).
double tau_avg(const GameParams& p);

/// Lower bound on the long-run capture fraction plus the full report.
std::pair<double, BoundReport> c_infinity(const GameParams& p);

BoundReport bound_report(const GameParams& p);

nlohmann::json bound_to_json(const BoundReport& r);

} // namespace tdg
