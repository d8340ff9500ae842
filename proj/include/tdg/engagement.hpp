#pragma once

#include "tdg/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

namespace tdg {

/// Portion of the engagement surface available to an intruder currently at
/// radius r_a0. Points are parameterized by the elapsed time t until
/// engagement; the intruder radius at engagement is r_a0 - nu*t.
struct SurfaceDomain {
  double r_a_min = 0.0; ///< deepest engagement radius (surface RHS = 1)
  double r_a_max = 0.0; ///< shallowest engagement radius (RHS = 0 or now)
  double t_min = 0.0;   ///< earliest admissible engagement delay
  double t_max = 0.0;   ///< latest admissible engagement delay
};

/// Valid slice of the surface for an intruder at radius `r_a0`.
/// Throws IntruderTooDeep when the intruder is already below the surface floor.
SurfaceDomain surface_domain(double r_a0, const GameParams& p);

/// Raw RHS of the surface equation sin^2(theta/2) = RHS at delay t.
/// In [0,1] exactly when (r_a0, t) lies in the surface domain.
double surface_rhs(double r_a0, double t, const GameParams& p);

/// Offset angle (>= 0) of the on-surface defender position, measured at the
/// intruder around its own position, relative to the intruder's radial
/// direction. The surface is symmetric: -theta is also on it.
/// Throws OutOfDomain when RHS falls outside [0,1] beyond 1e-9.
double theta_on_surface(double r_a0, double t, const GameParams& p);

/// Cartesian on-surface defender position for an intruder currently at
/// polar `intruder`, engagement delay t, branch sign +1/-1:
///   (r_a0 - nu t) u(theta_A) + rho_a u(theta_A + sgn*theta_on_surface).
Vec2 surface_point(const PolarPoint& intruder, double t, double sgn,
                   const GameParams& p);

/// Maximum angular separation |theta_D - theta_A| from which a defender at
/// center distance r can still reach the surface point (delay t, offset
/// theta_rel) in time. nullopt when the point is out of reach.
std::optional<double> try_theta_max(double t, double theta_rel, double r,
                                    double r_a0, const GameParams& p);

/// Same as try_theta_max but throws Unreachable instead of returning nullopt.
double theta_max(double t, double theta_rel, double r, double r_a0,
                 const GameParams& p);

/// Best separation over the whole surface slice of one intruder.
struct SeparationSolution {
  double theta_max = 0.0; ///< widest capturable angular separation
  double t_star = 0.0;    ///< engagement delay achieving it
  double theta_star = 0.0;///< signed surface offset achieving it
};

/// Maximizes theta_max over the surface slice: 512-point grid per branch plus
/// golden-section refinement to 1e-6 in t. nullopt when the slice is empty
/// (intruder below the floor) or no point on it is reachable.
std::optional<SeparationSolution>
try_max_angular_separation(double r, double r_a0, const GameParams& p);

/// Throwing wrapper: IntruderTooDeep below the floor, Unreachable otherwise.
SeparationSolution max_angular_separation(double r, double r_a0,
                                          const GameParams& p);

/// Memo table for max_angular_separation keyed on the exact bit patterns of
/// (r, r_a0); results are identical with and without the cache.
struct CapturabilityCache {
  struct Hash {
    size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
      uint64_t h = k.first * 0x9e3779b97f4a7c15ULL;
      h ^= k.second + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return static_cast<size_t>(h);
    }
  };
  std::unordered_map<std::pair<uint64_t, uint64_t>, double, Hash> table;
};

/// True when the defender can guarantee capture of a radially inbound
/// intruder: wrapped |theta_A - theta_D| <= max separation over the slice.
/// `cache` (optional) memoizes the per-(r, r_a0) maximization.
bool is_capturable(const PolarPoint& defender, const PolarPoint& intruder,
                   const GameParams& p, CapturabilityCache* cache = nullptr);

enum class Objective { MinTime, MinDistance };

std::string to_string(Objective o);
Objective objective_from_string(const std::string& s);

/// A committed interception plan: move straight to x_eng, arrive no later
/// than t_eng, wait, then pursue to the capture point x_p.
struct EngagementSolution {
  double t_eng = 0.0;          ///< delay from now until engagement
  double theta_rel = 0.0;      ///< signed surface offset used
  Vec2 x_eng = Vec2::Zero();   ///< defender position at engagement
  Vec2 x_p = Vec2::Zero();     ///< capture point (farthest dominance point)
  double t_cap = 0.0;          ///< pursuit duration after engagement
  double transit_distance = 0.0; ///< |x_eng - x_D|
  double total_time = 0.0;     ///< t_eng + t_cap
};

/// First time at which the transit-then-wait plan toward x_eng brings the
/// defender within sensing range rho_a of the radially inbound intruder.
/// Returns +inf when that never happens before t_eng.
double plan_sensing_onset(const Vec2& x_d, const PolarPoint& intruder,
                          const Vec2& x_eng, double t_eng, const GameParams& p);

/// Sensing-safety margins for vetting a transit-then-wait plan. A candidate
/// is rejected when a disk inflated by kOnsetPad would be entered earlier
/// than kOnsetCushion before t_eng. Admitted plans then clear the true disk
/// by at least the pad until the final cushion, so a replay never finds a
/// contact root that the vetting missed: a plan that merely grazes the disk
/// tangentially is a coin flip under a different arithmetic order (a 1e-13
/// distance skew moves a tangential root by ~0.1 in time). Contacts inside
/// the cushion are on-time for every purpose; the cushion must stay well
/// above kOnsetPad / (closing speed) and well below kProbeWindow.
constexpr double kOnsetPad = 1e-9;
constexpr double kOnsetCushion = 1e-6;

/// Picks the surface point optimizing the objective among plans that are
/// reachable in time (|x_eng - x_D| <= t + 1e-9) and that pass the
/// kOnsetPad/kOnsetCushion sensing-safety test above. Grid of 8192
/// intervals per branch; MinTime refines the feasibility boundary by 60
/// bisection steps. nullopt when no point is feasible.
std::optional<EngagementSolution>
try_earliest_engagement(const Vec2& x_d, const PolarPoint& intruder,
                        Objective obj, const GameParams& p);

/// Throwing wrapper around try_earliest_engagement (throws Infeasible).
EngagementSolution earliest_engagement(const Vec2& x_d,
                                       const PolarPoint& intruder,
                                       Objective obj, const GameParams& p);

} // namespace tdg
