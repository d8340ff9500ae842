#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>

namespace tdg {

using Vec2 = Eigen::Vector2d;

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Thrown when the game parameters violate a structural assumption
/// (speed ratio or annulus width).
struct AssumptionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a parameter that must be strictly positive is not.
struct NonPositiveParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an Apollonius circle degenerates (center at the origin),
/// so "farthest point from the target" is not unique.
struct DegenerateCenter : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an intruder radius is below the engagement-surface domain.
struct IntruderTooDeep : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a query lies outside the valid domain of a surface equation.
struct OutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a requested point cannot be reached by the defender in time.
struct Unreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when no engagement point is feasible for a given defender pose.
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fatal internal check failure (a simulated capture landed off the
/// capture circle, or conserved counters drifted).
struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

/// Scenario parameters. Defender speed is normalized to 1; the intruder
/// moves at speed `nu`. Intruders appear on the outer ring every `period`.
struct GameParams {
  double r_t = 4.0;    ///< target radius
  double rho_a = 1.0;  ///< intruder sensing radius
  double rho_t = 5.0;  ///< width of the sensing annulus around the target
  double nu = 0.75;    ///< intruder/defender speed ratio, in (0,1)
  double period = 2.0; ///< arrival period
};

/// Quantities derived from the speed ratio and radii; computed once per use.
struct Coefficients {
  double alpha;          ///< 1 / (1 - nu^2)
  double beta;           ///< nu^2 / (1 - nu^2)
  double gamma;          ///< nu / (1 - nu^2)
  double capture_radius; ///< r_t + 2 * gamma * rho_a
  double outer_radius;   ///< r_t + rho_t
};

/// Validates positivity, nu < 1, and the two width conditions that make an
/// in-annulus engagement possible:
///   (1 + 2*nu/(1-nu^2)) * rho_a <= rho_t   and   nu * r_t <= rho_t.
/// Throws NonPositiveParameter or AssumptionViolation (message names the
/// failing inequality and both sides).
void validate_params(const GameParams& p);

Coefficients coefficients(const GameParams& p);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Unit vector at angle `theta`.
Vec2 unit(double theta);

/// Polar form of a point; theta is wrapped into (-pi, pi] at construction.
struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;

  PolarPoint() = default;
  PolarPoint(double r_, double theta_) : r(r_), theta(wrap_angle(theta_)) {}
  static PolarPoint from(const Vec2& x);
  Vec2 cart() const { return r * unit(theta); }
};

struct Circle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Dominance circle of an intruder at `xa` against a defender at `xd`:
/// the locus of points the intruder reaches no later than the defender.
/// center = alpha*xa - beta*xd, radius = gamma*|xa - xd|.
Circle apollonius(const Vec2& xa, const Vec2& xd, const GameParams& p);

/// Point of the circle farthest from the origin: center * (1 + r/|center|).
/// Throws DegenerateCenter when |center| < 1e-12 and radius > 0.
Vec2 farthest_point(const Circle& c);

/// True when the circle's deepest point lies strictly inside the target disk
/// (by more than 1e-12, so exact tangency never reads as an intersection).
bool breach_possible(const Circle& c, const GameParams& p);

/// True when the circle pokes strictly outside the outer ring (same band).
bool escape_possible(const Circle& c, const GameParams& p);

/// Time for the intruder to reach the farthest point of its dominance
/// circle, with both agents heading straight there: |x_p - xa| / nu.
double capture_time(const Vec2& xa, const Vec2& xd, const GameParams& p);

/// Earliest time t in [t0, t1] at which two agents moving on straight lines
/// p(t) = p0 + v*(t - t0) come within distance `rho` of each other.
/// Returns nullopt if they never do inside the window.
std::optional<double> sensing_onset(const Vec2& pd, const Vec2& vd,
                                    const Vec2& pa, const Vec2& va,
                                    double rho, double t0, double t1);

} // namespace tdg
