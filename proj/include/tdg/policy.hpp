#pragma once

#include "tdg/engagement.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tdg {

/// Defender strategy knobs. w blends the target-selection score between
/// distance-to-target (w=0, "earliest breach") and distance-to-defender
/// (w=1, "nearest agent"). The objective picks the engagement optimizer.
struct StrategyConfig {
  double w = 0.0;
  Objective objective = Objective::MinTime;
};

/// Intruder behavioral mode.
/// Incognito: has not sensed the defender; moves radially inward.
/// Probing: sensed a dominating defender; nudges toward the capture point
///   for a short window to test whether the defender is actually pursuing.
/// ConvergingToXp: probe confirmed pursuit; heads to the capture point.
/// ResumedRadial: sensed the defender but inferred it is busy (or the probe
///   failed); resumes the radial run while the defender stays in range.
/// Breaching: its dominance circle reaches the target; commits to the
///   deepest point. Captured/Breached/Escaped are terminal.
enum class IntruderMode {
  Incognito,
  Probing,
  ConvergingToXp,
  ResumedRadial,
  Breaching,
  Captured,
  Breached,
  Escaped,
};

std::string to_string(IntruderMode m);
IntruderMode intruder_mode_from_string(const std::string& s);

bool is_terminal(IntruderMode m);

/// A selectable intruder as seen by the defender.
struct Candidate {
  int id = 0;
  PolarPoint pos;
};

/// Among capturable candidates, minimizes
///   (1 - w) * |x_A|  +  w * |x_A - x_D|,
/// ties broken toward the lowest id. Capturability is evaluated lazily in
/// score order. nullopt when no candidate is capturable.
std::optional<int> defender_select(const std::vector<Candidate>& candidates,
                                   const Vec2& x_d, const StrategyConfig& cfg,
                                   const GameParams& p,
                                   CapturabilityCache* cache = nullptr);

/// Unit-speed drift toward the ring center while no intruder is engaged;
/// zero once within 1e-9 of the center.
Vec2 defender_idle_motion(const Vec2& x_d);

/// Deepest point of a dominance circle (closest to the target center).
/// Throws DegenerateCenter when the center sits on the origin.
Vec2 breach_point(const Circle& c);

/// Probe geometry: how far the intruder feints toward the capture point and
/// the angular tolerance for reading the defender's reply as pursuit.
constexpr double kProbeWindow = 1e-3;
constexpr double kProbeAngleTol = 1e-2;

/// Everything the intruder can see when re-deciding its mode.
struct TransitionContext {
  IntruderMode mode = IntruderMode::Incognito;
  Vec2 x_a = Vec2::Zero();              ///< intruder position
  std::optional<Vec2> x_d;              ///< defender position iff within rho_a
  Vec2 aim = Vec2::Zero();              ///< committed aim (x_p or breach point)
  bool probed_this_episode = false;     ///< one probe per sensing episode
  /// Set only at a probe checkpoint: defender position when the probe began
  /// and its displacement over the window.
  std::optional<Vec2> probe_start_x_d;
  std::optional<Vec2> observed_disp;
};

struct TransitionResult {
  IntruderMode mode = IntruderMode::Incognito;
  Vec2 velocity = Vec2::Zero();
  Vec2 aim = Vec2::Zero();   ///< committed aim when mode uses one
  bool start_probe = false;  ///< caller should schedule a probe checkpoint
};

/// Pure mode machine: maps what the intruder currently sees to its next mode
/// and velocity. The caller owns probe scheduling and the per-episode latch.
TransitionResult intruder_transition(const TransitionContext& ctx,
                                     const GameParams& p);

} // namespace tdg
