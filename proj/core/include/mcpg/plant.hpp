#pragma once

// Surrogate locomotion plant: maps (disabled legs, per-leg periods) to the
// yaw deviation accumulated over an evaluation window.
//
// Each side of the body contributes a steady-state yaw rate averaged over the
// joint cycle of its legs:
//
//   thrust  sum over functional legs of  lever * gain * (1 - stance * v_ref) / T
//           (a leg that never swings makes no stride: -lever * gain * v_ref)
//   drag    per disabled leg: drag_base + drag_load * P(some ipsilateral leg swings)
//   sag     sag * P(fewer than min_support ipsilateral legs in stance)
//
// and   dphi = window * ((thrust_L - thrust_R) + (drag_R - drag_L) + (sag_R - sag_L))
//
// in degrees, positive = rightward. Averaging over whole cycles makes the
// result independent of the contralateral delay and exactly antisymmetric
// under left/right mirroring.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcpg/gait.hpp"
#include "mcpg/kvconfig.hpp"
#include "mcpg/legs.hpp"

namespace mcpg {

struct PlantConfig {
  Morphology morphology = Morphology::kHexapod;
  /// Lateral lever arm per ipsilateral position (front first); the left side
  /// uses the same magnitudes with opposite sign.
  std::vector<double> lateral{1.0, 1.3, 1.0};
  double thrust_gain = 3.0;
  double v_ref = 1.0 / 32.0;  ///< body speed per step, in strides
  double drag_base = 0.01;
  double drag_load = 0.02;
  double sag = 0.05;
  int min_support = 2;
  double noise = 0.0;  ///< SD of additive Gaussian noise on dphi, degrees
  int window = 400;
  GaitConfig gait{};

  /// Committed defaults for a morphology.
  static PlantConfig defaults(Morphology m);

  void validate() const;
  /// Signed lateral lever (+ right, - left).
  double lateral_arm(Leg leg) const;

  static std::vector<std::string> kv_keys();
  static PlantConfig from_kv(const KvConfig& kv);
  KvConfig to_kv() const;
};

struct Scenario {
  LegSet disabled;
  PeriodMap periods;  ///< functional legs only

  /// Every functional leg at period 4.
  static Scenario all_four(Morphology m, LegSet disabled = {});

  LegSet functional(Morphology m) const;
  /// Throws ValidationError unless every leg of the morphology is either
  /// disabled or has a gait period, and nothing else is listed.
  void validate(Morphology m) const;

  bool operator==(const Scenario&) const = default;
};

Scenario mirror(const Scenario& s);

struct DeviationSample {
  double delta_phi = 0.0;  ///< degrees, + = rightward
};

/// Per-side breakdown of the yaw rate, per step.
struct SideTerms {
  double thrust = 0.0;
  double drag = 0.0;
  double sag = 0.0;
};

SideTerms side_terms(const PlantConfig& cfg, const Scenario& scenario, Side side);

/// Noise-free deviation.
double deviation(const PlantConfig& cfg, const Scenario& scenario);

/// Deviation plus cfg.noise * N(0,1) drawn from `seed`.
DeviationSample simulate_window(const PlantConfig& cfg, const Scenario& scenario,
                                std::uint64_t seed = 0);

/// "scenario,R1,R2,...,seed,delta_phi"; disabled legs are written as "x".
void write_evaluation_header(std::ostream& out, Morphology m);
void write_evaluation_row(std::ostream& out, Morphology m, const Scenario& scenario,
                          std::uint64_t seed, double delta_phi);

/// Name of a scenario's disabled set, e.g. "R1L2"; "none" when empty.
std::string scenario_label(const Scenario& s);

}  // namespace mcpg
