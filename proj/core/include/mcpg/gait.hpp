#pragma once

// Stance/swing rhythms per leg.
//
// The neural post-processing between oscillator and motor neurons is replaced
// by a parametric stand-in: a period-p orbit maps to a motor cycle of K * p
// steps whose first d(p) * K * p steps are stance. Legs are then phase shifted
// by the fixed delay lines (tau between neighbouring ipsilateral legs, tau_L
// more for the contralateral side).

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcpg/legs.hpp"

namespace mcpg {

struct DelayConfig {
  int tau = 16;     ///< ipsilateral delay, steps
  int tau_l = 48;   ///< contralateral delay, steps
  bool front_to_hind = true;  ///< direction of the ipsilateral delay chain

  void validate() const;
};

struct GaitConfig {
  int expansion = 8;  ///< K: motor steps per oscillator step
  /// Duty factor (stance fraction) per gait period.
  std::map<int, double> duty{{1, 1.0},       {4, 0.5},  {5, 0.6},
                             {6, 2.0 / 3.0}, {8, 0.75}, {9, 5.0 / 6.0}};
  DelayConfig delays{};

  void validate() const;
};

enum class GaitClass { kSlowWave, kFastWave, kTransition, kTetrapod, kTripod, kStop };

std::string_view to_string(GaitClass g);

/// 9 slow wave, 8 fast wave, 6 transition, 5 tetrapod, 4 tripod, 1 stop.
/// Throws UnsupportedPeriod for any other p.
GaitClass classify_gait(int p);

double duty_factor(int p, const GaitConfig& cfg = {});
/// K * p.
int cycle_length(int p, const GaitConfig& cfg = {});
/// round(d(p) * K * p).
int stance_steps(int p, const GaitConfig& cfg = {});

using StanceSeries = std::vector<bool>;  ///< true = stance

/// One motor cycle: a contiguous stance block followed by swing.
StanceSeries motor_cycle(int p, const GaitConfig& cfg = {});
/// `steps` samples of the periodic rhythm for period p.
StanceSeries motor_rhythm(int p, int steps, const GaitConfig& cfg = {});
StanceSeries motor_rhythm(int p, int steps, int expansion);

/// Phase shift of a leg in steps: (k - 1) * tau along the ipsilateral chain,
/// plus tau_L on the left side.
int leg_shift(Leg leg, Morphology m, const DelayConfig& delays);

struct GaitTrace {
  Morphology morphology = Morphology::kHexapod;
  std::vector<Leg> legs;                ///< row order
  std::vector<StanceSeries> stance;     ///< stance[i][t] for legs[i]
  double step_seconds = 1.0 / 27.0;

  std::size_t steps() const { return stance.empty() ? 0 : stance.front().size(); }
  const StanceSeries& of(Leg leg) const;
};

/// Expands one cycle per leg into `steps` samples, each leg circularly shifted
/// by its delay: trace[t] = cycle[(t - shift) mod cycle_length]. Rows follow
/// the morphology's canonical leg order.
GaitTrace apply_delays(const std::map<Leg, StanceSeries>& cycles, int steps, Morphology m,
                       const DelayConfig& delays = {});

/// Gait trace for a full period assignment (legs missing from the map are
/// left out). Throws UnsupportedPeriod for non-gait periods.
GaitTrace gait_trace(const PeriodMap& periods, int steps, Morphology m,
                     const GaitConfig& cfg = {});

/// Stance where the signal is below the median of its cycle window.
StanceSeries binarize(std::span<const double> signal, int cycle);

enum class RenderFormat { kAscii, kSvg };

/// Deterministic gait diagram: one row per leg, stance filled.
std::string render_gait(const GaitTrace& trace, RenderFormat format);

/// Stance matrix as CSV: "leg,s0,s1,..." with 0/1 entries.
void write_stance_csv(std::ostream& out, const GaitTrace& trace);

}  // namespace mcpg
