#pragma once

// One master oscillator (right front leg) plus one client per remaining leg.
// A client either copies the master through its M-neuron gate (alpha = 1) or
// runs its own chaos controller at its own period (alpha = 0):
//
//   x1(t+1) = sigma(a1) + alpha * (x1_master - sigma(a1))
//   x2(t+1) = sigma(a2)
//
// With alpha binary the first line is a select, which keeps synchronized
// outputs bit-identical to the master's.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>

#include "mcpg/cpg.hpp"
#include "mcpg/legs.hpp"

namespace mcpg {

/// Periods the gait layer accepts.
inline constexpr std::array<int, 6> kGaitPeriods{1, 4, 5, 6, 8, 9};

bool is_gait_period(int p);
/// Throws UnsupportedPeriod unless p is one of kGaitPeriods.
void require_gait_period(int p);

/// Which master x1 a synchronized client copies.
enum class MasterCopy {
  kSameStep,      // the master's freshly computed x1 of the same step
  kPreviousStep,  // the master's x1 before the step (one-step lag)
};

struct NetworkOptions {
  CpgParams params{};
  double lambda = 0.05;
  ControlLaw law = ControlLaw::kOrbitReferenced;
  MasterCopy copy = MasterCopy::kSameStep;
  int initial_period = 4;
  CpgState master_init = kDefaultInit;
  /// Client initial states are drawn from this seed.
  std::uint64_t seed = 0;
  bool start_synchronized = true;
};

class CpgNetwork {
 public:
  explicit CpgNetwork(Morphology morphology, NetworkOptions options = {});

  /// Advances every oscillator by one step (master first, then clients).
  void step();
  void run(int steps);

  /// Sets the client's M-neuron. Switching a client from synchronized to
  /// independent clears its mu and history. Throws InvalidArgument for the
  /// master leg or a leg the morphology does not have.
  void set_sync(Leg leg, bool on);

  /// Assigns periods to the listed legs. Clients whose period then differs
  /// from the master's are desynchronized; matching clients keep their gate.
  /// Changing a leg's period resets its controller. Throws UnsupportedPeriod
  /// for periods outside {1, 4, 5, 6, 8, 9}; nothing is modified in that case.
  void set_periods(const PeriodMap& assignment);

  Morphology morphology() const { return morphology_; }
  const NetworkOptions& options() const { return options_; }
  std::int64_t time() const { return time_; }

  const CpgState& state(Leg leg) const;
  int period(Leg leg) const;
  /// alpha of a client; throws InvalidArgument for the master.
  bool synchronized(Leg leg) const;
  const ChaosControl& control(Leg leg) const;

 private:
  struct Unit {
    CpgState state;
    ChaosControl control;
    bool alpha = false;  // always false for the master
  };

  Unit& unit(Leg leg);
  const Unit& unit(Leg leg) const;

  Morphology morphology_;
  NetworkOptions options_;
  std::map<Leg, Unit> units_;
  std::int64_t time_ = 0;
};

/// "t,R1_x1,R1_x2,R2_x1,R2_x2,...,R2_alpha,..." (alpha for clients only).
void write_network_header(std::ostream& out, const CpgNetwork& net);
void write_network_row(std::ostream& out, const CpgNetwork& net);

}  // namespace mcpg
