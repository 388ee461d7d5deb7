#include "mcpg/network.hpp"

#include <algorithm>
#include <ostream>

#include "mcpg/error.hpp"
#include "mcpg/random.hpp"

namespace mcpg {

bool is_gait_period(int p) {
  return std::find(kGaitPeriods.begin(), kGaitPeriods.end(), p) != kGaitPeriods.end();
}

void require_gait_period(int p) {
  if (!is_gait_period(p)) throw UnsupportedPeriod(p);
}

CpgNetwork::CpgNetwork(Morphology morphology, NetworkOptions options)
    : morphology_(morphology), options_(options) {
  options_.params.validate();
  require_gait_period(options_.initial_period);
  const ControlConfig cfg{options_.initial_period, options_.lambda, options_.law, true};
  for (Leg leg : legs_of(morphology_)) {
    CpgState init = options_.master_init;
    bool alpha = false;
    if (leg != kMasterLeg) {
      Rng rng(derive_seed(options_.seed, static_cast<std::uint64_t>(leg)));
      init = CpgState{rng.uniform(), rng.uniform(), options_.master_init.t};
      alpha = options_.start_synchronized;
    }
    units_.emplace(leg, Unit{init, ChaosControl(options_.params, cfg), alpha});
  }
}

CpgNetwork::Unit& CpgNetwork::unit(Leg leg) {
  auto it = units_.find(leg);
  if (it == units_.end()) {
    throw InvalidArgument("leg " + std::string(to_string(leg)) + " is not part of a " +
                          std::string(to_string(morphology_)));
  }
  return it->second;
}

const CpgNetwork::Unit& CpgNetwork::unit(Leg leg) const {
  return const_cast<CpgNetwork*>(this)->unit(leg);
}

void CpgNetwork::step() {
  const auto& params = options_.params;
  Unit& master = unit(kMasterLeg);
  const double master_x1_before = master.state.x1;
  const ControlInput master_c = master.control.on_step(params, master.state);
  master.state = mcpg::step(master.state, params, master_c);
  const double master_x1 =
      options_.copy == MasterCopy::kSameStep ? master.state.x1 : master_x1_before;

  for (auto& [leg, u] : units_) {
    if (leg == kMasterLeg) continue;
    if (u.alpha) {
      // Own controller shunted; neuron 2 sees the same control bias as the
      // master's neuron 2 so the synchronized pair tracks it exactly.
      const auto a = activation(u.state, params, ControlInput{0.0, master_c.c2});
      u.state = CpgState{master_x1, sigmoid(a[1]), u.state.t + 1};
    } else {
      const ControlInput c = u.control.on_step(params, u.state);
      u.state = mcpg::step(u.state, params, c);
    }
  }
  ++time_;
}

void CpgNetwork::run(int steps) {
  for (int i = 0; i < steps; ++i) step();
}

void CpgNetwork::set_sync(Leg leg, bool on) {
  if (leg == kMasterLeg) throw InvalidArgument("the master CPG has no synchronization gate");
  Unit& u = unit(leg);
  if (u.alpha && !on) u.control.reset();
  u.alpha = on;
}

void CpgNetwork::set_periods(const PeriodMap& assignment) {
  for (const auto& [leg, p] : assignment) {
    unit(leg);  // throws for foreign legs
    require_gait_period(p);
  }
  for (const auto& [leg, p] : assignment) {
    Unit& u = unit(leg);
    if (u.control.period() != p) u.control.set_period(p);
  }
  const int master_period = unit(kMasterLeg).control.period();
  for (auto& [leg, u] : units_) {
    if (leg == kMasterLeg) continue;
    if (u.alpha && u.control.period() != master_period) {
      u.alpha = false;
      u.control.reset();
    }
  }
}

const CpgState& CpgNetwork::state(Leg leg) const { return unit(leg).state; }

int CpgNetwork::period(Leg leg) const { return unit(leg).control.period(); }

bool CpgNetwork::synchronized(Leg leg) const {
  if (leg == kMasterLeg) throw InvalidArgument("the master CPG has no synchronization gate");
  return unit(leg).alpha;
}

const ChaosControl& CpgNetwork::control(Leg leg) const { return unit(leg).control; }

void write_network_header(std::ostream& out, const CpgNetwork& net) {
  out << 't';
  for (Leg leg : legs_of(net.morphology())) {
    out << ',' << to_string(leg) << "_x1," << to_string(leg) << "_x2";
  }
  for (Leg leg : legs_of(net.morphology())) {
    if (leg != kMasterLeg) out << ',' << to_string(leg) << "_alpha";
  }
  out << '\n';
}

void write_network_row(std::ostream& out, const CpgNetwork& net) {
  const auto old_precision = out.precision(17);
  out << net.time();
  for (Leg leg : legs_of(net.morphology())) {
    const auto& s = net.state(leg);
    out << ',' << s.x1 << ',' << s.x2;
  }
  for (Leg leg : legs_of(net.morphology())) {
    if (leg != kMasterLeg) out << ',' << (net.synchronized(leg) ? 1 : 0);
  }
  out << '\n';
  out.precision(old_precision);
}

}  // namespace mcpg
