#include "mcpg/plant.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "mcpg/error.hpp"
#include "mcpg/network.hpp"
#include "mcpg/random.hpp"

namespace mcpg {

PlantConfig PlantConfig::defaults(Morphology m) {
  PlantConfig cfg;
  cfg.morphology = m;
  if (m == Morphology::kQuadruped) cfg.lateral = {1.0, 1.0};
  return cfg;
}

void PlantConfig::validate() const {
  if (static_cast<int>(lateral.size()) != legs_per_side(morphology)) {
    throw ValidationError("plant: need one lateral lever per leg on a side (" +
                          std::to_string(legs_per_side(morphology)) + ")");
  }
  for (double v : lateral) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("plant: lateral levers must be >= 0");
  }
  for (double v : {thrust_gain, v_ref, drag_base, drag_load, sag, noise}) {
    if (!std::isfinite(v)) throw ValidationError("plant: parameters must be finite");
  }
  if (noise < 0.0) throw ValidationError("plant: noise must be >= 0");
  if (window < 1) throw ValidationError("plant: window must be >= 1");
  if (min_support < 0) throw ValidationError("plant: min_support must be >= 0");
  gait.validate();
}

double PlantConfig::lateral_arm(Leg leg) const {
  const double v = lateral.at(static_cast<std::size_t>(ipsilateral_index(leg)));
  return side_of(leg) == Side::kRight ? v : -v;
}

std::vector<std::string> PlantConfig::kv_keys() {
  return {"morphology", "lateral",     "thrust_gain", "v_ref",      "drag_base",
          "drag_load",  "sag",         "min_support", "noise",      "window",
          "gait.expansion", "gait.tau", "gait.tau_l", "gait.front_to_hind",
          "gait.duty.4", "gait.duty.5", "gait.duty.6", "gait.duty.8", "gait.duty.9"};
}

PlantConfig PlantConfig::from_kv(const KvConfig& kv) {
  Morphology m = Morphology::kHexapod;
  if (kv.contains("morphology")) {
    auto parsed = parse_morphology(kv.text("morphology"));
    if (!parsed) throw ValidationError("plant: unknown morphology '" + kv.text("morphology") + "'");
    m = *parsed;
  }
  PlantConfig cfg = defaults(m);
  if (kv.contains("lateral")) cfg.lateral = kv.get_doubles("lateral");
  cfg.thrust_gain = kv.get_double("thrust_gain", cfg.thrust_gain);
  cfg.v_ref = kv.get_double("v_ref", cfg.v_ref);
  cfg.drag_base = kv.get_double("drag_base", cfg.drag_base);
  cfg.drag_load = kv.get_double("drag_load", cfg.drag_load);
  cfg.sag = kv.get_double("sag", cfg.sag);
  cfg.min_support = kv.get_int("min_support", cfg.min_support);
  cfg.noise = kv.get_double("noise", cfg.noise);
  cfg.window = kv.get_int("window", cfg.window);
  cfg.gait.expansion = kv.get_int("gait.expansion", cfg.gait.expansion);
  cfg.gait.delays.tau = kv.get_int("gait.tau", cfg.gait.delays.tau);
  cfg.gait.delays.tau_l = kv.get_int("gait.tau_l", cfg.gait.delays.tau_l);
  cfg.gait.delays.front_to_hind = kv.get_bool("gait.front_to_hind", cfg.gait.delays.front_to_hind);
  for (int p : {4, 5, 6, 8, 9}) {
    const std::string key = "gait.duty." + std::to_string(p);
    cfg.gait.duty[p] = kv.get_double(key, cfg.gait.duty[p]);
  }
  cfg.validate();
  return cfg;
}

KvConfig PlantConfig::to_kv() const {
  KvConfig kv;
  kv.set("morphology", std::string(to_string(morphology)));
  kv.set("lateral", lateral);
  kv.set("thrust_gain", thrust_gain);
  kv.set("v_ref", v_ref);
  kv.set("drag_base", drag_base);
  kv.set("drag_load", drag_load);
  kv.set("sag", sag);
  kv.set("min_support", min_support);
  kv.set("noise", noise);
  kv.set("window", window);
  kv.set("gait.expansion", gait.expansion);
  kv.set("gait.tau", gait.delays.tau);
  kv.set("gait.tau_l", gait.delays.tau_l);
  kv.set("gait.front_to_hind", gait.delays.front_to_hind);
  for (int p : {4, 5, 6, 8, 9}) kv.set("gait.duty." + std::to_string(p), gait.duty.at(p));
  return kv;
}

Scenario Scenario::all_four(Morphology m, LegSet disabled) {
  Scenario s;
  for (Leg leg : legs_of(m)) {
    if (!disabled.count(leg)) s.periods[leg] = 4;
  }
  s.disabled = std::move(disabled);
  return s;
}

LegSet Scenario::functional(Morphology m) const {
  LegSet out;
  for (Leg leg : legs_of(m)) {
    if (!disabled.count(leg)) out.insert(leg);
  }
  return out;
}

void Scenario::validate(Morphology m) const {
  for (Leg leg : disabled) {
    if (!has_leg(m, leg)) {
      throw ValidationError("scenario: leg " + std::string(to_string(leg)) + " is not on a " +
                            std::string(to_string(m)));
    }
    if (periods.count(leg)) {
      throw ValidationError("scenario: disabled leg " + std::string(to_string(leg)) +
                            " must not carry a period");
    }
  }
  for (const auto& [leg, p] : periods) {
    if (!has_leg(m, leg)) {
      throw ValidationError("scenario: leg " + std::string(to_string(leg)) + " is not on a " +
                            std::string(to_string(m)));
    }
    require_gait_period(p);
  }
  for (Leg leg : legs_of(m)) {
    if (!disabled.count(leg) && !periods.count(leg)) {
      throw ValidationError("scenario: functional leg " + std::string(to_string(leg)) +
                            " has no period");
    }
  }
}

Scenario mirror(const Scenario& s) { return Scenario{mirror(s.disabled), mirror(s.periods)}; }

SideTerms side_terms(const PlantConfig& cfg, const Scenario& scenario, Side side) {
  struct Active {
    StanceSeries cycle;
    int shift;
  };
  const int per_side = legs_per_side(cfg.morphology);
  std::vector<Active> active;
  int disabled = 0;
  SideTerms terms;
  for (int k = 0; k < per_side; ++k) {
    const Leg leg = leg_at(side, k);
    if (scenario.disabled.count(leg)) {
      ++disabled;
      continue;
    }
    const int p = scenario.periods.at(leg);
    const int cycle = cycle_length(p, cfg.gait);
    const int stance = stance_steps(p, cfg.gait);
    const double lever = cfg.lateral[static_cast<std::size_t>(k)];
    if (stance == cycle) {
      terms.thrust -= lever * cfg.thrust_gain * cfg.v_ref;
    } else {
      terms.thrust += lever * cfg.thrust_gain * (1.0 - stance * cfg.v_ref) / cycle;
    }
    // The contralateral delay is common to the whole side, so only the
    // ipsilateral part of the shift matters here.
    DelayConfig ipsi = cfg.gait.delays;
    ipsi.tau_l = 0;
    active.push_back({motor_cycle(p, cfg.gait), leg_shift(leg, cfg.morphology, ipsi)});
  }

  std::int64_t joint = 1;
  for (const auto& a : active) joint = std::lcm(joint, static_cast<std::int64_t>(a.cycle.size()));
  std::int64_t any_swing = 0;
  std::int64_t deficit = 0;
  for (std::int64_t t = 0; t < joint; ++t) {
    int in_stance = 0;
    for (const auto& a : active) {
      const auto n = static_cast<std::int64_t>(a.cycle.size());
      in_stance += a.cycle[static_cast<std::size_t>(((t - a.shift) % n + n) % n)] ? 1 : 0;
    }
    if (in_stance < static_cast<int>(active.size())) ++any_swing;
    if (in_stance < cfg.min_support) ++deficit;
  }
  const double j = static_cast<double>(joint);
  terms.drag = disabled * (cfg.drag_base + cfg.drag_load * static_cast<double>(any_swing) / j);
  terms.sag = cfg.sag * static_cast<double>(deficit) / j;
  return terms;
}

double deviation(const PlantConfig& cfg, const Scenario& scenario) {
  cfg.validate();
  scenario.validate(cfg.morphology);
  const SideTerms r = side_terms(cfg, scenario, Side::kRight);
  const SideTerms l = side_terms(cfg, scenario, Side::kLeft);
  const double rate = (l.thrust - r.thrust) + (r.drag - l.drag) + (r.sag - l.sag);
  return cfg.window * rate;
}

DeviationSample simulate_window(const PlantConfig& cfg, const Scenario& scenario,
                                std::uint64_t seed) {
  double dphi = deviation(cfg, scenario);
  if (cfg.noise > 0.0) {
    Rng rng(seed);
    // Box-Muller on the portable uniform draws.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    dphi += cfg.noise * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  return {dphi};
}

std::string scenario_label(const Scenario& s) {
  if (s.disabled.empty()) return "none";
  std::string out;
  for (Leg leg : s.disabled) out += to_string(leg);
  return out;
}

void write_evaluation_header(std::ostream& out, Morphology m) {
  out << "scenario";
  for (Leg leg : legs_of(m)) out << ',' << to_string(leg);
  out << ",seed,delta_phi\n";
}

void write_evaluation_row(std::ostream& out, Morphology m, const Scenario& scenario,
                          std::uint64_t seed, double delta_phi) {
  out << scenario_label(scenario);
  for (Leg leg : legs_of(m)) {
    auto it = scenario.periods.find(leg);
    out << ',';
    if (it == scenario.periods.end()) {
      out << 'x';
    } else {
      out << it->second;
    }
  }
  out << ',' << seed << ',' << format_double(delta_phi) << '\n';
}

}  // namespace mcpg
