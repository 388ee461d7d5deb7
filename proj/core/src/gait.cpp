#include "mcpg/gait.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "mcpg/error.hpp"
#include "mcpg/network.hpp"

namespace mcpg {

void DelayConfig::validate() const {
  if (tau < 0 || tau_l < 0) throw InvalidArgument("gait delays must be >= 0");
}

void GaitConfig::validate() const {
  if (expansion < 1) throw InvalidArgument("cycle expansion K must be >= 1");
  for (int p : kGaitPeriods) {
    auto it = duty.find(p);
    if (it == duty.end()) {
      throw InvalidArgument("duty factor missing for period " + std::to_string(p));
    }
    if (!(it->second > 0.0 && it->second <= 1.0)) {
      throw InvalidArgument("duty factors must lie in (0, 1]");
    }
  }
  delays.validate();
}

std::string_view to_string(GaitClass g) {
  switch (g) {
    case GaitClass::kSlowWave: return "slow_wave";
    case GaitClass::kFastWave: return "fast_wave";
    case GaitClass::kTransition: return "transition";
    case GaitClass::kTetrapod: return "tetrapod";
    case GaitClass::kTripod: return "tripod";
    case GaitClass::kStop: return "stop";
  }
  return "unknown";
}

GaitClass classify_gait(int p) {
  switch (p) {
    case 9: return GaitClass::kSlowWave;
    case 8: return GaitClass::kFastWave;
    case 6: return GaitClass::kTransition;
    case 5: return GaitClass::kTetrapod;
    case 4: return GaitClass::kTripod;
    case 1: return GaitClass::kStop;
    default: throw UnsupportedPeriod(p);
  }
}

double duty_factor(int p, const GaitConfig& cfg) {
  require_gait_period(p);
  auto it = cfg.duty.find(p);
  if (it == cfg.duty.end()) {
    throw InvalidArgument("duty factor missing for period " + std::to_string(p));
  }
  return it->second;
}

int cycle_length(int p, const GaitConfig& cfg) {
  require_gait_period(p);
  if (cfg.expansion < 1) throw InvalidArgument("cycle expansion K must be >= 1");
  return cfg.expansion * p;
}

int stance_steps(int p, const GaitConfig& cfg) {
  const int cycle = cycle_length(p, cfg);
  const auto stance = static_cast<int>(std::lround(duty_factor(p, cfg) * cycle));
  return std::clamp(stance, 1, cycle);
}

StanceSeries motor_cycle(int p, const GaitConfig& cfg) {
  const int cycle = cycle_length(p, cfg);
  const int stance = stance_steps(p, cfg);
  StanceSeries out(static_cast<std::size_t>(cycle), false);
  std::fill_n(out.begin(), stance, true);
  return out;
}

StanceSeries motor_rhythm(int p, int steps, const GaitConfig& cfg) {
  if (steps < 0) throw InvalidArgument("steps must be >= 0");
  const StanceSeries cycle = motor_cycle(p, cfg);
  StanceSeries out(static_cast<std::size_t>(steps));
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = cycle[t % cycle.size()];
  return out;
}

StanceSeries motor_rhythm(int p, int steps, int expansion) {
  GaitConfig cfg;
  cfg.expansion = expansion;
  return motor_rhythm(p, steps, cfg);
}

int leg_shift(Leg leg, Morphology m, const DelayConfig& delays) {
  const int per_side = legs_per_side(m);
  const int k = ipsilateral_index(leg);
  const int chain = delays.front_to_hind ? k : per_side - 1 - k;
  return chain * delays.tau + (side_of(leg) == Side::kLeft ? delays.tau_l : 0);
}

const StanceSeries& GaitTrace::of(Leg leg) const {
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (legs[i] == leg) return stance[i];
  }
  throw InvalidArgument("leg " + std::string(to_string(leg)) + " not in gait trace");
}

GaitTrace apply_delays(const std::map<Leg, StanceSeries>& cycles, int steps, Morphology m,
                       const DelayConfig& delays) {
  delays.validate();
  if (steps < 0) throw InvalidArgument("steps must be >= 0");
  GaitTrace trace;
  trace.morphology = m;
  for (Leg leg : legs_of(m)) {
    auto it = cycles.find(leg);
    if (it == cycles.end()) continue;
    const StanceSeries& cycle = it->second;
    if (cycle.empty()) throw InvalidArgument("empty motor cycle");
    const auto n = static_cast<std::int64_t>(cycle.size());
    const std::int64_t shift = leg_shift(leg, m, delays) % n;
    StanceSeries row(static_cast<std::size_t>(steps));
    for (std::int64_t t = 0; t < steps; ++t) {
      row[static_cast<std::size_t>(t)] = cycle[static_cast<std::size_t>(((t - shift) % n + n) % n)];
    }
    trace.legs.push_back(leg);
    trace.stance.push_back(std::move(row));
  }
  for (const auto& [leg, cycle] : cycles) {
    if (!has_leg(m, leg)) {
      throw InvalidArgument("leg " + std::string(to_string(leg)) + " does not exist on a " +
                            std::string(to_string(m)));
    }
  }
  return trace;
}

GaitTrace gait_trace(const PeriodMap& periods, int steps, Morphology m, const GaitConfig& cfg) {
  std::map<Leg, StanceSeries> cycles;
  for (const auto& [leg, p] : periods) cycles.emplace(leg, motor_cycle(p, cfg));
  return apply_delays(cycles, steps, m, cfg.delays);
}

StanceSeries binarize(std::span<const double> signal, int cycle) {
  if (cycle < 1) throw InvalidArgument("binarize: cycle must be >= 1");
  StanceSeries out(signal.size());
  const auto c = static_cast<std::size_t>(cycle);
  std::vector<double> window;
  for (std::size_t start = 0; start < signal.size(); start += c) {
    const std::size_t end = std::min(signal.size(), start + c);
    window.assign(signal.begin() + static_cast<std::ptrdiff_t>(start),
                  signal.begin() + static_cast<std::ptrdiff_t>(end));
    std::sort(window.begin(), window.end());
    const std::size_t n = window.size();
    const double median = n % 2 == 1 ? window[n / 2] : 0.5 * (window[n / 2 - 1] + window[n / 2]);
    for (std::size_t t = start; t < end; ++t) out[t] = signal[t] < median;
  }
  return out;
}

namespace {

std::string render_ascii(const GaitTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.legs.size(); ++i) {
    out += to_string(trace.legs[i]);
    out += " |";
    for (bool s : trace.stance[i]) out += s ? '#' : '.';
    out += "|\n";
  }
  return out;
}

std::string render_svg(const GaitTrace& trace) {
  constexpr int kCell = 4;
  constexpr int kRow = 18;
  constexpr int kGap = 6;
  constexpr int kLabel = 32;
  const auto steps = static_cast<int>(trace.steps());
  const auto rows = static_cast<int>(trace.legs.size());
  const int width = kLabel + steps * kCell + 2;
  const int height = rows * (kRow + kGap) + kGap;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
  for (int i = 0; i < rows; ++i) {
    const int y = kGap + i * (kRow + kGap);
    svg << "<text x=\"2\" y=\"" << y + kRow - 4
        << "\" font-family=\"monospace\" font-size=\"12\">" << to_string(trace.legs[i])
        << "</text>\n";
    svg << "<rect class=\"leg\" x=\"" << kLabel << "\" y=\"" << y << "\" width=\""
        << steps * kCell << "\" height=\"" << kRow
        << "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"0.5\"/>\n";
    const auto& row = trace.stance[static_cast<std::size_t>(i)];
    int t = 0;
    while (t < steps) {
      if (!row[static_cast<std::size_t>(t)]) {
        ++t;
        continue;
      }
      int end = t;
      while (end < steps && row[static_cast<std::size_t>(end)]) ++end;
      svg << "<rect class=\"stance\" x=\"" << kLabel + t * kCell << "\" y=\"" << y
          << "\" width=\"" << (end - t) * kCell << "\" height=\"" << kRow
          << "\" fill=\"#1f5fbf\"/>\n";
      t = end;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string render_gait(const GaitTrace& trace, RenderFormat format) {
  return format == RenderFormat::kAscii ? render_ascii(trace) : render_svg(trace);
}

void write_stance_csv(std::ostream& out, const GaitTrace& trace) {
  out << "leg";
  for (std::size_t t = 0; t < trace.steps(); ++t) out << ",s" << t;
  out << '\n';
  for (std::size_t i = 0; i < trace.legs.size(); ++i) {
    out << to_string(trace.legs[i]);
    for (bool s : trace.stance[i]) out << ',' << (s ? 1 : 0);
    out << '\n';
  }
}

}  // namespace mcpg
