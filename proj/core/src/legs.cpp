#include "mcpg/legs.hpp"

#include <algorithm>

#include "mcpg/error.hpp"

namespace mcpg {

UnsupportedPeriod::UnsupportedPeriod(int period)
    : ValidationError("period " + std::to_string(period) +
                      " is not a walking period (2, 3 and 7 give no proper "
                      "gait; allowed: 1, 4, 5, 6, 8, 9)"),
      period_(period) {}

std::span<const Leg> legs_of(Morphology m) {
  if (m == Morphology::kHexapod) return kHexapodLegs;
  return kQuadrupedLegs;
}

int legs_per_side(Morphology m) { return m == Morphology::kHexapod ? 3 : 2; }

bool has_leg(Morphology m, Leg leg) {
  return ipsilateral_index(leg) < legs_per_side(m);
}

std::string_view to_string(Leg leg) {
  static constexpr std::array<std::string_view, 6> kNames{"R1", "R2", "R3",
                                                          "L1", "L2", "L3"};
  return kNames[static_cast<std::size_t>(leg)];
}

std::optional<Leg> parse_leg(std::string_view text) {
  for (Leg leg : kHexapodLegs) {
    if (to_string(leg) == text) return leg;
  }
  return std::nullopt;
}

std::string_view to_string(Morphology m) {
  return m == Morphology::kHexapod ? "hexapod" : "quadruped";
}

std::optional<Morphology> parse_morphology(std::string_view text) {
  if (text == "hexapod") return Morphology::kHexapod;
  if (text == "quadruped") return Morphology::kQuadruped;
  return std::nullopt;
}

LegSet parse_leg_list(std::string_view text, Morphology m) {
  LegSet out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      auto leg = parse_leg(token);
      if (!leg) throw InvalidArgument("unknown leg label '" + std::string(token) + "'");
      if (!has_leg(m, *leg)) {
        throw InvalidArgument("leg " + std::string(token) + " does not exist on a " +
                              std::string(to_string(m)));
      }
      out.insert(*leg);
    }
    pos = comma + 1;
  }
  return out;
}

std::string format_leg_list(const LegSet& legs) {
  std::string out;
  for (Leg leg : legs) {
    if (!out.empty()) out += ',';
    out += to_string(leg);
  }
  return out;
}

LegSet mirror(const LegSet& legs) {
  LegSet out;
  for (Leg leg : legs) out.insert(mirror(leg));
  return out;
}

PeriodMap mirror(const PeriodMap& periods) {
  PeriodMap out;
  for (const auto& [leg, p] : periods) out[mirror(leg)] = p;
  return out;
}

}  // namespace mcpg
