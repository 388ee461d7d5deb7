#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcpg {

enum class Morphology { kHexapod, kQuadruped };

enum class Side { kRight, kLeft };

/// Leg labels. For the quadruped, R2/L2 are the hind legs; R3/L3 are unused.
enum class Leg : std::uint8_t { R1, R2, R3, L1, L2, L3 };

using PeriodMap = std::map<Leg, int>;
using LegSet = std::set<Leg>;

inline constexpr std::array<Leg, 6> kHexapodLegs{Leg::R1, Leg::R2, Leg::R3,
                                                 Leg::L1, Leg::L2, Leg::L3};
inline constexpr std::array<Leg, 4> kQuadrupedLegs{Leg::R1, Leg::R2, Leg::L1,
                                                   Leg::L2};

/// Legs of a morphology in canonical order (right side front to hind, then left).
std::span<const Leg> legs_of(Morphology m);
/// Number of legs on one side.
int legs_per_side(Morphology m);
bool has_leg(Morphology m, Leg leg);

/// The master oscillator always drives the right front leg.
inline constexpr Leg kMasterLeg = Leg::R1;

constexpr Side side_of(Leg leg) {
  return static_cast<int>(leg) < 3 ? Side::kRight : Side::kLeft;
}
/// 0 = front, counting toward the hind legs.
constexpr int ipsilateral_index(Leg leg) { return static_cast<int>(leg) % 3; }
constexpr Leg mirror(Leg leg) {
  return static_cast<Leg>((static_cast<int>(leg) + 3) % 6);
}
constexpr Leg leg_at(Side side, int index) {
  return static_cast<Leg>((side == Side::kRight ? 0 : 3) + index);
}

std::string_view to_string(Leg leg);
std::optional<Leg> parse_leg(std::string_view text);
std::string_view to_string(Morphology m);
std::optional<Morphology> parse_morphology(std::string_view text);

/// Parses "R1,L2" style lists; throws InvalidArgument on unknown labels or
/// labels that do not belong to the morphology.
LegSet parse_leg_list(std::string_view text, Morphology m);
std::string format_leg_list(const LegSet& legs);

LegSet mirror(const LegSet& legs);
PeriodMap mirror(const PeriodMap& periods);

}  // namespace mcpg
