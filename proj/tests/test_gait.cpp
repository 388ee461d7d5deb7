#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcpg/error.hpp"
#include "mcpg/gait.hpp"
#include "mcpg/network.hpp"

using namespace mcpg;

namespace {

PeriodMap uniform_periods(Morphology m, int p) {
  PeriodMap out;
  for (Leg leg : legs_of(m)) out[leg] = p;
  return out;
}

int count_stance(const StanceSeries& s) { return static_cast<int>(std::count(s.begin(), s.end(), true)); }

}  // namespace

TEST_SUITE("gait") {

TEST_CASE("classification") {
  CHECK(classify_gait(9) == GaitClass::kSlowWave);
  CHECK(classify_gait(8) == GaitClass::kFastWave);
  CHECK(classify_gait(6) == GaitClass::kTransition);
  CHECK(classify_gait(5) == GaitClass::kTetrapod);
  CHECK(classify_gait(4) == GaitClass::kTripod);
  CHECK(classify_gait(1) == GaitClass::kStop);
  for (int p : {0, 2, 3, 7, 10}) {
    CAPTURE(p);
    CHECK_THROWS_AS(classify_gait(p), UnsupportedPeriod);
    CHECK_THROWS_AS(motor_cycle(p), UnsupportedPeriod);
  }
  CHECK(to_string(GaitClass::kTetrapod) == "tetrapod");
}

TEST_CASE("motor cycle shape") {
  const StanceSeries stop = motor_rhythm(1, 100, 8);
  CHECK(count_stance(stop) == 100);

  const StanceSeries tripod = motor_cycle(4);
  REQUIRE(tripod.size() == 32);
  CHECK(count_stance(tripod) == 16);
  CHECK(tripod.front());
  CHECK_FALSE(tripod.back());

  // stance fraction grows with the period
  double prev = 0.0;
  for (int p : {4, 5, 6, 8, 9}) {
    const StanceSeries c = motor_cycle(p);
    const double frac = static_cast<double>(count_stance(c)) / c.size();
    CHECK(frac > prev);
    CHECK(frac == doctest::Approx(duty_factor(p)).epsilon(1e-9));
    prev = frac;
    // one stance block then one swing block
    const auto first_swing = std::find(c.begin(), c.end(), false);
    CHECK(std::find(first_swing, c.end(), true) == c.end());
  }
}

TEST_CASE("expansion factor") {
  GaitConfig cfg;
  cfg.expansion = 3;
  CHECK(cycle_length(5, cfg) == 15);
  CHECK(stance_steps(5, cfg) == 9);
  cfg.expansion = 0;
  CHECK_THROWS_AS(cycle_length(4, cfg), InvalidArgument);
}

TEST_CASE("rhythm repeats its cycle") {
  for (int p : kGaitPeriods) {
    const StanceSeries c = motor_cycle(p);
    const StanceSeries r = motor_rhythm(p, 500);
    for (std::size_t t = 0; t < r.size(); ++t) CHECK(r[t] == c[t % c.size()]);
  }
  CHECK_THROWS_AS(motor_rhythm(4, -1), InvalidArgument);
}

TEST_CASE("leg shifts") {
  const DelayConfig d;
  CHECK(leg_shift(Leg::R1, Morphology::kHexapod, d) == 0);
  CHECK(leg_shift(Leg::R2, Morphology::kHexapod, d) == 16);
  CHECK(leg_shift(Leg::R3, Morphology::kHexapod, d) == 32);
  CHECK(leg_shift(Leg::L1, Morphology::kHexapod, d) == 48);
  CHECK(leg_shift(Leg::L3, Morphology::kHexapod, d) == 80);
  DelayConfig back = d;
  back.front_to_hind = false;
  CHECK(leg_shift(Leg::R1, Morphology::kHexapod, back) == 32);
  CHECK(leg_shift(Leg::R3, Morphology::kHexapod, back) == 0);
  CHECK(leg_shift(Leg::R1, Morphology::kQuadruped, back) == 16);
  CHECK(leg_shift(Leg::L2, Morphology::kQuadruped, d) == 64);
}

TEST_CASE("zero delays leave every leg in phase") {
  GaitConfig cfg;
  cfg.delays = {0, 0, true};
  const GaitTrace g = gait_trace(uniform_periods(Morphology::kHexapod, 5), 120, Morphology::kHexapod, cfg);
  const StanceSeries ref = motor_rhythm(5, 120, cfg);
  for (const auto& row : g.stance) CHECK(row == ref);
}

TEST_CASE("tripod groups alternate") {
  const GaitTrace g = gait_trace(uniform_periods(Morphology::kHexapod, 4), 256, Morphology::kHexapod);
  for (std::size_t t = 0; t < g.steps(); ++t) {
    const bool a = g.of(Leg::R1)[t];
    CHECK(g.of(Leg::R3)[t] == a);
    CHECK(g.of(Leg::L2)[t] == a);
    CHECK(g.of(Leg::R2)[t] == !a);
    CHECK(g.of(Leg::L1)[t] == !a);
    CHECK(g.of(Leg::L3)[t] == !a);
  }
}

TEST_CASE("a shift of a whole cycle is invisible") {
  std::map<Leg, StanceSeries> cycles{{Leg::R2, motor_cycle(4)}};
  DelayConfig d;
  d.tau = 32;
  const GaitTrace g = apply_delays(cycles, 100, Morphology::kHexapod, d);
  CHECK(g.of(Leg::R2) == motor_rhythm(4, 100));
}

TEST_CASE("delays shift circularly") {
  std::map<Leg, StanceSeries> cycles{{Leg::R1, motor_cycle(5)}, {Leg::R2, motor_cycle(5)}};
  const GaitTrace g = apply_delays(cycles, 200, Morphology::kHexapod);
  const StanceSeries& c = cycles.at(Leg::R2);
  for (std::size_t t = 0; t < 200; ++t) CHECK(g.of(Leg::R2)[t] == c[(t + 40 - 16) % 40]);
  CHECK(g.legs == std::vector<Leg>{Leg::R1, Leg::R2});
  CHECK_THROWS_AS(g.of(Leg::L1), InvalidArgument);

  cycles[Leg::R3] = motor_cycle(4);
  CHECK_THROWS_AS(apply_delays(cycles, 10, Morphology::kQuadruped), InvalidArgument);
  cycles[Leg::R3] = {};
  CHECK_THROWS_AS(apply_delays(cycles, 10, Morphology::kHexapod), InvalidArgument);
}

TEST_CASE("disabled legs are left out") {
  PeriodMap p = uniform_periods(Morphology::kHexapod, 6);
  p.erase(Leg::L2);
  const GaitTrace g = gait_trace(p, 50, Morphology::kHexapod);
  CHECK(g.legs.size() == 5);
  CHECK(std::find(g.legs.begin(), g.legs.end(), Leg::L2) == g.legs.end());
}

TEST_CASE("binarize") {
  const std::vector<double> s{0.1, 0.9, 0.2, 0.8, 0.5, 0.4, 0.6, 0.3};
  const StanceSeries b = binarize(s, 4);
  CHECK(b == StanceSeries{true, false, true, false, false, true, false, true});
  CHECK(binarize(std::vector<double>{}, 3).empty());
  CHECK_THROWS_AS(binarize(s, 0), InvalidArgument);
  // constant signal: nothing is strictly below the median
  const std::vector<double> flat(10, 0.5);
  CHECK(count_stance(binarize(flat, 5)) == 0);
}

TEST_CASE("ascii rendering") {
  const GaitTrace g = gait_trace(uniform_periods(Morphology::kQuadruped, 1), 6, Morphology::kQuadruped);
  CHECK(render_gait(g, RenderFormat::kAscii) == "R1 |######|\nR2 |######|\nL1 |######|\nL2 |######|\n");
  const GaitTrace t = gait_trace(uniform_periods(Morphology::kHexapod, 4), 64, Morphology::kHexapod);
  CHECK(render_gait(t, RenderFormat::kAscii) == render_gait(t, RenderFormat::kAscii));
}

TEST_CASE("svg rendering") {
  const GaitTrace g = gait_trace(uniform_periods(Morphology::kHexapod, 4), 64, Morphology::kHexapod);
  const std::string svg = render_gait(g, RenderFormat::kSvg);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  // 64 steps of a 32-step cycle with half-cycle shifts: two blocks per leg
  std::size_t blocks = 0;
  for (auto pos = svg.find("class=\"stance\""); pos != std::string::npos;
       pos = svg.find("class=\"stance\"", pos + 1)) {
    ++blocks;
  }
  CHECK(blocks == 12);
  CHECK(svg == render_gait(g, RenderFormat::kSvg));
}

TEST_CASE("stance csv") {
  const GaitTrace g = gait_trace({{Leg::R1, 4}}, 3, Morphology::kHexapod);
  std::ostringstream out;
  write_stance_csv(out, g);
  CHECK(out.str() == "leg,s0,s1,s2\nR1,1,1,1\n");
}

TEST_CASE("config validation") {
  GaitConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.duty.erase(6);
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.duty[5] = 1.2;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.delays.tau = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

}  // TEST_SUITE
