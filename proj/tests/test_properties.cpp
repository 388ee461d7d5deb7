#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mcpg/cpg.hpp"
#include "mcpg/gait.hpp"
#include "mcpg/kvconfig.hpp"
#include "mcpg/learner.hpp"
#include "mcpg/network.hpp"
#include "mcpg/plant.hpp"
#include "support/generators.hpp"

using namespace mcpg;
using namespace mcpg::testing;

TEST_SUITE("properties") {

TEST_CASE("map output stays inside the unit square") {
  for_all(200, [](Rng& rng) {
    CpgState s{rng.uniform(-5, 5), rng.uniform(-5, 5), 0};
    const ControlInput c{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    for (int i = 0; i < 20; ++i) {
      s = step(s, CpgParams{}, c);
      CHECK(s.x1 >= 0.0);
      CHECK(s.x1 <= 1.0);
      CHECK(s.x2 >= 0.0);
      CHECK(s.x2 <= 1.0);
    }
  });
}

TEST_CASE("controlled orbits repeat with the target period") {
  for_all(40, [](Rng& rng) {
    const int p = kLearnPeriods[rng.below(kLearnPeriods.size())];
    const CpgState init{rng.uniform(), rng.uniform(), 0};
    const auto x1 = x1_series(run_controlled(CpgParams{}, p, 2000, init));
    CHECK(detect_period(x1) == p);
  });
}

TEST_CASE("synchronized clients track the master for any seed and switch time") {
  for_all(30, [](Rng& rng) {
    NetworkOptions opts;
    opts.seed = rng.next();
    opts.start_synchronized = false;
    opts.initial_period = kLearnPeriods[rng.below(kLearnPeriods.size())];
    const Morphology m = any_morphology(rng);
    CpgNetwork net(m, opts);
    net.run(static_cast<int>(rng.below(200)));
    const auto legs = legs_of(m);
    const Leg client = legs[1 + rng.below(legs.size() - 1)];
    net.set_sync(client, true);
    net.step();
    CHECK(net.state(client).x1 == net.state(kMasterLeg).x1);
    for (int i = 0; i < 50; ++i) {
      net.step();
      CHECK(net.state(client).x1 == net.state(kMasterLeg).x1);
      CHECK(net.state(client).x2 == net.state(kMasterLeg).x2);
    }
  });
}

TEST_CASE("stance fraction over a whole cycle equals the duty factor") {
  for_all(100, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    GaitConfig cfg;
    cfg.delays.tau = static_cast<int>(rng.below(100));
    cfg.delays.tau_l = static_cast<int>(rng.below(100));
    cfg.delays.front_to_hind = rng.below(2) == 1;
    PeriodMap periods;
    for (Leg leg : legs_of(m)) periods[leg] = kGaitPeriods[rng.below(kGaitPeriods.size())];
    const int steps = 8 * 2520;  // a multiple of every cycle length
    const GaitTrace g = gait_trace(periods, steps, m, cfg);
    REQUIRE(g.legs.size() == periods.size());
    for (const auto& [leg, p] : periods) {
      const auto& row = g.of(leg);
      CHECK(row.size() == static_cast<std::size_t>(steps));
      const double frac = static_cast<double>(std::count(row.begin(), row.end(), true)) / steps;
      CHECK(frac == doctest::Approx(static_cast<double>(stance_steps(p, cfg)) / cycle_length(p, cfg)));
    }
  });
}

TEST_CASE("plant: symmetric scenarios do not turn") {
  for_all(200, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    const Scenario s = any_symmetric_scenario(rng, m);
    CHECK(mirror(s) == s);
    CHECK(std::abs(deviation(PlantConfig::defaults(m), s)) < 1e-9);
  });
}

TEST_CASE("plant: mirroring flips the sign exactly") {
  for_all(300, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    const PlantConfig cfg = PlantConfig::defaults(m);
    const Scenario s = any_scenario(rng, m);
    CHECK(mirror(mirror(s)) == s);
    CHECK(deviation(cfg, mirror(s)) == -deviation(cfg, s));
  });
}

TEST_CASE("plant: same inputs, same output") {
  for_all(100, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    PlantConfig cfg = PlantConfig::defaults(m);
    cfg.noise = rng.uniform(0, 3);
    const Scenario s = any_scenario(rng, m);
    const std::uint64_t seed = rng.next();
    const double d = simulate_window(cfg, s, seed).delta_phi;
    CHECK(std::isfinite(d));
    CHECK(d == simulate_window(cfg, s, seed).delta_phi);
  });
}

TEST_CASE("plant: slowing a leg turns the robot toward its side") {
  // A higher period means a longer stance and fewer strides, so that side
  // pushes less: left legs move dphi leftward (down), right legs rightward.
  for_all(600, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    const PlantConfig cfg = PlantConfig::defaults(m);
    Scenario s = any_scenario(rng, m);
    std::vector<Leg> legs;
    for (const auto& [leg, p] : s.periods) {
      if (p != 9) legs.push_back(leg);
    }
    if (legs.empty()) return;
    const Leg leg = legs[rng.below(legs.size())];
    const double before = deviation(cfg, s);
    const auto it = std::find(kLearnPeriods.begin(), kLearnPeriods.end(), s.periods[leg]);
    s.periods[leg] = *(it + 1 + static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(kLearnPeriods.end() - it - 1))));
    const double after = deviation(cfg, s);
    CAPTURE(to_string(leg));
    if (side_of(leg) == Side::kLeft) {
      CHECK(after <= before + 1e-9);
    } else {
      CHECK(after >= before - 1e-9);
    }
  });
}

TEST_CASE("learner: trace invariants on random scenarios") {
  for_all(60, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    const PlantConfig cfg = PlantConfig::defaults(m);
    const LegSet disabled = any_disabled(rng, m);
    LearnerConfig lc;
    const double betas[] = {0.0, 0.1, 0.5, 2.0, kGreedyBeta, kStrictGreedy};
    lc.beta = betas[rng.below(6)];
    lc.seed = rng.next();
    lc.max_trials = 60;
    const LearningTrace t = learn(cfg, disabled, lc);

    std::set<PeriodMap> evaluated;
    PeriodMap kept = t.initial;
    for (const auto& r : t.records) {
      for (Leg leg : disabled) CHECK_FALSE(r.periods.count(leg));
      if (!r.deviation) continue;
      CHECK(evaluated.insert(r.periods).second);
      if (r.n > 0) {
        int changed = 0;
        for (const auto& [leg, p] : r.periods) changed += kept.at(leg) != p;
        CHECK(changed == 1);
      }
      if (r.decision != Decision::kAborted) kept = r.periods;
      if (std::isinf(lc.beta)) CHECK(r.decision != Decision::kAcceptedWorse);
    }
    CHECK(t.final_periods == kept);
    CHECK(t.trials <= lc.max_trials);
    if (t.converged()) CHECK(std::abs(t.final_deviation) < lc.e_req);
    if (!t.converged() && !t.exhausted) CHECK(t.trials == lc.max_trials);
  });
}

TEST_CASE("learner: random permutation never rolls back") {
  for_all(20, [](Rng& rng) {
    const Morphology m = any_morphology(rng);
    LearnerConfig lc;
    lc.beta = 0.0;
    lc.seed = rng.next();
    const LearningTrace t = learn(PlantConfig::defaults(m), any_disabled(rng, m), lc);
    for (const auto& r : t.records) CHECK(r.decision != Decision::kAborted);
  });
}

TEST_CASE("kv text keeps doubles exactly") {
  for_all(200, [](Rng& rng) {
    const double v = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.below(200)) - 100);
    KvConfig kv;
    kv.set("v", v);
    std::stringstream text;
    kv.write(text);
    CHECK(KvConfig::parse(text).get_double("v") == v);
  });
}

}  // TEST_SUITE
