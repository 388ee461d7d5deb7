#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mcpg/error.hpp"
#include "mcpg/learner.hpp"

using namespace mcpg;

namespace {

const PlantConfig kHex = PlantConfig::defaults(Morphology::kHexapod);

int differing_legs(const PeriodMap& a, const PeriodMap& b) {
  int n = 0;
  for (const auto& [leg, p] : a) n += b.at(leg) != p;
  return n;
}

// Deviation is a fixed function of the combination: the sum of periods,
// offset so that one known combination is the only solution.
Evaluator toy_evaluator(PeriodMap target) {
  return [target](const Scenario& s, std::uint64_t) {
    double d = 0.0;
    for (const auto& [leg, p] : s.periods) d += std::abs(p - target.at(leg)) * 10.0;
    return d;
  };
}

}  // namespace

TEST_SUITE("learner") {

TEST_CASE("acceptance probability from the worked example") {
  const double p = acceptance_probability(64.12 - 21.46, 0.5);
  CHECK(p == doctest::Approx(5.45e-10).epsilon(0.01));
  CHECK(p == doctest::Approx(std::exp(-0.5 * 42.66)));
}

TEST_CASE("accept") {
  CHECK(accept(-1.0, 10.0, 1.0));
  CHECK(accept(-1e-12, kStrictGreedy, 1.0));
  CHECK_FALSE(accept(0.0, kStrictGreedy, 0.0));
  CHECK_FALSE(accept(5.0, kStrictGreedy, 0.0));
  for (double de : {0.0, 1.0, 1e6}) {
    CHECK(accept(de, 0.0, 1.0));
    CHECK(accept(de, 0.0, 0.0));
  }
  const double threshold = std::exp(-0.5 * 2.0);
  CHECK(accept(2.0, 0.5, threshold));
  CHECK_FALSE(accept(2.0, 0.5, std::nextafter(threshold, 1.0)));
  CHECK(acceptance_probability(-3.0, 1.0) == 1.0);
  CHECK(acceptance_probability(3.0, kStrictGreedy) == 0.0);
  CHECK(acceptance_probability(0.0, 1.0) == 1.0);
}

TEST_CASE("acceptance frequency") {
  Rng rng(42);
  const int n = 100000;
  for (auto [de, beta] : {std::pair{1.0, 0.5}, {3.0, 0.2}, {0.1, 10.0}}) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += accept(de, beta, rng.uniform());
    const double p = std::exp(-beta * de);
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - p) <= 3 * se);
  }
}

TEST_CASE("propose") {
  const LegSet functional{Leg::R2, Leg::L1};
  const PeriodMap current{{Leg::R2, 4}, {Leg::L1, 4}};
  Rng rng(1);

  SUBCASE("changes at most one functional leg") {
    std::set<PeriodMap> history{current};
    for (int i = 0; i < 8; ++i) {
      const PeriodMap c = propose(current, history, functional, rng);
      CHECK(differing_legs(c, current) == 1);
      CHECK(c.size() == 2);
      CHECK_FALSE(history.count(c));
      history.insert(c);
    }
    // the 9 neighbours of (4,4) including itself are now all tried
    CHECK_THROWS_AS(propose(current, history, functional, rng), Exhausted);
  }

  SUBCASE("pigeonhole") {
    std::set<PeriodMap> history{current};
    PeriodMap missing{{Leg::R2, 4}, {Leg::L1, 9}};
    for (int p : kLearnPeriods) {
      for (int q : kLearnPeriods) {
        PeriodMap c{{Leg::R2, p}, {Leg::L1, q}};
        if (c != missing) history.insert(c);
      }
    }
    std::vector<PeriodMap> skipped;
    CHECK(propose(current, history, functional, rng, &skipped) == missing);
    for (const auto& s : skipped) CHECK(history.count(s));
  }

  SUBCASE("every neighbour is reachable") {
    std::set<PeriodMap> seen;
    for (int i = 0; i < 500; ++i) seen.insert(propose(current, {current}, functional, rng));
    CHECK(seen.size() == 8);
  }

  CHECK_THROWS_AS(propose(current, {}, {}, rng), InvalidArgument);
}

TEST_CASE("initial combination already good enough") {
  const LearningTrace t = learn(toy_evaluator({{Leg::R1, 4}, {Leg::R2, 4}, {Leg::L1, 4}, {Leg::L2, 4}}),
                                Morphology::kQuadruped, {}, {});
  CHECK(t.converged());
  CHECK(t.trials == 0);
  CHECK(t.records.size() == 1);
  CHECK(t.records[0].decision == Decision::kKept);
  CHECK(t.final_periods == t.initial);
}

TEST_CASE("toy landscape is solved") {
  const PeriodMap target{{Leg::R1, 9}, {Leg::R2, 4}, {Leg::L2, 6}};
  LearnerConfig cfg;
  cfg.e_req = 1.0;
  cfg.max_trials = 124;
  const LearningTrace t = learn(toy_evaluator(target), Morphology::kQuadruped, {Leg::L1}, cfg);
  CHECK(t.converged());
  CHECK(t.final_periods == target);
  CHECK(std::abs(t.final_deviation) < 1.0);
}

TEST_CASE("R1 disabled converges under the default plant") {
  int converged = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    LearnerConfig cfg;
    cfg.seed = seed;
    cfg.max_trials = 100;
    const LearningTrace t = learn(kHex, {Leg::R1}, cfg);
    converged += t.converged();
  }
  CHECK(converged >= 45);
}

TEST_CASE("trace bookkeeping") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    LearnerConfig cfg;
    cfg.seed = seed;
    cfg.beta = 0.05;
    const LegSet disabled{Leg::R1, Leg::L2};
    const LearningTrace t = learn(kHex, disabled, cfg);

    std::set<PeriodMap> evaluated;
    PeriodMap current = t.initial;
    int last_n = -1;
    for (const auto& r : t.records) {
      for (Leg leg : disabled) CHECK_FALSE(r.periods.count(leg));
      CHECK(r.periods.size() == 4);
      if (r.decision == Decision::kDuplicateSkipped) {
        CHECK_FALSE(r.deviation.has_value());
        CHECK(evaluated.count(r.periods));
        continue;
      }
      REQUIRE(r.deviation.has_value());
      CHECK(evaluated.insert(r.periods).second);
      CHECK(r.n == last_n + 1);
      last_n = r.n;
      if (r.n > 0) CHECK(differing_legs(r.periods, current) == 1);
      if (r.decision != Decision::kAborted) current = r.periods;
    }
    CHECK(t.final_periods == current);
    CHECK(t.trials == last_n);
    CHECK(t.evaluations() == static_cast<int>(evaluated.size()));
    if (t.converged()) {
      CHECK(std::abs(t.final_deviation) < cfg.e_req);
      CHECK(std::abs(*t.records.back().deviation) < cfg.e_req);
    }
  }
}

TEST_CASE("rollback after an abort") {
  // with strict greedy every worse proposal is aborted and the next proposal
  // starts again from the last kept combination
  LearnerConfig cfg;
  cfg.beta = kStrictGreedy;
  cfg.seed = 4;
  const LearningTrace t = learn(kHex, {Leg::R1, Leg::L2}, cfg);
  bool saw_abort = false;
  PeriodMap kept = t.initial;
  for (const auto& r : t.records) {
    if (r.decision == Decision::kDuplicateSkipped || r.n == 0) continue;
    CHECK(differing_legs(r.periods, kept) == 1);
    if (r.decision == Decision::kAborted) {
      saw_abort = true;
    } else {
      CHECK(r.decision == Decision::kKept);
      kept = r.periods;
    }
  }
  CHECK(saw_abort);
}

TEST_CASE("strict greedy can get stuck") {
  LearnerConfig cfg;
  cfg.beta = kStrictGreedy;
  const LearningTrace t = learn(kHex, {Leg::R1, Leg::L2}, cfg);
  CHECK_FALSE(t.converged());
  CHECK(t.exhausted);
  CHECK(t.trials < cfg.max_trials);
}

TEST_CASE("trial cap") {
  LearnerConfig cfg;
  cfg.max_trials = 3;
  cfg.e_req = 1e-6;
  const LearningTrace t = learn(kHex, {Leg::R1}, cfg);
  CHECK(t.outcome == Outcome::kTrialCapReached);
  CHECK(t.trials == 3);
  cfg.max_trials = 0;
  CHECK(learn(kHex, {Leg::R1}, cfg).trials == 0);
}

TEST_CASE("same seed, same trace") {
  LearnerConfig cfg;
  cfg.seed = 17;
  std::ostringstream a, b;
  write_trace_csv(a, learn(kHex, {Leg::R2, Leg::R3}, cfg));
  write_trace_csv(b, learn(kHex, {Leg::R2, Leg::R3}, cfg));
  CHECK(a.str() == b.str());
}

TEST_CASE("config and argument errors") {
  LearnerConfig cfg;
  cfg.beta = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.e_req = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.max_trials = -1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK_THROWS_AS(learn(kHex, {Leg::R1, Leg::R2, Leg::R3, Leg::L1, Leg::L2, Leg::L3}, {}), ValidationError);
  CHECK_THROWS_AS(learn(PlantConfig::defaults(Morphology::kQuadruped), {Leg::R3}, {}), ValidationError);
}

TEST_CASE("sweep") {
  const Evaluator ev = plant_evaluator(kHex);
  const auto one = sweep_beta(ev, Morphology::kHexapod, {Leg::R1}, {0.5}, 1, 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].sd_trials == 0.0);
  CHECK(one[0].label == "annealing");

  const auto rows = sweep_beta(ev, Morphology::kHexapod, {Leg::R1}, {0.0, 0.5, kGreedyBeta}, 50, 11);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].label == "random_permutation");
  CHECK(rows[1].label == "annealing");
  CHECK(rows[2].label == "greedy");
  CHECK(rows[0].mean_trials >= rows[1].mean_trials);
  for (const auto& r : rows) CHECK(r.runs == 50);

  CHECK_THROWS_AS(sweep_beta(ev, Morphology::kHexapod, {Leg::R1}, {0.5}, 0, 3), InvalidArgument);

  std::ostringstream out;
  write_sweep_csv(out, sweep_beta(ev, Morphology::kHexapod, {Leg::R1}, {kStrictGreedy}, 2, 3));
  CHECK(out.str().rfind("beta,label,runs,mean_trials,sd_trials,failure_rate\ninf,annealing,2,", 0) == 0);
}

TEST_CASE("trace formats") {
  LearnerConfig cfg;
  cfg.seed = 2;
  const LearningTrace t = learn(kHex, {Leg::R1}, cfg);
  std::ostringstream csv;
  write_trace_csv(csv, t);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "trial,R1,R2,R3,L1,L2,L3,deviation,abs_deviation,decision,seed");
  std::getline(in, line);
  CHECK(line.rfind("0,x,4,4,4,4,4,", 0) == 0);
  CHECK(line.find(",kept,") != std::string::npos);

  const auto j = nlohmann::json::parse(trace_to_json(t));
  CHECK(j["outcome"] == std::string(to_string(t.outcome)));
  CHECK(j["trials"] == t.trials);
  CHECK(j["records"].size() == t.records.size());
  CHECK(j["disabled"] == nlohmann::json::array({"R1"}));
  CHECK(j["beta"] == "0.5");
  CHECK(format_beta(kStrictGreedy) == "inf");
  CHECK(to_string(Decision::kAcceptedWorse) == "accepted-worse");
}

}  // TEST_SUITE
