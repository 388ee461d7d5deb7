#include "mcpg/learner.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "mcpg/error.hpp"
#include "mcpg/parallel.hpp"

namespace mcpg {

void LearnerConfig::validate() const {
  if (std::isnan(beta) || beta < 0.0) throw InvalidArgument("beta must be >= 0");
  if (!(e_req > 0.0) || !std::isfinite(e_req)) throw InvalidArgument("e_req must be > 0");
  if (max_trials < 0) throw InvalidArgument("max_trials must be >= 0");
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::kKept: return "kept";
    case Decision::kAborted: return "aborted";
    case Decision::kDuplicateSkipped: return "duplicate-skipped";
    case Decision::kAcceptedWorse: return "accepted-worse";
  }
  return "unknown";
}

std::string_view to_string(Outcome o) {
  return o == Outcome::kConverged ? "converged" : "trial-cap-reached";
}

std::string format_beta(double beta) {
  return std::isinf(beta) ? std::string("inf") : format_double(beta);
}

Evaluator plant_evaluator(PlantConfig cfg) {
  cfg.validate();
  return [cfg = std::move(cfg)](const Scenario& s, std::uint64_t seed) {
    return simulate_window(cfg, s, seed).delta_phi;
  };
}

std::uint64_t search_space_size(std::size_t functional_legs) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < functional_legs; ++i) n *= kLearnPeriods.size();
  return n;
}

PeriodMap propose(const PeriodMap& current, const std::set<PeriodMap>& history,
                  const LegSet& functional, Rng& rng, std::vector<PeriodMap>* skipped) {
  if (functional.empty()) throw InvalidArgument("propose: no functional legs");
  const std::vector<Leg> legs(functional.begin(), functional.end());

  bool open = false;
  for (Leg leg : legs) {
    for (int p : kLearnPeriods) {
      PeriodMap c = current;
      c[leg] = p;
      if (!history.count(c)) {
        open = true;
        break;
      }
    }
    if (open) break;
  }
  if (!open) throw Exhausted("every single-leg change of the current combination was tried");

  while (true) {
    PeriodMap candidate = current;
    const Leg leg = legs[rng.below(legs.size())];
    candidate[leg] = kLearnPeriods[rng.below(kLearnPeriods.size())];
    if (!history.count(candidate)) return candidate;
    if (skipped) skipped->push_back(std::move(candidate));
  }
}

double acceptance_probability(double delta_e, double beta) {
  if (delta_e < 0.0) return 1.0;
  if (std::isinf(beta)) return 0.0;
  return std::exp(-beta * delta_e);
}

bool accept(double delta_e, double beta, double x) {
  if (delta_e < 0.0) return true;
  if (std::isinf(beta)) return false;
  return x <= std::exp(-beta * delta_e);
}

LearningTrace learn(const Evaluator& evaluate, Morphology m, const LegSet& disabled,
                    const LearnerConfig& cfg) {
  cfg.validate();
  for (Leg leg : disabled) {
    if (!has_leg(m, leg)) {
      throw ValidationError("leg " + std::string(to_string(leg)) + " is not on a " +
                            std::string(to_string(m)));
    }
  }
  Scenario scenario = Scenario::all_four(m, disabled);
  const LegSet functional = scenario.functional(m);
  if (functional.empty()) throw ValidationError("every leg is disabled; nothing to learn");

  LearningTrace trace;
  trace.morphology = m;
  trace.disabled = disabled;
  trace.config = cfg;
  trace.initial = scenario.periods;

  Rng rng(cfg.seed);
  const std::uint64_t eval_base = derive_seed(cfg.seed, 0x9e37);
  std::set<PeriodMap> history;

  PeriodMap current = scenario.periods;
  double current_dphi = evaluate(scenario, derive_seed(eval_base, 0));
  double energy = std::abs(current_dphi);
  history.insert(current);
  trace.records.push_back({0, current, current_dphi, Decision::kKept, derive_seed(eval_base, 0)});

  bool converged = energy < cfg.e_req;
  std::vector<PeriodMap> skipped;
  while (!converged && trace.trials < cfg.max_trials) {
    skipped.clear();
    PeriodMap candidate;
    try {
      candidate = propose(current, history, functional, rng, cfg.log_duplicates ? &skipped : nullptr);
    } catch (const Exhausted&) {
      trace.exhausted = true;
      break;
    }
    const int n = ++trace.trials;
    for (auto& dup : skipped) {
      trace.records.push_back({n, std::move(dup), std::nullopt, Decision::kDuplicateSkipped, 0});
    }
    history.insert(candidate);
    scenario.periods = candidate;
    const std::uint64_t eval_seed = derive_seed(eval_base, static_cast<std::uint64_t>(n));
    const double dphi = evaluate(scenario, eval_seed);
    const double e = std::abs(dphi);
    const double delta_e = e - energy;

    Decision decision;
    if (e < cfg.e_req || delta_e < 0.0) {
      decision = Decision::kKept;
    } else if (accept(delta_e, cfg.beta, rng.uniform())) {
      decision = Decision::kAcceptedWorse;
    } else {
      decision = Decision::kAborted;
    }
    if (decision != Decision::kAborted) {
      current = candidate;
      current_dphi = dphi;
      energy = e;
    }
    trace.records.push_back({n, std::move(candidate), dphi, decision, eval_seed});
    converged = e < cfg.e_req;
  }

  trace.outcome = converged ? Outcome::kConverged : Outcome::kTrialCapReached;
  trace.final_periods = current;
  trace.final_deviation = current_dphi;
  return trace;
}

LearningTrace learn(const PlantConfig& plant, const LegSet& disabled, const LearnerConfig& cfg) {
  return learn(plant_evaluator(plant), plant.morphology, disabled, cfg);
}

std::vector<BetaRow> sweep_beta(const Evaluator& evaluate, Morphology m, const LegSet& disabled,
                                const std::vector<double>& betas, int runs, std::uint64_t seed,
                                LearnerConfig base) {
  if (runs < 1) throw InvalidArgument("sweep_beta: runs must be >= 1");
  if (betas.empty()) throw InvalidArgument("sweep_beta: no beta values");
  const auto nb = betas.size();
  const auto nr = static_cast<std::size_t>(runs);
  std::vector<int> trials(nb * nr);
  std::vector<char> failed(nb * nr);
  parallel_for(nb * nr, [&](std::size_t job) {
    LearnerConfig cfg = base;
    cfg.beta = betas[job / nr];
    cfg.seed = derive_seed(seed, job % nr);
    const LearningTrace t = learn(evaluate, m, disabled, cfg);
    trials[job] = t.trials;
    failed[job] = !t.converged();
  });

  const double largest = *std::max_element(betas.begin(), betas.end());
  std::vector<BetaRow> rows;
  for (std::size_t b = 0; b < nb; ++b) {
    BetaRow row;
    row.beta = betas[b];
    row.runs = runs;
    if (row.beta == 0.0) {
      row.label = "random_permutation";
    } else if (row.beta == largest && nb > 1) {
      row.label = "greedy";
    } else {
      row.label = "annealing";
    }
    double sum = 0.0;
    int fails = 0;
    for (std::size_t r = 0; r < nr; ++r) {
      sum += trials[b * nr + r];
      fails += failed[b * nr + r];
    }
    row.mean_trials = sum / runs;
    double ss = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
      const double d = trials[b * nr + r] - row.mean_trials;
      ss += d * d;
    }
    row.sd_trials = runs > 1 ? std::sqrt(ss / (runs - 1)) : 0.0;
    row.failure_rate = static_cast<double>(fails) / runs;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_trace_csv(std::ostream& out, const LearningTrace& trace) {
  out << "trial";
  for (Leg leg : legs_of(trace.morphology)) out << ',' << to_string(leg);
  out << ",deviation,abs_deviation,decision,seed\n";
  for (const auto& r : trace.records) {
    out << r.n;
    for (Leg leg : legs_of(trace.morphology)) {
      auto it = r.periods.find(leg);
      out << ',';
      if (it == r.periods.end()) {
        out << 'x';
      } else {
        out << it->second;
      }
    }
    if (r.deviation) {
      out << ',' << format_double(*r.deviation) << ',' << format_double(std::abs(*r.deviation));
    } else {
      out << ",,";
    }
    out << ',' << to_string(r.decision) << ',' << r.eval_seed << '\n';
  }
}

namespace {

nlohmann::json periods_json(const PeriodMap& periods) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [leg, p] : periods) j[std::string(to_string(leg))] = p;
  return j;
}

}  // namespace

std::string trace_to_json(const LearningTrace& trace) {
  using nlohmann::json;
  json j;
  j["morphology"] = std::string(to_string(trace.morphology));
  json disabled = json::array();
  for (Leg leg : trace.disabled) disabled.push_back(std::string(to_string(leg)));
  j["disabled"] = disabled;
  j["seed"] = trace.config.seed;
  j["beta"] = format_beta(trace.config.beta);
  j["e_req"] = trace.config.e_req;
  j["max_trials"] = trace.config.max_trials;
  j["initial"] = periods_json(trace.initial);
  j["outcome"] = std::string(to_string(trace.outcome));
  j["exhausted"] = trace.exhausted;
  j["trials"] = trace.trials;
  j["final_periods"] = periods_json(trace.final_periods);
  j["final_deviation"] = trace.final_deviation;
  json records = json::array();
  for (const auto& r : trace.records) {
    json rec;
    rec["trial"] = r.n;
    rec["periods"] = periods_json(r.periods);
    rec["deviation"] = r.deviation ? json(*r.deviation) : json(nullptr);
    rec["decision"] = std::string(to_string(r.decision));
    rec["seed"] = r.eval_seed;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<BetaRow>& rows) {
  out << "beta,label,runs,mean_trials,sd_trials,failure_rate\n";
  for (const auto& r : rows) {
    out << format_beta(r.beta) << ',' << r.label << ',' << r.runs << ','
        << format_double(r.mean_trials) << ',' << format_double(r.sd_trials) << ','
        << format_double(r.failure_rate) << '\n';
  }
}

}  // namespace mcpg
