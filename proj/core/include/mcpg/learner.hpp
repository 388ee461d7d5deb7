#pragma once

// Simulated annealing over per-leg period combinations.
//
// Start from every functional leg at period 4. Each trial changes one random
// functional leg to a random period from {4,5,6,8,9}, skipping combinations
// already tried, evaluates |dphi|, and keeps the change if it improves the
// cost or if x <= exp(-beta * dE). Stops once |dphi| < e_req.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcpg/legs.hpp"
#include "mcpg/plant.hpp"
#include "mcpg/random.hpp"

namespace mcpg {

inline constexpr std::array<int, 5> kLearnPeriods{4, 5, 6, 8, 9};
/// The finite stand-in for greedy search used in the beta comparison.
inline constexpr double kGreedyBeta = 10.0;
inline constexpr double kStrictGreedy = std::numeric_limits<double>::infinity();

struct LearnerConfig {
  double beta = 0.5;     ///< >= 0; +inf means strictly greedy
  double e_req = 8.0;    ///< degrees
  int max_trials = 200;  ///< evaluated proposals, not counting the start
  std::uint64_t seed = 0;
  bool log_duplicates = true;

  void validate() const;
};

enum class Decision { kKept, kAborted, kDuplicateSkipped, kAcceptedWorse };
enum class Outcome { kConverged, kTrialCapReached };

std::string_view to_string(Decision d);
std::string_view to_string(Outcome o);

struct TrialRecord {
  int n = 0;  ///< 0 is the initial combination
  PeriodMap periods;
  /// Signed dphi in degrees; empty for skipped duplicates.
  std::optional<double> deviation;
  Decision decision = Decision::kKept;
  std::uint64_t eval_seed = 0;
};

struct LearningTrace {
  Morphology morphology = Morphology::kHexapod;
  LegSet disabled;
  LearnerConfig config;
  PeriodMap initial;
  std::vector<TrialRecord> records;
  Outcome outcome = Outcome::kTrialCapReached;
  /// Set when the run ended because no untried neighbour was left.
  bool exhausted = false;
  int trials = 0;           ///< evaluated proposals
  PeriodMap final_periods;  ///< the kept combination at the end
  double final_deviation = 0.0;  ///< signed, of final_periods

  bool converged() const { return outcome == Outcome::kConverged; }
  int evaluations() const { return trials + 1; }
};

/// Signed deviation of a scenario; `seed` feeds the plant noise.
using Evaluator = std::function<double(const Scenario&, std::uint64_t seed)>;

Evaluator plant_evaluator(PlantConfig cfg);

/// Size of the full search space, 5^|functional|.
std::uint64_t search_space_size(std::size_t functional_legs);

/// One random functional leg set to one random learn period, redrawn until the
/// combination is not in `history`. Redrawn candidates are appended to
/// `skipped` when given. Throws Exhausted when every single-leg change of
/// `current` has been tried, and InvalidArgument when `functional` is empty.
PeriodMap propose(const PeriodMap& current, const std::set<PeriodMap>& history,
                  const LegSet& functional, Rng& rng, std::vector<PeriodMap>* skipped = nullptr);

/// delta_e < 0, or x <= exp(-beta * delta_e). Strict greedy (beta = +inf)
/// accepts improvements only.
bool accept(double delta_e, double beta, double x);

/// exp(-beta * delta_e) clamped to [0, 1].
double acceptance_probability(double delta_e, double beta);

LearningTrace learn(const Evaluator& evaluate, Morphology m, const LegSet& disabled,
                    const LearnerConfig& cfg);
LearningTrace learn(const PlantConfig& plant, const LegSet& disabled, const LearnerConfig& cfg);

struct BetaRow {
  double beta = 0.0;
  std::string label;  ///< random_permutation, annealing or greedy
  int runs = 0;
  double mean_trials = 0.0;
  double sd_trials = 0.0;
  double failure_rate = 0.0;
};

/// Runs `learn` `runs` times per beta with seeds derive_seed(seed, run); the
/// same seeds are used for every beta. Runs execute in parallel.
std::vector<BetaRow> sweep_beta(const Evaluator& evaluate, Morphology m, const LegSet& disabled,
                                const std::vector<double>& betas, int runs, std::uint64_t seed,
                                LearnerConfig base = {});

/// "trial,R1,...,L3,deviation,abs_deviation,decision,seed"; disabled legs "x".
void write_trace_csv(std::ostream& out, const LearningTrace& trace);
std::string trace_to_json(const LearningTrace& trace);
/// "beta,label,runs,mean_trials,sd_trials,failure_rate".
void write_sweep_csv(std::ostream& out, const std::vector<BetaRow>& rows);

/// Formats beta, spelling +inf as "inf".
std::string format_beta(double beta);

}  // namespace mcpg
