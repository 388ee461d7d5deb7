#pragma once

// Batch experiments behind the command-line tool. Every command writes into
// one output directory: data files plus a manifest.json holding the full
// configuration, its hash and the seed.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcpg/cpg.hpp"
#include "mcpg/gait.hpp"
#include "mcpg/learner.hpp"
#include "mcpg/legs.hpp"
#include "mcpg/plant.hpp"

namespace mcpg {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { kRunCpg, kGait, kLearn, kBattery, kSweepBeta, kLyapunov };
enum class OutputFormat { kCsv, kJson, kSvg, kAscii };

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view text);
std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view text);

struct ExperimentSpec {
  Command command = Command::kLearn;
  Morphology morphology = Morphology::kHexapod;
  LegSet disabled;
  PeriodMap periods;  ///< run-cpg / gait: explicit per-leg periods
  int period = 4;     ///< run-cpg / gait: period for legs not in `periods`
  int steps = 0;      ///< 0 = command default
  CpgState init = kDefaultInit;
  ControlLaw law = ControlLaw::kOrbitReferenced;
  double lambda = 0.05;
  LearnerConfig learner{};
  PlantConfig plant{};
  std::string plant_config_path;  ///< recorded only; `plant` holds the values
  std::vector<double> betas{0.0, 0.5, kGreedyBeta};
  int runs = 50;      ///< sweep-beta
  int repeats = 10;   ///< battery
  std::uint64_t seed = 0;
  std::optional<OutputFormat> format;
  std::filesystem::path out_dir;

  /// Canonical text of every field that influences the outputs.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string config_hash() const;
};

std::uint64_t fnv1a64(std::string_view data);

/// Projected real-robot time: trials * window / 27 seconds.
double estimate_walltime(int trials, int window = 400);

/// The 21 hexapod scenarios: one representative per mirror pair of 1-, 2- and
/// 3-leg disablements, leaving out the whole-side triple.
std::vector<LegSet> enumerate_hexapod_battery();
/// R1, R2, L1, L2 individually.
std::vector<LegSet> enumerate_quadruped_battery();
std::vector<LegSet> battery_scenarios(Morphology m);

/// One disabled set per line, legs separated by commas; '#' comments.
std::vector<LegSet> parse_battery(std::istream& in, Morphology m);
void write_battery(std::ostream& out, const std::vector<LegSet>& battery);

struct BatteryRow {
  LegSet functional;
  LegSet disabled;
  /// Full controller space, disabled legs included (5^legs).
  std::uint64_t search_space = 0;
  /// Combinations the learner can actually visit (5^functional).
  std::uint64_t learnable_space = 0;
  std::optional<PeriodMap> learned;  ///< best converged repeat
  double final_deviation = 0.0;      ///< signed, of `learned`
  double mean_trials = 0.0;
  double sd_trials = 0.0;
  int repeats = 0;
  int converged = 0;
  bool flagged() const { return converged < repeats; }
};

struct BatteryReport {
  Morphology morphology = Morphology::kHexapod;
  std::uint64_t seed = 0;
  int repeats = 0;
  std::vector<BatteryRow> rows;
};

/// Runs `repeats` learning runs per scenario in parallel. When `trace_dir`
/// is non-empty each run's trace is written there as <scenario>_r<k>.csv.
BatteryReport run_battery(const PlantConfig& plant, const std::vector<LegSet>& scenarios,
                          const LearnerConfig& learner, int repeats, std::uint64_t seed,
                          const std::filesystem::path& trace_dir = {});

/// "functional,disabled,search_space,learned,final_deviation,mean_trials,sd_trials,converged,repeats,walltime_s,flag"
void write_battery_csv(std::ostream& out, const BatteryReport& report, int window = 400);

/// Command entry points. Each validates the spec, writes its files into
/// spec.out_dir (created if needed) together with manifest.json, and returns
/// the list of files written (relative to out_dir).
std::vector<std::string> cmd_run_cpg(const ExperimentSpec& spec);
std::vector<std::string> cmd_gait(const ExperimentSpec& spec);
std::vector<std::string> cmd_learn(const ExperimentSpec& spec);
BatteryReport cmd_battery(const ExperimentSpec& spec, std::vector<std::string>* files = nullptr);
std::vector<std::string> cmd_sweep_beta(const ExperimentSpec& spec);
std::vector<std::string> cmd_lyapunov(const ExperimentSpec& spec);

std::vector<std::string> run_command(const ExperimentSpec& spec);

/// Default output directory: $MCPG_OUT_ROOT (or "mcpg-out") /
/// <command>-<hash prefix>-s<seed>.
std::filesystem::path default_out_dir(const ExperimentSpec& spec);

}  // namespace mcpg
