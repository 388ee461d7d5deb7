// mcpg: command-line front end for the CPG, gait, plant and learner modules.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcpg/error.hpp"
#include "mcpg/experiments.hpp"
#include "mcpg/kvconfig.hpp"

namespace {

using namespace mcpg;

struct Options {
  std::string morphology = "hexapod";
  std::string disable;
  std::string periods;
  int period = 4;
  int steps = 0;
  std::string init;
  std::string law = "orbit";
  std::string beta = "0.5";
  double e_req = 8.0;
  int max_trials = 200;
  std::string betas = "0,0.5,10";
  int runs = 50;
  int repeats = 10;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  std::string config;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_beta(const std::string& text) {
  if (text == "inf" || text == "infinity") return kStrictGreedy;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad beta '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

PeriodMap parse_periods(const std::string& text, Morphology m) {
  PeriodMap out;
  if (text.empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("bad period assignment '" + item + "'");
    const auto leg = parse_leg(item.substr(0, eq));
    if (!leg || !has_leg(m, *leg)) throw UsageError("unknown leg in '" + item + "'");
    try {
      out[*leg] = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad period in '" + item + "'");
    }
  }
  return out;
}

ExperimentSpec build_spec(Command command, const Options& o) {
  ExperimentSpec spec;
  spec.command = command;
  const auto morphology = parse_morphology(o.morphology);
  if (!morphology) throw UsageError("unknown morphology '" + o.morphology + "'");
  spec.morphology = *morphology;
  if (!o.config.empty()) {
    spec.plant = PlantConfig::from_kv([&] {
      KvConfig kv = KvConfig::load(o.config);
      kv.require_known(PlantConfig::kv_keys());
      if (!kv.contains("morphology")) kv.set("morphology", std::string(to_string(spec.morphology)));
      return kv;
    }());
    if (spec.plant.morphology != spec.morphology) {
      throw UsageError("config file is for a " + std::string(to_string(spec.plant.morphology)));
    }
    spec.plant_config_path = o.config;
  } else {
    spec.plant = PlantConfig::defaults(spec.morphology);
  }
  if (!o.disable.empty()) spec.disabled = parse_leg_list(o.disable, spec.morphology);
  spec.periods = parse_periods(o.periods, spec.morphology);
  spec.period = o.period;
  spec.steps = o.steps;
  if (!o.init.empty()) {
    const auto parts = split(o.init, ',');
    if (parts.size() != 2) throw UsageError("--init expects x1,x2");
    try {
      spec.init = CpgState{std::stod(parts[0]), std::stod(parts[1]), 0};
    } catch (const std::exception&) {
      throw UsageError("bad --init '" + o.init + "'");
    }
  }
  if (o.law == "orbit") {
    spec.law = ControlLaw::kOrbitReferenced;
  } else if (o.law == "delayed") {
    spec.law = ControlLaw::kDelayedFeedback;
  } else {
    throw UsageError("--law must be orbit or delayed");
  }
  spec.learner.beta = parse_beta(o.beta);
  spec.learner.e_req = o.e_req;
  spec.learner.max_trials = o.max_trials;
  spec.learner.seed = o.seed;
  spec.learner.validate();
  spec.betas.clear();
  for (const auto& b : split(o.betas, ',')) spec.betas.push_back(parse_beta(b));
  spec.runs = o.runs;
  spec.repeats = o.repeats;
  spec.seed = o.seed;
  if (!o.format.empty()) {
    spec.format = parse_format(o.format);
    if (!spec.format) throw UsageError("unknown format '" + o.format + "'");
  }
  spec.out_dir = o.out.empty() ? default_out_dir(spec) : std::filesystem::path(o.out);
  return spec;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return "usage";
  if (dynamic_cast<const UnsupportedPeriod*>(&e)) return "unsupported_period";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
  if (dynamic_cast<const OrbitNotFound*>(&e)) return "orbit_not_found";
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return "io";
  return "runtime";
}

int report_error(const std::string& command, const std::string& kind, const std::string& what) {
  nlohmann::json j;
  j["error"] = kind;
  j["message"] = what;
  if (!command.empty()) j["command"] = command;
  std::cerr << j.dump() << '\n';
  return kind == "usage" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple chaotic CPGs: traces, gaits and leg-period learning"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--morphology", o.morphology, "hexapod or quadruped")
        ->check(CLI::IsMember({"hexapod", "quadruped"}));
    sub->add_option("--seed", o.seed, "experiment seed");
    sub->add_option("--out", o.out, "output directory (default: $MCPG_OUT_ROOT/<command>-<hash>-s<seed>)");
    sub->add_option("--format", o.format, "csv, json, svg or ascii")
        ->check(CLI::IsMember({"csv", "json", "svg", "ascii"}));
    sub->add_option("--config", o.config, "plant config file (key = value)")->check(CLI::ExistingFile);
  };
  auto learner_flags = [&](CLI::App* sub) {
    sub->add_option("--e-req", o.e_req, "required |deviation|, degrees");
    sub->add_option("--max-trials", o.max_trials, "cap on evaluated trials");
  };

  auto* run_cpg = app.add_subcommand("run-cpg", "controlled CPG trajectory (network with --periods)");
  common(run_cpg);
  run_cpg->add_option("--period", o.period, "target period");
  run_cpg->add_option("--periods", o.periods, "per-leg periods, e.g. R1=5,R2=6");
  run_cpg->add_option("--disable", o.disable, "legs left out of the network trace");
  run_cpg->add_option("--steps", o.steps, "steps (default 2000)");
  run_cpg->add_option("--init", o.init, "initial state x1,x2");
  run_cpg->add_option("--law", o.law, "orbit or delayed")->check(CLI::IsMember({"orbit", "delayed"}));

  auto* gait = app.add_subcommand("gait", "gait diagram for a period assignment");
  common(gait);
  gait->add_option("--period", o.period, "period for every leg");
  gait->add_option("--periods", o.periods, "per-leg overrides, e.g. R2=5,L2=6");
  gait->add_option("--disable", o.disable, "legs to leave out");
  gait->add_option("--steps", o.steps, "diagram length in steps");

  auto* learn = app.add_subcommand("learn", "one simulated-annealing run");
  common(learn);
  learn->add_option("--disable", o.disable, "disabled legs, e.g. R1,L2");
  learn->add_option("--beta", o.beta, "annealing factor (inf = strict greedy)");
  learner_flags(learn);

  auto* battery = app.add_subcommand("battery", "every scenario of the battery, repeated");
  common(battery);
  battery->add_option("--beta", o.beta, "annealing factor");
  battery->add_option("--repeats", o.repeats, "runs per scenario")->check(CLI::PositiveNumber);
  learner_flags(battery);

  auto* sweep = app.add_subcommand("sweep-beta", "trials needed versus beta");
  common(sweep);
  sweep->add_option("--disable", o.disable, "disabled legs");
  sweep->add_option("--betas", o.betas, "comma separated beta values");
  sweep->add_option("--runs", o.runs, "runs per beta")->check(CLI::PositiveNumber);
  learner_flags(sweep);

  auto* lyap = app.add_subcommand("lyapunov", "largest Lyapunov exponent of the free map");
  common(lyap);
  lyap->add_option("--steps", o.steps, "iterates (default 100000)");
  lyap->add_option("--init", o.init, "initial state x1,x2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("", "usage", e.what());
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    const ExperimentSpec spec = build_spec(*parse_command(name), o);
    const auto files = run_command(spec);
    std::cout << spec.out_dir.string() << '\n';
    for (const auto& f : files) std::cout << "  " << f << '\n';
    return 0;
  } catch (const std::exception& e) {
    return report_error(name, error_kind(e), e.what());
  }
}
