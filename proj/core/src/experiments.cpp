#include "mcpg/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mcpg/error.hpp"
#include "mcpg/network.hpp"
#include "mcpg/parallel.hpp"
#include "mcpg/random.hpp"

namespace mcpg {

namespace {

constexpr double kRobotRateHz = 27.0;

std::string law_name(ControlLaw law) {
  return law == ControlLaw::kOrbitReferenced ? "orbit_referenced" : "delayed_feedback";
}

std::string periods_text(const PeriodMap& periods) {
  std::string out;
  for (const auto& [leg, p] : periods) {
    if (!out.empty()) out += ',';
    out += std::string(to_string(leg)) + "=" + std::to_string(p);
  }
  return out;
}

nlohmann::json periods_json(const PeriodMap& periods) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [leg, p] : periods) j[std::string(to_string(leg))] = p;
  return j;
}

nlohmann::json legs_json(const LegSet& legs) {
  nlohmann::json j = nlohmann::json::array();
  for (Leg leg : legs) j.push_back(std::string(to_string(leg)));
  return j;
}

std::string stamp(const ExperimentSpec& spec) {
  return std::string("mcpg ") + kVersion + " config_hash=" + spec.config_hash() +
         " seed=" + std::to_string(spec.seed);
}

class OutputDir {
 public:
  explicit OutputDir(const ExperimentSpec& spec) : spec_(spec) {
    if (spec.out_dir.empty()) throw InvalidArgument("no output directory given");
    std::filesystem::create_directories(spec.out_dir);
  }

  void write(const std::string& name, const std::string& content) {
    const auto path = spec_.out_dir / name;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
    files_.push_back(name);
  }

  /// CSV text with the provenance line prepended.
  void write_csv(const std::string& name, const std::string& body) {
    write(name, "# " + stamp(spec_) + "\n" + body);
  }

  std::vector<std::string> finish(nlohmann::json results) {
    nlohmann::json m;
    m["tool"] = "mcpg";
    m["version"] = kVersion;
    m["command"] = std::string(to_string(spec_.command));
    m["config_hash"] = spec_.config_hash();
    m["seed"] = spec_.seed;
    nlohmann::json config = nlohmann::json::object();
    std::istringstream lines(spec_.canonical());
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find('=');
      config[line.substr(0, eq)] = line.substr(eq + 1);
    }
    m["config"] = std::move(config);
    m["plant_config_path"] = spec_.plant_config_path;
    m["files"] = files_;
    m["results"] = std::move(results);
    std::ofstream out(spec_.out_dir / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
    if (!out) throw InvalidArgument("failed writing manifest.json");
    std::vector<std::string> all = files_;
    all.push_back("manifest.json");
    return all;
  }

 private:
  const ExperimentSpec& spec_;
  std::vector<std::string> files_;
};

OutputFormat format_or(const ExperimentSpec& spec, OutputFormat fallback,
                       std::initializer_list<OutputFormat> allowed) {
  const OutputFormat f = spec.format.value_or(fallback);
  for (OutputFormat a : allowed) {
    if (a == f) return f;
  }
  throw InvalidArgument("format '" + std::string(to_string(f)) + "' is not supported by " +
                        std::string(to_string(spec.command)));
}

PeriodMap full_assignment(const ExperimentSpec& spec) {
  PeriodMap periods;
  for (Leg leg : legs_of(spec.morphology)) {
    if (!spec.disabled.count(leg)) periods[leg] = spec.period;
  }
  for (const auto& [leg, p] : spec.periods) {
    if (!has_leg(spec.morphology, leg)) {
      throw ValidationError("leg " + std::string(to_string(leg)) + " is not on a " +
                            std::string(to_string(spec.morphology)));
    }
    if (spec.disabled.count(leg)) {
      throw ValidationError("disabled leg " + std::string(to_string(leg)) + " cannot take a period");
    }
    periods[leg] = p;
  }
  return periods;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kRunCpg: return "run-cpg";
    case Command::kGait: return "gait";
    case Command::kLearn: return "learn";
    case Command::kBattery: return "battery";
    case Command::kSweepBeta: return "sweep-beta";
    case Command::kLyapunov: return "lyapunov";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
  for (Command c : {Command::kRunCpg, Command::kGait, Command::kLearn, Command::kBattery,
                    Command::kSweepBeta, Command::kLyapunov}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::kCsv: return "csv";
    case OutputFormat::kJson: return "json";
    case OutputFormat::kSvg: return "svg";
    case OutputFormat::kAscii: return "ascii";
  }
  return "unknown";
}

std::optional<OutputFormat> parse_format(std::string_view text) {
  for (OutputFormat f : {OutputFormat::kCsv, OutputFormat::kJson, OutputFormat::kSvg,
                         OutputFormat::kAscii}) {
    if (to_string(f) == text) return f;
  }
  return std::nullopt;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentSpec::canonical() const {
  std::ostringstream out;
  out << "command=" << to_string(command) << '\n';
  out << "morphology=" << to_string(morphology) << '\n';
  out << "disabled=" << format_leg_list(disabled) << '\n';
  out << "periods=" << periods_text(periods) << '\n';
  out << "period=" << period << '\n';
  out << "steps=" << steps << '\n';
  out << "init=" << format_double(init.x1) << ',' << format_double(init.x2) << '\n';
  out << "law=" << law_name(law) << '\n';
  out << "lambda=" << format_double(lambda) << '\n';
  out << "learner.beta=" << format_beta(learner.beta) << '\n';
  out << "learner.e_req=" << format_double(learner.e_req) << '\n';
  out << "learner.max_trials=" << learner.max_trials << '\n';
  const KvConfig plant_kv = plant.to_kv();
  for (const auto& [k, v] : plant_kv.entries()) out << "plant." << k << '=' << v << '\n';
  out << "betas=";
  for (std::size_t i = 0; i < betas.size(); ++i) out << (i ? "," : "") << format_beta(betas[i]);
  out << '\n';
  out << "runs=" << runs << '\n';
  out << "repeats=" << repeats << '\n';
  out << "seed=" << seed << '\n';
  out << "format=" << (format ? to_string(*format) : "default") << '\n';
  return out.str();
}

std::string ExperimentSpec::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

double estimate_walltime(int trials, int window) {
  if (trials < 0) throw InvalidArgument("trials must be >= 0");
  return trials * (window / kRobotRateHz);
}

std::vector<LegSet> enumerate_hexapod_battery() {
  std::vector<LegSet> out;
  const auto legs = legs_of(Morphology::kHexapod);
  const int n = static_cast<int>(legs.size());
  auto consider = [&](LegSet s) {
    const LegSet m = mirror(s);
    if (m < s) return;  // keep the representative that sorts first
    if (s.size() == 3) {
      const Side side = side_of(*s.begin());
      bool one_side = true;
      for (Leg leg : s) one_side = one_side && side_of(leg) == side;
      if (one_side) return;
    }
    out.push_back(std::move(s));
  };
  for (int a = 0; a < n; ++a) consider({legs[a]});
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) consider({legs[a], legs[b]});
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) consider({legs[a], legs[b], legs[c]});
    }
  }
  return out;
}

std::vector<LegSet> enumerate_quadruped_battery() {
  return {{Leg::R1}, {Leg::R2}, {Leg::L1}, {Leg::L2}};
}

std::vector<LegSet> battery_scenarios(Morphology m) {
  return m == Morphology::kHexapod ? enumerate_hexapod_battery() : enumerate_quadruped_battery();
}

std::vector<LegSet> parse_battery(std::istream& in, Morphology m) {
  std::vector<LegSet> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(parse_leg_list(std::string_view(line).substr(first, last - first + 1), m));
  }
  return out;
}

void write_battery(std::ostream& out, const std::vector<LegSet>& battery) {
  for (const auto& s : battery) out << format_leg_list(s) << '\n';
}

BatteryReport run_battery(const PlantConfig& plant, const std::vector<LegSet>& scenarios,
                          const LearnerConfig& learner, int repeats, std::uint64_t seed,
                          const std::filesystem::path& trace_dir) {
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  const Evaluator evaluate = plant_evaluator(plant);
  const auto nr = static_cast<std::size_t>(repeats);
  std::vector<LearningTrace> traces(scenarios.size() * nr);
  parallel_for(traces.size(), [&](std::size_t job) {
    LearnerConfig cfg = learner;
    cfg.seed = derive_seed(derive_seed(seed, job / nr), job % nr);
    traces[job] = learn(evaluate, plant.morphology, scenarios[job / nr], cfg);
    if (!trace_dir.empty()) {
      const Scenario s{scenarios[job / nr], {}};
      std::ofstream out(trace_dir / (scenario_label(s) + "_r" + std::to_string(job % nr) + ".csv"),
                        std::ios::binary);
      write_trace_csv(out, traces[job]);
    }
  });

  BatteryReport report;
  report.morphology = plant.morphology;
  report.seed = seed;
  report.repeats = repeats;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    BatteryRow row;
    row.disabled = scenarios[s];
    row.functional = Scenario{scenarios[s], {}}.functional(plant.morphology);
    row.search_space = search_space_size(legs_of(plant.morphology).size());
    row.learnable_space = search_space_size(row.functional.size());
    row.repeats = repeats;
    double sum = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
      const auto& t = traces[s * nr + r];
      sum += t.trials;
      if (!t.converged()) continue;
      ++row.converged;
      if (!row.learned || std::abs(t.final_deviation) < std::abs(row.final_deviation)) {
        row.learned = t.final_periods;
        row.final_deviation = t.final_deviation;
      }
    }
    row.mean_trials = sum / repeats;
    double ss = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
      const double d = traces[s * nr + r].trials - row.mean_trials;
      ss += d * d;
    }
    row.sd_trials = repeats > 1 ? std::sqrt(ss / (repeats - 1)) : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_battery_csv(std::ostream& out, const BatteryReport& report, int window) {
  out << "functional,disabled,search_space,learned,final_deviation,mean_trials,sd_trials,"
         "converged,repeats,walltime_s,flag\n";
  for (const auto& r : report.rows) {
    std::string learned;
    if (r.learned) {
      for (Leg leg : legs_of(report.morphology)) {
        auto it = r.learned->find(leg);
        learned += it == r.learned->end() ? std::string("x") : std::to_string(it->second);
      }
    }
    auto joined = [](const LegSet& legs) {
      std::string s;
      for (Leg leg : legs) s += to_string(leg);
      return s;
    };
    char nums[160];
    std::snprintf(nums, sizeof nums, "%.4f,%.2f,%.2f", r.learned ? r.final_deviation : NAN,
                  r.mean_trials, r.sd_trials);
    out << joined(r.functional) << ',' << joined(r.disabled) << ',' << r.search_space << ','
        << learned << ',' << nums << ',' << r.converged << ',' << r.repeats << ','
        << format_double(std::round(estimate_walltime(1, window) * r.mean_trials * 10.0) / 10.0)
        << ',' << (r.flagged() ? "not_all_converged" : "") << '\n';
  }
}

std::vector<std::string> cmd_run_cpg(const ExperimentSpec& spec) {
  const int steps = spec.steps > 0 ? spec.steps : 2000;
  const auto fmt = format_or(spec, OutputFormat::kCsv, {OutputFormat::kCsv, OutputFormat::kJson});
  OutputDir dir(spec);
  nlohmann::json results;

  if (spec.periods.empty() && spec.disabled.empty()) {
    const auto rows =
        run_controlled(CpgParams{}, spec.period, steps, spec.init, spec.law, spec.lambda);
    const auto x1 = x1_series(rows);
    const auto p = detect_period(x1);
    results["detected_period"] = p ? nlohmann::json(*p) : nlohmann::json(nullptr);
    results["final_mu"] = rows.back().mu;
    if (fmt == OutputFormat::kCsv) {
      std::ostringstream body;
      write_trajectory_csv(body, rows);
      dir.write_csv("trajectory.csv", body.str());
    } else {
      nlohmann::json j;
      j["config_hash"] = spec.config_hash();
      j["seed"] = spec.seed;
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) arr.push_back({r.t, r.x1, r.x2, r.c1, r.c2, r.mu});
      j["columns"] = {"t", "x1", "x2", "c1", "c2", "mu"};
      j["rows"] = std::move(arr);
      dir.write("trajectory.json", j.dump() + "\n");
    }
    return dir.finish(std::move(results));
  }

  NetworkOptions opts;
  opts.law = spec.law;
  opts.lambda = spec.lambda;
  opts.seed = spec.seed;
  opts.master_init = spec.init;
  PeriodMap periods = full_assignment(spec);
  const auto master = periods.find(kMasterLeg);
  opts.initial_period = master != periods.end() ? master->second : spec.period;
  CpgNetwork net(spec.morphology, opts);
  net.set_periods(periods);
  std::map<Leg, std::vector<double>> x1;
  std::ostringstream body;
  write_network_header(body, net);
  write_network_row(body, net);
  for (int i = 0; i < steps; ++i) {
    net.step();
    write_network_row(body, net);
    for (Leg leg : legs_of(spec.morphology)) x1[leg].push_back(net.state(leg).x1);
  }
  nlohmann::json detected = nlohmann::json::object();
  for (const auto& [leg, series] : x1) {
    const auto p = detect_period(series);
    detected[std::string(to_string(leg))] = p ? nlohmann::json(*p) : nlohmann::json(nullptr);
  }
  results["detected_period"] = std::move(detected);
  if (fmt != OutputFormat::kCsv) throw InvalidArgument("network traces are written as csv");
  dir.write_csv("network.csv", body.str());
  return dir.finish(std::move(results));
}

std::vector<std::string> cmd_gait(const ExperimentSpec& spec) {
  const auto fmt = format_or(spec, OutputFormat::kSvg,
                             {OutputFormat::kSvg, OutputFormat::kAscii, OutputFormat::kCsv});
  const PeriodMap periods = full_assignment(spec);
  int steps = spec.steps;
  if (steps <= 0) {
    std::int64_t joint = 1;
    for (const auto& [leg, p] : periods) joint = std::lcm(joint, cycle_length(p, spec.plant.gait));
    steps = static_cast<int>(std::min<std::int64_t>(std::max<std::int64_t>(2 * joint, 192), 1440));
  }
  const GaitTrace trace = gait_trace(periods, steps, spec.morphology, spec.plant.gait);
  nlohmann::json results;
  nlohmann::json classes = nlohmann::json::object();
  for (const auto& [leg, p] : periods) {
    classes[std::string(to_string(leg))] = std::string(to_string(classify_gait(p)));
  }
  results["gait"] = std::move(classes);
  results["steps"] = steps;

  OutputDir dir(spec);
  if (fmt == OutputFormat::kSvg) {
    std::string svg = render_gait(trace, RenderFormat::kSvg);
    // Provenance goes in an XML comment right after the root element opens.
    const auto pos = svg.find(">\n") + 2;
    svg.insert(pos, "<!-- " + stamp(spec) + " -->\n");
    dir.write("gait.svg", svg);
  } else if (fmt == OutputFormat::kAscii) {
    dir.write("gait.txt", "# " + stamp(spec) + "\n" + render_gait(trace, RenderFormat::kAscii));
  } else {
    std::ostringstream body;
    write_stance_csv(body, trace);
    dir.write_csv("stance.csv", body.str());
  }
  return dir.finish(std::move(results));
}

std::vector<std::string> cmd_learn(const ExperimentSpec& spec) {
  const auto fmt = format_or(spec, OutputFormat::kCsv, {OutputFormat::kCsv, OutputFormat::kJson});
  LearnerConfig cfg = spec.learner;
  cfg.seed = spec.seed;
  const LearningTrace trace = learn(spec.plant, spec.disabled, cfg);

  OutputDir dir(spec);
  if (fmt == OutputFormat::kCsv) {
    std::ostringstream body;
    write_trace_csv(body, trace);
    dir.write_csv("trace.csv", body.str());
  } else {
    auto j = nlohmann::json::parse(trace_to_json(trace));
    j["config_hash"] = spec.config_hash();
    dir.write("trace.json", j.dump(2) + "\n");
  }
  nlohmann::json results;
  results["outcome"] = std::string(to_string(trace.outcome));
  results["exhausted"] = trace.exhausted;
  results["trials"] = trace.trials;
  results["final_periods"] = periods_json(trace.final_periods);
  results["final_deviation"] = trace.final_deviation;
  results["initial_deviation"] = *trace.records.front().deviation;
  results["walltime_s"] = estimate_walltime(trace.trials, spec.plant.window);
  return dir.finish(std::move(results));
}

BatteryReport cmd_battery(const ExperimentSpec& spec, std::vector<std::string>* files) {
  const auto fmt = format_or(spec, OutputFormat::kCsv, {OutputFormat::kCsv, OutputFormat::kJson});
  if (spec.plant.morphology != spec.morphology) {
    throw ValidationError("plant config is for a " +
                          std::string(to_string(spec.plant.morphology)) + ", battery asks for a " +
                          std::string(to_string(spec.morphology)));
  }
  OutputDir dir(spec);
  const auto trace_dir = spec.out_dir / "traces";
  std::filesystem::create_directories(trace_dir);
  const auto scenarios = battery_scenarios(spec.morphology);
  BatteryReport report = run_battery(spec.plant, scenarios, spec.learner, spec.repeats, spec.seed,
                                     trace_dir);

  if (fmt == OutputFormat::kCsv) {
    std::ostringstream body;
    write_battery_csv(body, report, spec.plant.window);
    dir.write_csv("battery.csv", body.str());
  } else {
    nlohmann::json j;
    j["config_hash"] = spec.config_hash();
    j["seed"] = spec.seed;
    j["morphology"] = std::string(to_string(report.morphology));
    j["repeats"] = report.repeats;
    j["scenario_list"] = spec.morphology == Morphology::kHexapod
                             ? "symmetry-reduced reconstruction"
                             : "single-leg disablements";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
      nlohmann::json row;
      row["functional"] = legs_json(r.functional);
      row["disabled"] = legs_json(r.disabled);
      row["search_space"] = r.search_space;
      row["learnable_space"] = r.learnable_space;
      row["learned"] = r.learned ? periods_json(*r.learned) : nlohmann::json(nullptr);
      row["final_deviation"] = r.learned ? nlohmann::json(r.final_deviation) : nlohmann::json(nullptr);
      row["mean_trials"] = r.mean_trials;
      row["sd_trials"] = r.sd_trials;
      row["converged"] = r.converged;
      row["flagged"] = r.flagged();
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    dir.write("battery.json", j.dump(2) + "\n");
  }
  nlohmann::json results;
  results["rows"] = report.rows.size();
  int flagged = 0;
  for (const auto& r : report.rows) flagged += r.flagged() ? 1 : 0;
  results["flagged_rows"] = flagged;
  results["walltime_per_trial_s"] = estimate_walltime(1, spec.plant.window);
  auto written = dir.finish(std::move(results));
  if (files) *files = std::move(written);
  return report;
}

std::vector<std::string> cmd_sweep_beta(const ExperimentSpec& spec) {
  format_or(spec, OutputFormat::kCsv, {OutputFormat::kCsv});
  const auto rows = sweep_beta(plant_evaluator(spec.plant), spec.plant.morphology, spec.disabled,
                               spec.betas, spec.runs, spec.seed, spec.learner);
  OutputDir dir(spec);
  std::ostringstream body;
  write_sweep_csv(body, rows);
  dir.write_csv("sweep.csv", body.str());
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : rows) {
    results.push_back({{"beta", format_beta(r.beta)},
                       {"label", r.label},
                       {"mean_trials", r.mean_trials},
                       {"sd_trials", r.sd_trials},
                       {"failure_rate", r.failure_rate}});
  }
  return dir.finish(std::move(results));
}

std::vector<std::string> cmd_lyapunov(const ExperimentSpec& spec) {
  const auto fmt = format_or(spec, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  const int steps = spec.steps > 0 ? spec.steps : 100000;
  const double estimate = lyapunov_estimate(CpgParams{}, steps, spec.init);
  OutputDir dir(spec);
  if (fmt == OutputFormat::kCsv) {
    dir.write_csv("lyapunov.csv", "steps,x1,x2,estimate\n" + std::to_string(steps) + "," +
                                      format_double(spec.init.x1) + "," +
                                      format_double(spec.init.x2) + "," + format_double(estimate) +
                                      "\n");
  } else {
    nlohmann::json j;
    j["config_hash"] = spec.config_hash();
    j["seed"] = spec.seed;
    j["steps"] = steps;
    j["init"] = {spec.init.x1, spec.init.x2};
    j["estimate"] = estimate;
    dir.write("lyapunov.json", j.dump(2) + "\n");
  }
  return dir.finish({{"estimate", estimate}});
}

std::vector<std::string> run_command(const ExperimentSpec& spec) {
  switch (spec.command) {
    case Command::kRunCpg: return cmd_run_cpg(spec);
    case Command::kGait: return cmd_gait(spec);
    case Command::kLearn: return cmd_learn(spec);
    case Command::kBattery: {
      std::vector<std::string> files;
      cmd_battery(spec, &files);
      return files;
    }
    case Command::kSweepBeta: return cmd_sweep_beta(spec);
    case Command::kLyapunov: return cmd_lyapunov(spec);
  }
  throw InvalidArgument("unknown command");
}

std::filesystem::path default_out_dir(const ExperimentSpec& spec) {
  const char* root = std::getenv("MCPG_OUT_ROOT");
  std::filesystem::path base = root && *root ? root : "mcpg-out";
  return base / (std::string(to_string(spec.command)) + "-" + spec.config_hash().substr(0, 8) +
                 "-s" + std::to_string(spec.seed));
}

}  // namespace mcpg
