// tlcsim: run, replay and compare signal-controller experiments.
//
// Exit codes: 0 success, 1 usage, 2 scenario/validation error, 3 runtime
// failure, 4 replay mismatch.

#include <cstdio>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlc/error.hpp"
#include "tlc/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kRuntime = 3, kMismatch = 4 };

struct CommonOptions {
  std::string scenario = "paper-s4";
  std::optional<std::string> controller;
  std::optional<std::string> duration;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_controller) {
  cmd->add_option("--scenario", o.scenario, "Scenario JSON file or built-in name (paper-s4)");
  if (with_controller) cmd->add_option("--controller", o.controller, "DT3P, FIXED or ACTUATED");
  cmd->add_option("--duration", o.duration, "Seconds, '4-cycles' or '1h'");
  cmd->add_option("--seed", o.seed, "Random seed for arrivals");
  cmd->add_option("--out-dir", o.out_dir, "Directory for frames.csv, decisions.log, events.log");
}

tlc::ScenarioConfig resolve(const CommonOptions& o) {
  auto cfg = tlc::load_scenario(o.scenario);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  if (o.controller) {
    auto kind = tlc::controller_kind_from_string(*o.controller);
    if (!kind) throw tlc::ConfigError("expected DT3P, FIXED or ACTUATED", "--controller");
    cfg.controller = *kind;
  }
  if (o.duration) cfg.duration_s = tlc::parse_duration(*o.duration, cfg.settings.timing);
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  tlc::validate(cfg);
  return cfg;
}

void print_summary_header() {
  std::cout << std::left << std::setw(10) << "controller" << std::right << std::setw(10) << "time_s"
            << std::setw(12) << "mean_queue" << std::setw(10) << "stddev" << std::setw(8) << "spread"
            << std::setw(13) << "utilization" << std::setw(11) << "decisions" << '\n';
}

void print_summary(const tlc::ExperimentResult& r) {
  const auto& f = r.final_frame();
  std::cout << std::left << std::setw(10) << tlc::to_string(r.controller) << std::right << std::fixed
            << std::setprecision(0) << std::setw(10) << f.time_s << std::setprecision(2) << std::setw(12)
            << f.mean_queue << std::setw(10) << tlc::population_stddev(f.queue) << std::setw(8)
            << tlc::spread(f.queue) << std::setprecision(4) << std::setw(13) << f.utilization << std::setw(11)
            << r.decisions.size() << '\n';
  for (const auto& v : r.violations) std::cerr << "violation: " << v << '\n';
}

int cmd_run(const CommonOptions& o) {
  const auto cfg = resolve(o);
  const auto result = tlc::run_experiment(cfg);
  tlc::write_outputs(result, cfg.out_dir);
  print_summary_header();
  print_summary(result);
  std::cout << "wrote " << cfg.out_dir.string() << "/{frames.csv,decisions.log,events.log}\n";
  return result.violations.empty() ? kOk : kRuntime;
}

int cmd_replay(const CommonOptions& o, const std::string& events_path, const std::optional<std::string>& decisions) {
  const auto cfg = resolve(o);
  const auto result = tlc::replay_experiment(cfg, tlc::read_lines(events_path));
  tlc::write_outputs(result, cfg.out_dir);
  print_summary_header();
  print_summary(result);
  if (decisions) {
    std::string expected;
    for (const auto& line : tlc::read_lines(*decisions)) expected += line + '\n';
    if (expected != result.decisions_text()) {
      std::cerr << "replay mismatch: decisions differ from " << *decisions << '\n';
      return kMismatch;
    }
    std::cout << "replay matches " << *decisions << '\n';
  }
  return kOk;
}

int cmd_compare(const CommonOptions& o) {
  const auto base = resolve(o);
  std::vector<std::future<tlc::ExperimentResult>> runs;
  for (auto kind : {tlc::ControllerKind::Dt3p, tlc::ControllerKind::Fixed, tlc::ControllerKind::Actuated}) {
    auto cfg = base;
    cfg.controller = kind;
    runs.push_back(std::async(std::launch::async, [cfg] { return tlc::run_experiment(cfg); }));
  }
  print_summary_header();
  int code = kOk;
  for (auto& run : runs) {
    const auto result = run.get();
    tlc::write_outputs(result, base.out_dir / std::string(tlc::to_string(result.controller)));
    print_summary(result);
    if (!result.violations.empty()) code = kRuntime;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signalized-intersection simulator with a self-organizing phase planner"};
  app.require_subcommand(1);

  CommonOptions run_opts, replay_opts, compare_opts;
  auto* run = app.add_subcommand("run", "Run one scenario and write its outputs");
  add_common(run, run_opts, true);

  std::string events_path;
  std::optional<std::string> decisions_path;
  auto* replay = app.add_subcommand("replay", "Re-run a scenario from a recorded events.log");
  add_common(replay, replay_opts, true);
  replay->add_option("--events", events_path, "events.log of the original run")->required();
  replay->add_option("--decisions", decisions_path, "decisions.log to compare against byte for byte");

  auto* compare = app.add_subcommand("compare", "Run DT3P, FIXED and ACTUATED on the same scenario");
  add_common(compare, compare_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*replay) return cmd_replay(replay_opts, events_path, decisions_path);
    if (*compare) return cmd_compare(compare_opts);
  } catch (const tlc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
