#include "tlc/experiment.hpp"

#include <cmath>
#include <fstream>

#include "tlc/error.hpp"
#include "tlc/messaging.hpp"

namespace tlc {
namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& line : lines) {
    text += line;
    text += '\n';
  }
  return text;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string ExperimentResult::decisions_text() const {
  std::string text;
  for (const auto& d : decisions) {
    text += format_decision(d);
    text += '\n';
  }
  return text;
}

std::string ExperimentResult::events_text() const { return join_lines(event_log); }

std::string ExperimentResult::frames_text() const { return frames_to_csv(frames); }

ExperimentResult run_experiment(const ScenarioConfig& config) {
  validate(config);
  World world(config.road, config.seed);
  auto controller = make_controller(config.controller, config.settings);

  ExperimentResult result;
  result.controller = config.controller;
  result.saturation_headway_s = config.road.saturation_headway_s;
  const long ticks = std::lround(config.duration_s / config.dt_s);
  const long ticks_per_frame = std::max(1L, std::lround(1.0 / config.dt_s));
  result.frames.reserve(static_cast<std::size_t>(ticks / ticks_per_frame + 1));
  result.frames.push_back(capture_frame(world));
  for (long i = 1; i <= ticks; ++i) {
    world.step(*controller, config.dt_s);
    if (i % ticks_per_frame == 0 || i == ticks) result.frames.push_back(capture_frame(world));
  }

  result.decisions = world.decisions();
  result.event_log = world.event_log();
  result.green_log = world.green_log();
  result.departure_log = world.departure_log();
  result.violations = world.violations();
  for (const auto& d : result.decisions) {
    const auto& t = config.settings.timing;
    const double g = d.decision.plan.green_s;
    if (g < t.min_green_s - 1e-9 || g > t.full_cycle_s + 1e-9) {
      result.violations.push_back("t=" + format_number(d.time) + " phase time " + format_number(g) +
                                  " outside [min_green, full_cycle]");
    }
  }
  return result;
}

ExperimentResult replay_experiment(ScenarioConfig config, const std::vector<std::string>& event_log) {
  config.road.arrivals.random = false;
  config.road.arrivals.scripted.clear();
  for (const auto& line : event_log) {
    if (line.empty()) continue;
    const auto rec = LogRecord::parse(line);
    if (rec.get("ev") != "ARRIVE") continue;
    ScriptedArrival a;
    a.time = rec.get_double("t");
    a.direction = static_cast<int>(rec.get_int("dir"));
    auto kind = vehicle_kind_from_string(rec.get("kind"));
    if (!kind) throw ConfigError("unknown vehicle kind " + rec.get("kind"), "events.log");
    a.kind = *kind;
    a.priority = static_cast<int>(rec.get_int("prio"));
    a.on_duty = rec.get_int("duty") != 0;
    a.distance_m = rec.get_double("dist");
    a.id = static_cast<std::uint64_t>(rec.get_int("id"));
    config.road.arrivals.scripted.push_back(a);
  }
  return run_experiment(config);
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "frames.csv", result.frames_text());
  write_file(dir / "decisions.log", result.decisions_text());
  write_file(dir / "events.log", result.events_text());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace tlc
