#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlc/metrics.hpp"
#include "tlc/road.hpp"
#include "tlc/scenario.hpp"

namespace tlc {

struct ExperimentResult {
  ControllerKind controller = ControllerKind::Dt3p;
  std::vector<MetricsFrame> frames;         // one per second of simulated time
  std::vector<DecisionRecord> decisions;
  std::vector<std::string> event_log;
  std::vector<GreenInterval> green_log;
  std::vector<DepartureRecord> departure_log;
  std::vector<std::string> violations;      // safety / conservation breaches, empty when clean
  double saturation_headway_s = 2.0;

  const MetricsFrame& final_frame() const { return frames.back(); }
  std::string decisions_text() const;
  std::string events_text() const;
  std::string frames_text() const;
};

// Runs the scenario with its configured controller.
ExperimentResult run_experiment(const ScenarioConfig& config);

// Rebuilds the arrival stream of a previous run from its event log (random
// arrivals off, every ARRIVE record scripted with its id and entry distance)
// and runs the scenario again.
ExperimentResult replay_experiment(ScenarioConfig config, const std::vector<std::string>& event_log);

// Writes frames.csv, decisions.log and events.log into `dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace tlc
