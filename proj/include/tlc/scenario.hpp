#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tlc/controller.hpp"
#include "tlc/load.hpp"
#include "tlc/road.hpp"

namespace tlc {

struct ScenarioConfig {
  std::string name = "custom";
  ControllerKind controller = ControllerKind::Dt3p;
  ControllerSettings settings;
  LoadCaps caps;
  RoadConfig road;
  double duration_s = 3600.0;
  double dt_s = 1.0;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  std::vector<std::string> warnings;  // non-fatal notes gathered while loading
};

// Length of one fixed-time rotation: four phases of base green plus clearance.
double rotation_length_s(const TimingConfig& timing);

// Accepts seconds ("3600", "90.5") or the presets "4-cycles" and "1h".
// Throws ConfigError on anything else.
double parse_duration(std::string_view text, const TimingConfig& timing);

// Full validation, including emergency-weight dominance. Throws ConfigError.
void validate(const ScenarioConfig& cfg);

// Post-emergency starting point: 0,0,100,100,75,75,50,50 queued on
// directions 1,2,4,5,7,8,10,11 with AB just served.
ScenarioConfig builtin_paper_s4();

std::vector<std::string> builtin_scenario_names();

// Parses JSON scenario text. Unknown keys, wrong types and range errors
// raise ConfigError naming the key path.
ScenarioConfig parse_scenario(std::string_view json_text);

// `path` is either a built-in scenario name or a JSON file.
ScenarioConfig load_scenario(const std::string& path);

}  // namespace tlc
