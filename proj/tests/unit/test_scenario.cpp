#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tlc/error.hpp"
#include "tlc/experiment.hpp"

using namespace tlc;

namespace {

const std::filesystem::path kSource = TLC_SOURCE_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error_path(const std::string& json) {
  try {
    parse_scenario(json);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("built-in post-emergency scenario") {
  const auto cfg = load_scenario("paper-s4");
  const std::map<int, int> expected = {{1, 0}, {2, 0}, {4, 100}, {5, 100}, {7, 75}, {8, 75}, {10, 50}, {11, 50}};
  CHECK(cfg.road.initial_queues == expected);
  CHECK(cfg.duration_s == 3600.0);
  CHECK(cfg.controller == ControllerKind::Dt3p);
  CHECK(cfg.settings.initial_greens.to_string() == "AB");
  CHECK(builtin_scenario_names() == std::vector<std::string>{"paper-s4"});
}

TEST_CASE("scenario files report the offending key") {
  CHECK(config_error_path(R"({"controller":"DT3P","initial_queues":{"4":-5}})") == "initial_queues.4");
  CHECK(config_error_path(R"({"controller":"DT3P","initial_queues":{"3":5}})") == "initial_queues.3");
  CHECK(config_error_path(R"({"controller":"DT3P","timing":{"min_green":0}})") == "timing.min_green");
  CHECK(config_error_path(R"({"controller":"DT3P","timing":{"colour":1}})") == "timing.colour");
  CHECK(config_error_path(R"({"controller":"SCATS"})") == "controller");
  CHECK(config_error_path(R"({"controller":"DT3P","weights":{"emergency":10}})") == "weights.emergency");
  CHECK(config_error_path(R"({"controller":"DT3P","duration":"3-days"})") == "duration");
  CHECK(config_error_path(R"({"controller":"DT3P","emergencies":[{"time":1,"direction":7,"kind":"CAR"}]})") ==
        "emergencies[0].kind");
  CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
}

TEST_CASE("missing controller key warns and defaults") {
  const auto cfg = parse_scenario(R"({"initial_queues":{"4":3}})");
  CHECK(cfg.controller == ControllerKind::Dt3p);
  REQUIRE(cfg.warnings.size() == 1);
  CHECK(cfg.warnings[0].find("controller") != std::string::npos);
}

TEST_CASE("durations") {
  const TimingConfig t;
  CHECK(rotation_length_s(t) == 132.0);
  CHECK(parse_duration("4-cycles", t) == 528.0);
  CHECK(parse_duration("1h", t) == 3600.0);
  CHECK(parse_duration("90.5", t) == 90.5);
  CHECK_THROWS_AS(parse_duration("-3", t), ConfigError);
  CHECK_THROWS_AS(parse_duration("soon", t), ConfigError);
}

TEST_CASE("utilization counts departures per granted slot") {
  using enum NodeId;
  const std::vector<GreenInterval> greens = {{C, 0.0, 10.0}};
  std::vector<DepartureRecord> busy, half;
  for (int i = 0; i < 5; ++i) busy.push_back({C, 2.0 * i + 1.0, static_cast<std::uint64_t>(i)});
  for (int i = 0; i < 5; i += 2) half.push_back({C, 2.0 * i + 1.0, static_cast<std::uint64_t>(i)});
  CHECK(utilization(greens, busy, 2.0) == 1.0);
  CHECK(utilization(greens, {}, 2.0) == 0.0);
  CHECK(utilization(greens, half, 2.0) == doctest::Approx(0.6));
  const std::vector<GreenInterval> two = {{C, 0.0, 10.0}, {D, 0.0, 10.0}};
  CHECK(utilization(two, busy, 2.0) == doctest::Approx(0.5));
  CHECK(utilization({}, busy, 2.0) == 0.0);
}

TEST_CASE("spread statistics") {
  const std::array<int, 8> q = {0, 0, 100, 100, 75, 75, 50, 50};
  CHECK(spread(q) == 100);
  CHECK(population_stddev(q) == doctest::Approx(std::sqrt(1367.1875)));
}

TEST_CASE("frames round-trip through CSV and conserve vehicles") {
  auto cfg = builtin_paper_s4();
  cfg.duration_s = 600.0;
  const auto r = run_experiment(cfg);
  CHECK(r.frames.size() == 601);
  CHECK(parse_frames_csv(r.frames_text()) == r.frames);
  double last_green = 0.0;
  for (const auto& f : r.frames) {
    long queued = 0;
    double green = 0.0;
    for (int q : f.queue) queued += q;
    for (double g : f.green_s) green += g;
    CHECK(f.arrivals == f.departures + queued);
    CHECK(f.mean_queue == doctest::Approx(queued / 8.0));
    CHECK(f.utilization >= 0.0);
    CHECK(f.utilization <= 1.0);
    CHECK(green >= last_green);
    last_green = green;
  }
  CHECK(r.violations.empty());
  CHECK(r.final_frame().utilization ==
        doctest::Approx(utilization(r.green_log, r.departure_log, r.saturation_headway_s)));
  CHECK_THROWS_AS(parse_frames_csv("time,queue_A\n1,2\n"), ConfigError);
}

TEST_CASE("same seed gives byte-identical outputs") {
  auto cfg = builtin_paper_s4();
  cfg.duration_s = 900.0;
  for (auto kind : {ControllerKind::Dt3p, ControllerKind::Fixed, ControllerKind::Actuated}) {
    cfg.controller = kind;
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    CHECK(a.frames_text() == b.frames_text());
    CHECK(a.decisions_text() == b.decisions_text());
    CHECK(a.events_text() == b.events_text());
  }
}

TEST_CASE("golden logs of the scripted scenario") {
  const auto cfg = load_scenario((kSource / "tests/golden/scripted.json").string());
  const auto r = run_experiment(cfg);
  CHECK(r.events_text() == slurp(kSource / "tests/golden/scripted.events.log"));
  CHECK(r.decisions_text() == slurp(kSource / "tests/golden/scripted.decisions.log"));
}

TEST_CASE("replaying an event log reproduces the decisions") {
  auto cfg = builtin_paper_s4();
  cfg.duration_s = 1200.0;
  const auto original = run_experiment(cfg);
  const auto replayed = replay_experiment(cfg, original.event_log);
  CHECK(replayed.decisions_text() == original.decisions_text());
  CHECK(replayed.frames_text() == original.frames_text());

  const auto em = load_scenario((kSource / "scenarios/emergency-e.json").string());
  const auto a = run_experiment(em);
  CHECK(replay_experiment(em, a.event_log).decisions_text() == a.decisions_text());
}

TEST_CASE("outputs land in the requested directory") {
  const auto dir = std::filesystem::temp_directory_path() / "tlc_unit_outputs";
  std::filesystem::remove_all(dir);
  auto cfg = builtin_paper_s4();
  cfg.duration_s = 60.0;
  const auto r = run_experiment(cfg);
  write_outputs(r, dir);
  CHECK(slurp(dir / "frames.csv") == r.frames_text());
  CHECK(slurp(dir / "decisions.log") == r.decisions_text());
  CHECK(slurp(dir / "events.log") == r.events_text());
  std::filesystem::remove_all(dir);
}
