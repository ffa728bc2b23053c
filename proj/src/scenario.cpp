#include "tlc/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tlc/error.hpp"

namespace tlc {
namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError("expected an object", display_path());
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* find(std::string_view key) {
    seen_.emplace(key);
    auto it = node_.find(std::string(key));
    return it == node_.end() || it->is_null() ? nullptr : &*it;
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)); }

  double number(std::string_view key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError("expected a number", key_path(key));
    return v->get<double>();
  }

  std::optional<double> optional_number(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError("expected a number", key_path(key));
    return v->get<double>();
  }

  long long integer(std::string_view key, long long fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError("expected an integer", key_path(key));
    return v->get<long long>();
  }

  bool boolean(std::string_view key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError("expected true or false", key_path(key));
    return v->get<bool>();
  }

  std::optional<std::string> string(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError("expected a string", key_path(key));
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key", key_path(key));
    }
  }

 private:
  std::string display_path() const { return path_.empty() ? "<root>" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

int parse_direction_key(const std::string& key, const std::string& path) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
  if (ec != std::errc() || ptr != key.data() + key.size()) {
    throw ConfigError("direction keys must be integers", path);
  }
  return value;
}

std::vector<int> direction_list(const json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError("expected a list of direction indices", path);
  std::vector<int> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number_integer()) throw ConfigError("expected an integer", path + "[" + std::to_string(i) + "]");
    out.push_back(node[i].get<int>());
  }
  return out;
}

VehicleKind parse_kind(const std::optional<std::string>& text, const std::string& path, VehicleKind fallback) {
  if (!text) return fallback;
  auto kind = vehicle_kind_from_string(*text);
  if (!kind) throw ConfigError("expected CAR, AMBULANCE, FIRE or POLICE", path);
  return *kind;
}

ScriptedArrival parse_arrival(const json& node, const std::string& path, bool emergency) {
  ObjectReader r(node, path);
  ScriptedArrival a;
  a.time = r.number("time", 0.0);
  if (!r.has("direction")) throw ConfigError("missing key", r.key_path("direction"));
  a.direction = static_cast<int>(r.integer("direction", 0));
  a.kind = parse_kind(r.string("kind"), r.key_path("kind"), emergency ? VehicleKind::Ambulance : VehicleKind::Car);
  a.on_duty = r.boolean("on_duty", emergency);
  if (auto p = r.optional_number("priority")) a.priority = static_cast<int>(*p);
  a.distance_m = r.optional_number("distance_m");
  if (emergency && a.kind == VehicleKind::Car) throw ConfigError("emergencies need a special vehicle kind", r.key_path("kind"));
  r.finish();
  return a;
}

void parse_timing(const json& node, TimingConfig& t) {
  ObjectReader r(node, "timing");
  t.full_cycle_s = r.number("full_cycle", t.full_cycle_s);
  t.base_green_s = r.number("base_green", t.base_green_s);
  t.min_green_s = r.number("min_green", t.min_green_s);
  t.intergreen_s = r.number("intergreen", t.intergreen_s);
  if (auto agg = r.string("aggregation")) {
    if (*agg == "MIN") {
      t.aggregation = Aggregation::Min;
    } else if (*agg == "AVG") {
      t.aggregation = Aggregation::Avg;
    } else if (*agg == "MAX") {
      t.aggregation = Aggregation::Max;
    } else {
      throw ConfigError("expected MIN, AVG or MAX", "timing.aggregation");
    }
  }
  if (auto den = r.string("denominator")) {
    if (*den == "OWN_QUEUE") {
      t.denominator = DenominatorRule::OwnQueueIncluded;
    } else if (*den == "ADJACENT_ONLY") {
      t.denominator = DenominatorRule::AdjacentOnly;
    } else {
      throw ConfigError("expected OWN_QUEUE or ADJACENT_ONLY", "timing.denominator");
    }
  }
  r.finish();
}

void parse_weights(const json& node, LoadWeights& w) {
  ObjectReader r(node, "weights");
  w.queued = r.number("queued", w.queued);
  w.occupancy = r.number("occupancy", w.occupancy);
  w.wait = r.number("wait", w.wait);
  w.back_queue = r.number("back_queue", w.back_queue);
  w.downstream = r.number("downstream", w.downstream);
  w.emergency = r.number("emergency", w.emergency);
  if (auto cap = r.optional_number("wait_cap")) w.wait_cap_s = *cap;
  r.finish();
}

}  // namespace

double rotation_length_s(const TimingConfig& timing) {
  return 4.0 * (timing.base_green_s + timing.intergreen_s);
}

double parse_duration(std::string_view text, const TimingConfig& timing) {
  if (text == "4-cycles") return 4.0 * rotation_length_s(timing);
  if (text == "1h") return 3600.0;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0)) {
    throw ConfigError("expected positive seconds, '4-cycles' or '1h', got '" + std::string(text) + "'", "duration");
  }
  return value;
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.duration_s > 0.0)) throw ConfigError("must be positive", "duration");
  if (!(cfg.dt_s > 0.0)) throw ConfigError("must be positive", "dt");
  validate(cfg.settings.timing);
  if (!is_legal_phase(cfg.settings.initial_greens)) throw ConfigError("not a legal phase", "initial_greens");
  if (!(cfg.settings.actuated.gap_threshold_s > 0.0)) throw ConfigError("must be positive", "actuated.gap_threshold");
  if (!(cfg.settings.actuated.max_green_s >= cfg.settings.timing.min_green_s &&
        cfg.settings.actuated.max_green_s <= cfg.settings.timing.full_cycle_s)) {
    throw ConfigError("must lie in [min_green, full_cycle]", "actuated.max_green");
  }
  check_emergency_dominance(cfg.settings.weights, cfg.caps);
  validate(cfg.road);
}

ScenarioConfig builtin_paper_s4() {
  ScenarioConfig cfg;
  cfg.name = "paper-s4";
  cfg.road.initial_queues = {{1, 0}, {2, 0}, {4, 100}, {5, 100}, {7, 75}, {8, 75}, {10, 50}, {11, 50}};
  for (NodeId node : kAllNodes) cfg.road.arrivals.rates[to_direction_index(node)] = 0.1;
  cfg.duration_s = 3600.0;
  cfg.seed = 1;
  return cfg;
}

std::vector<std::string> builtin_scenario_names() { return {"paper-s4"}; }

ScenarioConfig parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  ObjectReader r(doc, "");
  if (auto base = r.string("base")) {
    if (*base != "paper-s4") throw ConfigError("unknown built-in scenario", "base");
    cfg = builtin_paper_s4();
  }
  if (auto name = r.string("name")) cfg.name = *name;

  if (auto controller = r.string("controller")) {
    auto kind = controller_kind_from_string(*controller);
    if (!kind) throw ConfigError("expected DT3P, FIXED or ACTUATED", "controller");
    cfg.controller = *kind;
  } else if (!r.has("base")) {
    cfg.warnings.push_back("controller: key missing, defaulting to DT3P");
  }

  if (const json* t = r.find("timing")) parse_timing(*t, cfg.settings.timing);
  if (const json* w = r.find("weights")) parse_weights(*w, cfg.settings.weights);
  if (const json* a = r.find("actuated")) {
    ObjectReader ar(*a, "actuated");
    cfg.settings.actuated.gap_threshold_s = ar.number("gap_threshold", cfg.settings.actuated.gap_threshold_s);
    cfg.settings.actuated.max_green_s = ar.number("max_green", cfg.settings.actuated.max_green_s);
    ar.finish();
  }
  if (const json* c = r.find("caps")) {
    ObjectReader cr(*c, "caps");
    cfg.caps.max_queue = cr.number("max_queue", cfg.caps.max_queue);
    cfg.caps.max_wait_s = cr.number("max_wait", cfg.caps.max_wait_s);
    cr.finish();
  }
  if (const json* b = r.find("belts")) {
    ObjectReader br(*b, "belts");
    auto& belts = cfg.road.belts;
    belts.estimator_spacing_m = br.number("estimator_spacing_m", belts.estimator_spacing_m);
    belts.fva_offset_m = br.number("fva_offset_m", belts.fva_offset_m);
    belts.segment_capacity = static_cast<int>(br.integer("segment_capacity", belts.segment_capacity));
    belts.vehicle_length_m = br.number("vehicle_length_m", belts.vehicle_length_m);
    br.finish();
  }
  if (const json* road = r.find("road")) {
    ObjectReader rr(*road, "road");
    cfg.road.road_length_m = rr.number("length_m", cfg.road.road_length_m);
    cfg.road.free_speed_mps = rr.number("free_speed_mps", cfg.road.free_speed_mps);
    cfg.road.saturation_headway_s = rr.number("saturation_headway_s", cfg.road.saturation_headway_s);
    rr.finish();
  }

  if (const json* q = r.find("initial_queues")) {
    if (!q->is_object()) throw ConfigError("expected an object keyed by direction index", "initial_queues");
    for (const auto& [key, value] : q->items()) {
      const std::string path = "initial_queues." + key;
      if (!value.is_number_integer()) throw ConfigError("expected an integer", path);
      cfg.road.initial_queues[parse_direction_key(key, path)] = value.get<int>();
    }
  }
  if (auto rate = r.optional_number("default_arrival_rate")) {
    for (NodeId node : kAllNodes) cfg.road.arrivals.rates[to_direction_index(node)] = *rate;
  }
  if (const json* rates = r.find("arrival_rates")) {
    if (!rates->is_object()) throw ConfigError("expected an object keyed by direction index", "arrival_rates");
    for (const auto& [key, value] : rates->items()) {
      const std::string path = "arrival_rates." + key;
      if (!value.is_number()) throw ConfigError("expected a number", path);
      cfg.road.arrivals.rates[parse_direction_key(key, path)] = value.get<double>();
    }
  }
  cfg.road.arrivals.random = r.boolean("random_arrivals", cfg.road.arrivals.random);
  if (const json* list = r.find("scripted_arrivals")) {
    if (!list->is_array()) throw ConfigError("expected a list", "scripted_arrivals");
    for (std::size_t i = 0; i < list->size(); ++i) {
      cfg.road.arrivals.scripted.push_back(
          parse_arrival((*list)[i], "scripted_arrivals[" + std::to_string(i) + "]", false));
    }
  }
  if (const json* list = r.find("emergencies")) {
    if (!list->is_array()) throw ConfigError("expected a list", "emergencies");
    for (std::size_t i = 0; i < list->size(); ++i) {
      cfg.road.arrivals.scripted.push_back(parse_arrival((*list)[i], "emergencies[" + std::to_string(i) + "]", true));
    }
  }
  std::stable_sort(cfg.road.arrivals.scripted.begin(), cfg.road.arrivals.scripted.end(),
                   [](const ScriptedArrival& a, const ScriptedArrival& b) { return a.time < b.time; });
  if (const json* links = r.find("links")) {
    if (!links->is_object()) throw ConfigError("expected an object keyed by direction index", "links");
    for (const auto& [key, value] : links->items()) {
      const std::string path = "links." + key;
      ObjectReader lr(value, path);
      LaneLink link;
      if (const json* back = lr.find("back")) link.back = direction_list(*back, path + ".back");
      if (const json* next = lr.find("next")) link.next = direction_list(*next, path + ".next");
      lr.finish();
      cfg.road.links[parse_direction_key(key, path)] = std::move(link);
    }
  }
  cfg.road.message_delay_s = r.number("message_delay_s", cfg.road.message_delay_s);

  if (auto greens = r.string("initial_greens")) {
    auto pair = NodePair::parse(*greens);
    if (!pair) throw ConfigError("expected two distinct node letters", "initial_greens");
    cfg.settings.initial_greens = *pair;
  }
  if (const json* d = r.find("duration")) {
    if (d->is_number()) {
      cfg.duration_s = d->get<double>();
    } else if (d->is_string()) {
      cfg.duration_s = parse_duration(d->get<std::string>(), cfg.settings.timing);
    } else {
      throw ConfigError("expected seconds or a preset name", "duration");
    }
  }
  cfg.dt_s = r.number("dt", cfg.dt_s);
  if (const json* s = r.find("seed")) {
    if (!s->is_number_unsigned()) throw ConfigError("expected a nonnegative integer", "seed");
    cfg.seed = s->get<std::uint64_t>();
  }
  if (auto out = r.string("out_dir")) cfg.out_dir = *out;
  r.finish();

  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  if (path == "paper-s4") {
    auto cfg = builtin_paper_s4();
    validate(cfg);
    return cfg;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace tlc
