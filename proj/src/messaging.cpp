#include "tlc/messaging.hpp"

#include <algorithm>
#include <charconv>
#include <iostream>
#include <tuple>

#include "tlc/intersection.hpp"

namespace tlc {

std::string_view to_string(BeltKind kind) {
  switch (kind) {
    case BeltKind::LoadAdder: return "LOAD_ADDER";
    case BeltKind::LoadSubtractor: return "LOAD_SUBTRACTOR";
    case BeltKind::FvaConfirm: return "FVA_CONFIRM";
    case BeltKind::LoadEstimator: return "LOAD_ESTIMATOR";
  }
  return "?";
}

std::optional<BeltKind> belt_kind_from_string(std::string_view text) {
  for (auto kind : {BeltKind::LoadAdder, BeltKind::LoadSubtractor, BeltKind::FvaConfirm, BeltKind::LoadEstimator}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<VehicleReport> RoadsideUnit::handshake(const VehicleRecord& vehicle, int direction, double now) {
  if (!seen_.emplace(direction, vehicle.id).second) {
    ++dropped_;
    std::clog << "rse: duplicate report from vehicle " << vehicle.id << " on direction " << direction
              << " dropped\n";
    return std::nullopt;
  }
  return VehicleReport{vehicle.id, vehicle.kind, vehicle.priority, vehicle.on_duty, direction, now};
}

RoadMatrix deliver_matrix(std::span<const RoadStatusReport> reports) {
  if (reports.size() != kNodeCount) {
    throw DeliveryError("expected " + std::to_string(kNodeCount) + " road status reports, got " +
                        std::to_string(reports.size()));
  }
  RoadMatrix matrix;
  for (const auto& report : reports) {
    auto node = node_from_direction(report.direction);
    if (!node) throw DeliveryError("direction " + std::to_string(report.direction) + " is not signalized");
    if (report.timestamp != reports.front().timestamp) throw DeliveryError("reports carry different timestamps");
    if (!matrix.emplace(*node, report.state).second) {
      throw DeliveryError("duplicate report for direction " + std::to_string(report.direction));
    }
  }
  return matrix;
}

int dispatch_rank(const Message& message) {
  if (const auto* report = std::get_if<VehicleReport>(&message)) return report->on_duty ? 0 : 1;
  if (std::holds_alternative<BeltEvent>(message)) return 2;
  return 3;
}

namespace {

std::tuple<int, double, int, std::uint64_t> dispatch_key(const Message& m) {
  return std::visit(
      [&](const auto& msg) -> std::tuple<int, double, int, std::uint64_t> {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, VehicleReport>) {
          return {dispatch_rank(m), msg.timestamp, msg.direction, msg.vehicle_id};
        } else if constexpr (std::is_same_v<T, BeltEvent>) {
          return {dispatch_rank(m), msg.timestamp, msg.direction, msg.vehicle_id};
        } else {
          return {dispatch_rank(m), msg.timestamp, msg.direction, 0};
        }
      },
      m);
}

double timestamp_of(const Message& m) {
  return std::visit([](const auto& msg) { return msg.timestamp; }, m);
}

}  // namespace

void EventBus::publish(Message message) { queue_.push_back(std::move(message)); }

std::vector<Message> EventBus::drain(double now) {
  std::vector<Message> ready;
  std::vector<Message> later;
  for (auto& m : queue_) {
    (timestamp_of(m) + delay_s_ <= now + 1e-9 ? ready : later).push_back(std::move(m));
  }
  queue_ = std::move(later);
  std::stable_sort(ready.begin(), ready.end(),
                   [](const Message& a, const Message& b) { return dispatch_key(a) < dispatch_key(b); });
  return ready;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

LogRecord& LogRecord::add(std::string key, std::string value) {
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

LogRecord& LogRecord::add(std::string key, double value) { return add(std::move(key), format_number(value)); }

LogRecord& LogRecord::add(std::string key, long long value) {
  return add(std::move(key), std::to_string(value));
}

std::string LogRecord::to_line() const {
  std::string line;
  for (const auto& [key, value] : fields_) {
    if (!line.empty()) line += ' ';
    line += key;
    line += '=';
    line += value;
  }
  return line;
}

LogRecord LogRecord::parse(std::string_view line) {
  LogRecord record;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size()) break;
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    auto token = line.substr(pos, end - pos);
    auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ConfigError("malformed log field '" + std::string(token) + "'", "log");
    }
    record.add(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
    pos = end;
  }
  return record;
}

const std::string* LogRecord::find(std::string_view key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& LogRecord::get(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw ConfigError("missing field '" + std::string(key) + "' in log record", "log");
}

double LogRecord::get_double(std::string_view key) const {
  const auto& text = get(key);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("field '" + std::string(key) + "' is not a number: " + text, "log");
  }
  return value;
}

long long LogRecord::get_int(std::string_view key) const {
  const auto& text = get(key);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("field '" + std::string(key) + "' is not an integer: " + text, "log");
  }
  return value;
}

LogRecord to_record(const VehicleReport& r) {
  LogRecord rec;
  rec.add("t", r.timestamp)
      .add("ev", std::string("REPORT"))
      .add("dir", r.direction)
      .add("id", r.vehicle_id)
      .add("kind", std::string(to_string(r.kind)))
      .add("prio", r.priority)
      .add("duty", r.on_duty);
  return rec;
}

LogRecord to_record(const BeltEvent& e) {
  LogRecord rec;
  rec.add("t", e.timestamp)
      .add("ev", std::string("BELT"))
      .add("belt", std::string(to_string(e.kind)))
      .add("dir", e.direction)
      .add("id", e.vehicle_id)
      .add("payload", static_cast<long long>(e.payload));
  return rec;
}

LogRecord to_record(const RoadStatusReport& r) {
  const auto& s = r.state;
  LogRecord rec;
  rec.add("t", r.timestamp)
      .add("ev", std::string("STATUS"))
      .add("dir", r.direction)
      .add("q", s.queued)
      .add("fva", s.first_confirmed)
      .add("occ", s.occupancy)
      .add("wait", s.first_wait_s)
      .add("prio", s.priority)
      .add("duty", s.on_duty)
      .add("nqb", s.back_queue)
      .add("tnn", s.downstream_count);
  return rec;
}

LogRecord to_record(const Message& message) {
  return std::visit([](const auto& m) { return to_record(m); }, message);
}

std::optional<Message> message_from_record(const LogRecord& rec) {
  const auto& ev = rec.get("ev");
  if (ev == "REPORT") {
    auto kind = vehicle_kind_from_string(rec.get("kind"));
    if (!kind) throw ConfigError("unknown vehicle kind " + rec.get("kind"), "log");
    return VehicleReport{static_cast<std::uint64_t>(rec.get_int("id")), *kind, static_cast<int>(rec.get_int("prio")),
                         rec.get_int("duty") != 0, static_cast<int>(rec.get_int("dir")), rec.get_double("t")};
  }
  if (ev == "BELT") {
    auto kind = belt_kind_from_string(rec.get("belt"));
    if (!kind) throw ConfigError("unknown belt kind " + rec.get("belt"), "log");
    return BeltEvent{*kind, static_cast<int>(rec.get_int("dir")), static_cast<long>(rec.get_int("payload")),
                     rec.get_double("t"), static_cast<std::uint64_t>(rec.get_int("id"))};
  }
  if (ev == "STATUS") {
    DirectionState s;
    s.queued = static_cast<int>(rec.get_int("q"));
    s.first_confirmed = rec.get_int("fva") != 0;
    s.occupancy = rec.get_double("occ");
    s.first_wait_s = rec.get_double("wait");
    s.priority = static_cast<int>(rec.get_int("prio"));
    s.on_duty = rec.get_int("duty") != 0;
    s.back_queue = static_cast<int>(rec.get_int("nqb"));
    s.downstream_count = static_cast<int>(rec.get_int("tnn"));
    return RoadStatusReport{static_cast<int>(rec.get_int("dir")), s, rec.get_double("t")};
  }
  return std::nullopt;
}

}  // namespace tlc
