#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tlc/error.hpp"
#include "tlc/load.hpp"
#include "tlc/vehicle.hpp"

namespace tlc {

// Sent by a vehicle to the roadside unit once the entry handshake completes.
struct VehicleReport {
  std::uint64_t vehicle_id = 0;
  VehicleKind kind = VehicleKind::Car;
  int priority = 0;
  bool on_duty = false;
  int direction = 0;
  double timestamp = 0.0;

  friend bool operator==(const VehicleReport&, const VehicleReport&) = default;
};

struct RoadStatusReport {
  int direction = 0;
  DirectionState state;
  double timestamp = 0.0;

  friend bool operator==(const RoadStatusReport&, const RoadStatusReport&) = default;
};

enum class BeltKind { LoadAdder, LoadSubtractor, FvaConfirm, LoadEstimator };

std::string_view to_string(BeltKind kind);
std::optional<BeltKind> belt_kind_from_string(std::string_view text);

// Payload: lane count for adder/subtractor, queue length for confirmation,
// active estimator index for LoadEstimator.
struct BeltEvent {
  BeltKind kind = BeltKind::LoadAdder;
  int direction = 0;
  long payload = 0;
  double timestamp = 0.0;
  std::uint64_t vehicle_id = 0;

  friend bool operator==(const BeltEvent&, const BeltEvent&) = default;
};

// Per-road handshake endpoint. Remembers which vehicles already reported.
class RoadsideUnit {
 public:
  // nullopt when this vehicle already reported on this road (the duplicate is dropped).
  std::optional<VehicleReport> handshake(const VehicleRecord& vehicle, int direction, double now);

  std::size_t dropped() const { return dropped_; }

 private:
  std::set<std::pair<int, std::uint64_t>> seen_;
  std::size_t dropped_ = 0;
};

class DeliveryError : public ConfigError {
 public:
  explicit DeliveryError(const std::string& message) : ConfigError(message, "matrix") {}
};

// Requires exactly one report per signalized direction, all with the same timestamp.
RoadMatrix deliver_matrix(std::span<const RoadStatusReport> reports);

using Message = std::variant<VehicleReport, BeltEvent, RoadStatusReport>;

// 0 emergency reports, 1 other vehicle reports, 2 belt events, 3 road status.
int dispatch_rank(const Message& message);

// Ordered single-consumer bus. Messages become deliverable `delay_s` after
// their timestamp; drain() returns them by (rank, timestamp, direction, id).
class EventBus {
 public:
  explicit EventBus(double delay_s = 0.0) : delay_s_(delay_s) {}

  void publish(Message message);
  std::vector<Message> drain(double now);
  std::size_t pending() const { return queue_.size(); }

 private:
  double delay_s_;
  std::vector<Message> queue_;
};

// Line-oriented log record: space separated key=value fields in a fixed order.
class LogRecord {
 public:
  LogRecord() = default;

  LogRecord& add(std::string key, std::string value);
  LogRecord& add(std::string key, double value);
  LogRecord& add(std::string key, long long value);
  LogRecord& add(std::string key, int value) { return add(std::move(key), static_cast<long long>(value)); }
  LogRecord& add(std::string key, std::uint64_t value) {
    return add(std::move(key), static_cast<long long>(value));
  }
  LogRecord& add(std::string key, bool value) { return add(std::move(key), value ? 1LL : 0LL); }

  std::string to_line() const;
  static LogRecord parse(std::string_view line);  // throws ConfigError

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }
  const std::string* find(std::string_view key) const;
  const std::string& get(std::string_view key) const;  // throws ConfigError
  double get_double(std::string_view key) const;
  long long get_int(std::string_view key) const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

// Shortest text that parses back to the same double.
std::string format_number(double value);

LogRecord to_record(const VehicleReport& report);
LogRecord to_record(const BeltEvent& event);
LogRecord to_record(const RoadStatusReport& report);
LogRecord to_record(const Message& message);

// Inverse of to_record for the three message types; nullopt for other record kinds.
std::optional<Message> message_from_record(const LogRecord& record);

}  // namespace tlc
