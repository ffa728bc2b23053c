#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace tlc {

enum class VehicleKind { Car, Ambulance, Fire, Police };

std::string_view to_string(VehicleKind kind);
std::optional<VehicleKind> vehicle_kind_from_string(std::string_view text);

// Priority class carried by an on-duty special vehicle of this kind; 0 for cars.
int default_priority(VehicleKind kind);

struct VehicleRecord {
  std::uint64_t id = 0;
  VehicleKind kind = VehicleKind::Car;
  int priority = 0;
  bool on_duty = false;
  double entered_at = 0.0;

  friend bool operator==(const VehicleRecord&, const VehicleRecord&) = default;
};

// Cars are never on duty and carry priority 0.
bool is_consistent(const VehicleRecord& v);

}  // namespace tlc
