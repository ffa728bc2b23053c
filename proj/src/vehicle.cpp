#include "tlc/vehicle.hpp"

namespace tlc {

std::string_view to_string(VehicleKind kind) {
  switch (kind) {
    case VehicleKind::Car: return "CAR";
    case VehicleKind::Ambulance: return "AMBULANCE";
    case VehicleKind::Fire: return "FIRE";
    case VehicleKind::Police: return "POLICE";
  }
  return "?";
}

std::optional<VehicleKind> vehicle_kind_from_string(std::string_view text) {
  for (auto kind : {VehicleKind::Car, VehicleKind::Ambulance, VehicleKind::Fire, VehicleKind::Police}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

int default_priority(VehicleKind kind) {
  switch (kind) {
    case VehicleKind::Car: return 0;
    case VehicleKind::Ambulance: return 3;
    case VehicleKind::Fire: return 3;
    case VehicleKind::Police: return 2;
  }
  return 0;
}

bool is_consistent(const VehicleRecord& v) {
  if (v.kind == VehicleKind::Car) return !v.on_duty && v.priority == 0;
  return v.priority >= 0 && (!v.on_duty || v.priority > 0);
}

}  // namespace tlc
