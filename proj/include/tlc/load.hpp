#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "tlc/intersection.hpp"

namespace tlc {

// Road status of one direction at one instant, as assembled by the roadside
// equipment and delivered to the controller.
struct DirectionState {
  int queued = 0;                 // vehicles confirmed in the queuing area
  bool first_confirmed = false;   // first vehicle crossed the confirmation belt
  double occupancy = 0.0;         // fill fraction of the first queuing segment, [0,1]
  double first_wait_s = 0.0;      // waiting time of the first queued vehicle
  int priority = 0;               // special-vehicle priority class
  bool on_duty = false;           // special vehicle on duty
  int back_queue = 0;             // vehicles queued on upstream roads feeding this one
  int downstream_count = 0;       // vehicles on the receiving road

  friend bool operator==(const DirectionState&, const DirectionState&) = default;
};

// Empty string when the state is consistent, otherwise the first broken rule.
std::string validate(const DirectionState& state);

using RoadMatrix = std::map<NodeId, DirectionState>;

struct LoadCaps {
  double max_queue = 200.0;
  double max_wait_s = 3600.0;
};

// Installation-time weights of the per-direction load score.
struct LoadWeights {
  double queued = 1.0;
  double occupancy = 10.0;
  double wait = 0.5;
  double back_queue = 0.2;
  double downstream = 0.2;
  double emergency = 1e6;
  std::optional<double> wait_cap_s;  // saturates first_wait_s when set
};

// Throws ConfigError unless the emergency weight outranks every other term at the caps.
void check_emergency_dominance(const LoadWeights& weights, const LoadCaps& caps);

class LoadVector {
 public:
  LoadVector() { values_.fill(0.0); }

  double& operator[](NodeId node) { return values_[index_of(node)]; }
  double operator[](NodeId node) const { return values_[index_of(node)]; }

  friend bool operator==(const LoadVector&, const LoadVector&) = default;

 private:
  std::array<double, kNodeCount> values_;
};

double direction_load(const DirectionState& state, const LoadWeights& weights);

// Throws ConfigError if any of the eight directions is missing.
LoadVector compute_loads(const RoadMatrix& states, const LoadWeights& weights);

}  // namespace tlc
