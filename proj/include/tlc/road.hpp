#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tlc/controller.hpp"
#include "tlc/load.hpp"
#include "tlc/messaging.hpp"
#include "tlc/vehicle.hpp"

namespace tlc {

struct BeltLayout {
  double estimator_spacing_m = 150.0;
  double fva_offset_m = 6.0;
  int segment_capacity = 30;
  double vehicle_length_m = 5.0;  // jam spacing; 150 m / 30 vehicles

  int estimator_count(double road_length_m) const;
};

// Which chained Load Estimator watches a queue of this length (1-based).
int active_estimator(int queue_len, const BeltLayout& layout, int estimator_count);

struct QueuedVehicle {
  VehicleRecord vehicle;
  double position_m = 0.0;  // distance to the stop line
  bool confirmed = false;   // has crossed the first-vehicle confirmation belt
};

struct LaneState {
  int direction = 0;
  std::deque<QueuedVehicle> queue;  // front is nearest the stop line
  double road_length_m = 600.0;
  long arrivals_total = 0;
  long departures_total = 0;
  int active_estimator = 1;
  double discharge_credit_s = 0.0;
  std::optional<double> last_departure_s;

  // Entry time of the front vehicle; present iff the lane is not empty.
  std::optional<double> first_arrival_time() const;
};

struct LinkedCounts {
  int back_queue = 0;
  int downstream_count = 0;
};

DirectionState sample_direction_state(const LaneState& lane, double now, const BeltLayout& layout,
                                      LinkedCounts linked = {});

struct ScriptedArrival {
  double time = 0.0;
  int direction = 0;
  VehicleKind kind = VehicleKind::Car;
  std::optional<int> priority;        // defaults to default_priority(kind) when on duty
  bool on_duty = false;
  std::optional<double> distance_m;   // entry distance from the stop line; road length if unset
  std::optional<std::uint64_t> id;    // fixed id (replays); otherwise the next free id
};

struct ArrivalProcess {
  std::map<int, double> rates;  // vehicles per second per direction index; absent means 0
  bool random = true;
  std::vector<ScriptedArrival> scripted;  // sorted by time
};

// Directions whose queues feed v_nqb / v_tnn of a direction.
struct LaneLink {
  std::vector<int> back;
  std::vector<int> next;
};

struct RoadConfig {
  BeltLayout belts;
  double road_length_m = 600.0;
  double free_speed_mps = 10.0;
  double saturation_headway_s = 2.0;
  std::map<int, int> initial_queues;
  ArrivalProcess arrivals;
  std::map<int, LaneLink> links;
  double message_delay_s = 0.0;
};

// Throws ConfigError for slip-lane or unknown directions and negative values.
void validate(const RoadConfig& cfg);

struct DecisionRecord {
  double time;
  ControllerDecision decision;
  ControllerMode mode_after;
};

std::string format_decision(const DecisionRecord& record);
DecisionRecord parse_decision(const std::string& line);

struct GreenInterval {
  NodeId node;
  double start_s;
  double end_s;
};

struct DepartureRecord {
  NodeId node;
  double time_s;
  std::uint64_t vehicle_id;
};

// The four-road world: queues, arrivals, discharge and belt emulation.
// Each step() advances one tick and performs exactly one controller transition.
class World {
 public:
  World(RoadConfig cfg, std::uint64_t seed);

  void step(SignalController& controller, double dt);

  double now() const { return static_cast<double>(ticks_) * last_dt_; }
  long ticks() const { return ticks_; }
  const RoadConfig& config() const { return cfg_; }
  const LaneState& lane(NodeId node) const { return lanes_[index_of(node)]; }

  RoadMatrix sample_matrix() const;

  const std::vector<std::string>& event_log() const { return events_; }
  const std::vector<DecisionRecord>& decisions() const { return decisions_; }
  const std::vector<DepartureRecord>& departure_log() const { return departures_; }
  // Closed green intervals plus any still-open ones ending now.
  std::vector<GreenInterval> green_log() const;
  const std::array<double, kNodeCount>& green_seconds() const { return green_s_; }
  const std::vector<std::string>& violations() const { return violations_; }
  std::optional<NodePair> lit() const { return lit_; }

  long total_arrivals() const;
  long total_departures() const;
  long total_queued() const;

 private:
  void spawn(NodeId node, VehicleRecord vehicle, double distance_m, bool initial);
  void generate_arrivals(double t, double dt);
  void process_messages(double t);
  std::optional<ControllerDecision> controller_transition(SignalController& controller, double t, double dt);
  void discharge(double t, double dt);
  void advance_vehicles(double t, double dt);
  void check_invariants(double t);
  void log(const LogRecord& record) { events_.push_back(record.to_line()); }

  RoadConfig cfg_;
  std::array<LaneState, kNodeCount> lanes_;
  std::array<std::mt19937_64, kNodeCount> rngs_;
  std::array<RoadsideUnit, kNodeCount> rse_;
  EventBus bus_;
  std::size_t next_scripted_ = 0;
  std::uint64_t next_id_ = 1;
  long ticks_ = 0;
  double last_dt_ = 1.0;

  RoadMatrix delivered_;
  bool clearance_pending_ = false;
  std::optional<std::uint64_t> preempting_vehicle_;
  struct PendingEmergency {
    NodeId node;
    std::uint64_t vehicle_id;
  };
  std::deque<PendingEmergency> pending_emergencies_;

  std::optional<NodePair> lit_;
  double lit_since_ = 0.0;
  std::array<double, kNodeCount> green_s_{};
  std::vector<GreenInterval> closed_greens_;
  std::vector<std::string> events_;
  std::vector<DecisionRecord> decisions_;
  std::vector<DepartureRecord> departures_;
  std::vector<std::string> violations_;
};

}  // namespace tlc
