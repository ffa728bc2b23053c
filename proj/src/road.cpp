#include "tlc/road.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tlc/error.hpp"

namespace tlc {
namespace {

constexpr double kEps = 1e-9;

NodeId node_for(int direction, const std::string& key) {
  auto node = node_from_direction(direction);
  if (!node) {
    throw ConfigError(is_slip_lane(direction) ? "slip lanes are not simulated" : "unknown direction index", key);
  }
  return *node;
}

}  // namespace

int BeltLayout::estimator_count(double road_length_m) const {
  return std::max(1, static_cast<int>(std::floor(road_length_m / estimator_spacing_m + kEps)));
}

int active_estimator(int queue_len, const BeltLayout& layout, int estimator_count) {
  const int index = 1 + std::max(0, queue_len) / layout.segment_capacity;
  return std::clamp(index, 1, std::max(1, estimator_count));
}

std::optional<double> LaneState::first_arrival_time() const {
  if (queue.empty()) return std::nullopt;
  return queue.front().vehicle.entered_at;
}

DirectionState sample_direction_state(const LaneState& lane, double now, const BeltLayout& layout,
                                      LinkedCounts linked) {
  DirectionState s;
  s.back_queue = linked.back_queue;
  s.downstream_count = linked.downstream_count;
  for (const auto& qv : lane.queue) {
    if (qv.vehicle.on_duty) {
      s.priority = qv.vehicle.priority;
      s.on_duty = true;
      break;
    }
  }
  if (lane.queue.empty() || !lane.queue.front().confirmed) return s;
  s.first_confirmed = true;
  s.queued = static_cast<int>(lane.queue.size());
  s.occupancy = std::min(1.0, static_cast<double>(s.queued) / layout.segment_capacity);
  s.first_wait_s = std::max(0.0, now - *lane.first_arrival_time());
  return s;
}

void validate(const RoadConfig& cfg) {
  if (!(cfg.road_length_m > 0.0)) throw ConfigError("must be positive", "road.length_m");
  if (!(cfg.free_speed_mps > 0.0)) throw ConfigError("must be positive", "road.free_speed_mps");
  if (!(cfg.saturation_headway_s > 0.0)) throw ConfigError("must be positive", "road.saturation_headway_s");
  if (!(cfg.belts.estimator_spacing_m > 0.0)) throw ConfigError("must be positive", "belts.estimator_spacing_m");
  if (!(cfg.belts.fva_offset_m >= 0.0)) throw ConfigError("must be nonnegative", "belts.fva_offset_m");
  if (cfg.belts.segment_capacity <= 0) throw ConfigError("must be positive", "belts.segment_capacity");
  if (!(cfg.belts.vehicle_length_m > 0.0)) throw ConfigError("must be positive", "belts.vehicle_length_m");
  if (!(cfg.message_delay_s >= 0.0)) throw ConfigError("must be nonnegative", "message_delay_s");
  for (const auto& [dir, count] : cfg.initial_queues) {
    const std::string key = "initial_queues." + std::to_string(dir);
    node_for(dir, key);
    if (count < 0) throw ConfigError("must be nonnegative", key);
  }
  for (const auto& [dir, rate] : cfg.arrivals.rates) {
    const std::string key = "arrival_rates." + std::to_string(dir);
    node_for(dir, key);
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ConfigError("must be finite and nonnegative", key);
  }
  double last = -1e300;
  for (std::size_t i = 0; i < cfg.arrivals.scripted.size(); ++i) {
    const auto& a = cfg.arrivals.scripted[i];
    const std::string key = "scripted_arrivals[" + std::to_string(i) + "]";
    node_for(a.direction, key + ".direction");
    if (a.time < last) throw ConfigError("times must be nondecreasing", key + ".time");
    if (a.time < 0.0) throw ConfigError("must be nonnegative", key + ".time");
    if (a.on_duty && a.kind == VehicleKind::Car) throw ConfigError("cars are never on duty", key + ".on_duty");
    if (a.distance_m && !(*a.distance_m >= 0.0)) throw ConfigError("must be nonnegative", key + ".distance_m");
    last = a.time;
  }
  for (const auto& [dir, link] : cfg.links) {
    const std::string key = "links." + std::to_string(dir);
    node_for(dir, key);
    for (int d : link.back) node_for(d, key + ".back");
    for (int d : link.next) node_for(d, key + ".next");
  }
}

std::string format_decision(const DecisionRecord& r) {
  LogRecord rec;
  rec.add("t", r.time)
      .add("reason", std::string(to_string(r.decision.reason)))
      .add("pair", r.decision.plan.pair.to_string())
      .add("green", r.decision.plan.green_s)
      .add("mode", std::string(to_string(r.mode_after)));
  return rec.to_line();
}

DecisionRecord parse_decision(const std::string& line) {
  const auto rec = LogRecord::parse(line);
  const auto& reason_text = rec.get("reason");
  DecisionReason reason{};
  if (reason_text == "PHASE_END") {
    reason = DecisionReason::PhaseEnd;
  } else if (reason_text == "PREEMPTION") {
    reason = DecisionReason::Preemption;
  } else if (reason_text == "RECOVERY_START") {
    reason = DecisionReason::RecoveryStart;
  } else {
    throw ConfigError("unknown decision reason " + reason_text, "decisions");
  }
  auto pair = NodePair::parse(rec.get("pair"));
  if (!pair) throw ConfigError("bad pair " + rec.get("pair"), "decisions");
  const auto& mode_text = rec.get("mode");
  ControllerMode mode{};
  if (mode_text == "NORMAL") {
    mode = ControllerMode::Normal;
  } else if (mode_text == "PREEMPT") {
    mode = ControllerMode::Preempt;
  } else if (mode_text == "INTERGREEN") {
    mode = ControllerMode::Intergreen;
  } else {
    throw ConfigError("unknown mode " + mode_text, "decisions");
  }
  return {rec.get_double("t"), {{*pair, rec.get_double("green")}, reason}, mode};
}

World::World(RoadConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), bus_(cfg_.message_delay_s) {
  validate(cfg_);
  std::stable_sort(cfg_.arrivals.scripted.begin(), cfg_.arrivals.scripted.end(),
            [](const ScriptedArrival& a, const ScriptedArrival& b) { return a.time < b.time; });
  for (NodeId node : kAllNodes) {
    auto& lane = lanes_[index_of(node)];
    lane.direction = to_direction_index(node);
    lane.road_length_m = cfg_.road_length_m;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(lane.direction)};
    rngs_[index_of(node)].seed(seq);
  }
  for (const auto& [dir, count] : cfg_.initial_queues) {
    const NodeId node = *node_from_direction(dir);
    for (int i = 0; i < count; ++i) {
      const double slot = static_cast<double>(lanes_[index_of(node)].queue.size()) * cfg_.belts.vehicle_length_m;
      spawn(node, VehicleRecord{next_id_++, VehicleKind::Car, 0, false, 0.0}, slot, true);
    }
  }
  for (auto& lane : lanes_) {
    lane.active_estimator = active_estimator(static_cast<int>(lane.queue.size()), cfg_.belts,
                                             cfg_.belts.estimator_count(lane.road_length_m));
  }
  for (NodeId node : kAllNodes) {
    delivered_.emplace(node, DirectionState{});
  }
}

void World::spawn(NodeId node, VehicleRecord vehicle, double distance_m, bool initial) {
  auto& lane = lanes_[index_of(node)];
  double position = distance_m;
  if (!lane.queue.empty()) {
    position = std::max(position, lane.queue.back().position_m + cfg_.belts.vehicle_length_m);
  }
  const bool confirmed = position <= cfg_.belts.fva_offset_m + kEps;
  lane.queue.push_back({vehicle, position, confirmed});
  ++lane.arrivals_total;

  LogRecord rec;
  rec.add("t", vehicle.entered_at)
      .add("ev", std::string(initial ? "INIT" : "ARRIVE"))
      .add("dir", lane.direction)
      .add("id", vehicle.id)
      .add("kind", std::string(to_string(vehicle.kind)))
      .add("prio", vehicle.priority)
      .add("duty", vehicle.on_duty)
      .add("dist", position);
  log(rec);
  if (initial) return;

  bus_.publish(BeltEvent{BeltKind::LoadAdder, lane.direction, lane.arrivals_total, vehicle.entered_at, vehicle.id});
  if (auto report = rse_[index_of(node)].handshake(vehicle, lane.direction, vehicle.entered_at)) {
    bus_.publish(*report);
  }
}

void World::generate_arrivals(double t, double dt) {
  // Random arrivals first so the logged entry times stay nondecreasing.
  if (cfg_.arrivals.random) {
    for (NodeId node : kAllNodes) {
      auto it = cfg_.arrivals.rates.find(to_direction_index(node));
      const double rate = it == cfg_.arrivals.rates.end() ? 0.0 : it->second;
      if (rate <= 0.0) continue;
      std::poisson_distribution<int> draw(rate * dt);
      const int n = draw(rngs_[index_of(node)]);
      for (int i = 0; i < n; ++i) {
        spawn(node, VehicleRecord{next_id_++, VehicleKind::Car, 0, false, t}, cfg_.road_length_m, false);
      }
    }
  }
  const auto& scripted = cfg_.arrivals.scripted;
  while (next_scripted_ < scripted.size() && scripted[next_scripted_].time < t + dt - kEps) {
    const auto& a = scripted[next_scripted_++];
    const NodeId node = *node_from_direction(a.direction);
    VehicleRecord v;
    v.id = a.id ? *a.id : next_id_;
    next_id_ = std::max(next_id_, v.id + 1);
    v.kind = a.kind;
    v.on_duty = a.on_duty;
    v.priority = a.priority ? *a.priority : (a.on_duty ? default_priority(a.kind) : 0);
    v.entered_at = a.time;
    spawn(node, v, a.distance_m.value_or(cfg_.road_length_m), false);
  }
}

RoadMatrix World::sample_matrix() const {
  RoadMatrix matrix;
  for (NodeId node : kAllNodes) {
    const auto& lane = lanes_[index_of(node)];
    LinkedCounts linked;
    if (auto it = cfg_.links.find(lane.direction); it != cfg_.links.end()) {
      for (int d : it->second.back) linked.back_queue += static_cast<int>(lanes_[index_of(*node_from_direction(d))].queue.size());
      for (int d : it->second.next) linked.downstream_count += static_cast<int>(lanes_[index_of(*node_from_direction(d))].queue.size());
    }
    matrix.emplace(node, sample_direction_state(lane, now(), cfg_.belts, linked));
  }
  return matrix;
}

void World::process_messages(double t) {
  for (const auto& [node, state] : sample_matrix()) {
    bus_.publish(RoadStatusReport{to_direction_index(node), state, t});
  }
  std::vector<RoadStatusReport> statuses;
  for (auto& message : bus_.drain(t)) {
    if (auto* report = std::get_if<VehicleReport>(&message)) {
      log(to_record(*report));
      if (report->on_duty) {
        pending_emergencies_.push_back({*node_from_direction(report->direction), report->vehicle_id});
      }
    } else if (auto* belt = std::get_if<BeltEvent>(&message)) {
      log(to_record(*belt));
      if (belt->kind == BeltKind::LoadSubtractor && preempting_vehicle_ && belt->vehicle_id == *preempting_vehicle_) {
        clearance_pending_ = true;
      }
    } else {
      statuses.push_back(std::get<RoadStatusReport>(message));
    }
  }
  // Only the newest complete delivery counts; older ones are superseded.
  while (statuses.size() >= kNodeCount) {
    const std::span<const RoadStatusReport> newest(statuses.data() + statuses.size() - kNodeCount, kNodeCount);
    try {
      delivered_ = deliver_matrix(newest);
      break;
    } catch (const DeliveryError& e) {
      violations_.push_back("t=" + format_number(t) + " matrix delivery rejected: " + e.what());
      statuses.resize(statuses.size() - kNodeCount);
    }
  }
}

std::optional<ControllerDecision> World::controller_transition(SignalController& controller, double t, double dt) {
  const auto& state = controller.state();
  if (clearance_pending_ && state.mode == ControllerMode::Preempt) {
    clearance_pending_ = false;
    preempting_vehicle_.reset();
    LogRecord rec;
    rec.add("t", t).add("ev", std::string("CLEARED")).add("dir", to_direction_index(*state.preempt_target));
    log(rec);
    return controller.emergency_cleared(delivered_);
  }

  // Drop emergencies whose vehicle already left the lane.
  while (!pending_emergencies_.empty()) {
    const auto& pe = pending_emergencies_.front();
    const auto& q = lanes_[index_of(pe.node)].queue;
    const bool present = std::any_of(q.begin(), q.end(), [&](const QueuedVehicle& qv) {
      return qv.vehicle.id == pe.vehicle_id;
    });
    if (present) break;
    pending_emergencies_.pop_front();
  }
  if (!pending_emergencies_.empty() && state.mode != ControllerMode::Preempt && !preempting_vehicle_) {
    const auto pe = pending_emergencies_.front();
    if (delivered_.at(pe.node).on_duty) {
      pending_emergencies_.pop_front();
      auto decision = controller.emergency(pe.node, delivered_);
      if (decision) {
        preempting_vehicle_ = pe.vehicle_id;
        LogRecord rec;
        rec.add("t", t).add("ev", std::string("EMERGENCY")).add("dir", to_direction_index(pe.node)).add("id", pe.vehicle_id);
        log(rec);
        return decision;
      }
    }
  }

  double last_activity = lit_since_;
  if (auto lit = controller.greens()) {
    for (NodeId n : {lit->first(), lit->second()}) {
      if (auto d = lanes_[index_of(n)].last_departure_s) last_activity = std::max(last_activity, *d);
    }
  }
  return controller.tick(TickInput{delivered_, t - last_activity, dt});
}

void World::discharge(double t, double dt) {
  const double headway = cfg_.saturation_headway_s;
  for (NodeId node : kAllNodes) {
    auto& lane = lanes_[index_of(node)];
    if (!lit_ || !lit_->contains(node)) {
      lane.discharge_credit_s = 0.0;
      continue;
    }
    lane.discharge_credit_s += dt;
    while (lane.discharge_credit_s + kEps >= headway && !lane.queue.empty() &&
           lane.queue.front().position_m <= kEps) {
      const auto vehicle = lane.queue.front().vehicle;
      lane.queue.pop_front();
      ++lane.departures_total;
      lane.discharge_credit_s -= headway;
      lane.last_departure_s = t;
      departures_.push_back({node, t, vehicle.id});
      bus_.publish(BeltEvent{BeltKind::LoadSubtractor, lane.direction, lane.departures_total, t, vehicle.id});
    }
    lane.discharge_credit_s = std::min(lane.discharge_credit_s, headway);
  }
}

void World::advance_vehicles(double t, double dt) {
  const double step = cfg_.free_speed_mps * dt;
  for (auto& lane : lanes_) {
    const bool was_confirmed = !lane.queue.empty() && lane.queue.front().confirmed;
    double limit = 0.0;
    for (auto& qv : lane.queue) {
      qv.position_m = std::max(limit, qv.position_m - step);
      if (qv.position_m <= cfg_.belts.fva_offset_m + kEps) qv.confirmed = true;
      limit = qv.position_m + cfg_.belts.vehicle_length_m;
    }
    const int queue_len = static_cast<int>(lane.queue.size());
    if (!was_confirmed && !lane.queue.empty() && lane.queue.front().confirmed) {
      bus_.publish(BeltEvent{BeltKind::FvaConfirm, lane.direction, queue_len, t + dt, lane.queue.front().vehicle.id});
    }
    const int active = active_estimator(queue_len, cfg_.belts, cfg_.belts.estimator_count(lane.road_length_m));
    if (active != lane.active_estimator) {
      lane.active_estimator = active;
      bus_.publish(BeltEvent{BeltKind::LoadEstimator, lane.direction, active, t + dt, 0});
    }
  }
}

void World::check_invariants(double t) {
  for (const auto& lane : lanes_) {
    if (lane.arrivals_total - lane.departures_total != static_cast<long>(lane.queue.size())) {
      violations_.push_back("t=" + format_number(t) + " conservation broken on direction " +
                            std::to_string(lane.direction));
    }
  }
  if (total_arrivals() != total_departures() + total_queued()) {
    violations_.push_back("t=" + format_number(t) + " global conservation broken");
  }
  if (lit_ && !is_legal_phase(*lit_)) {
    violations_.push_back("t=" + format_number(t) + " conflicting greens " + lit_->to_string());
  }
}

void World::step(SignalController& controller, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("dt must be positive");
  if (ticks_ == 0) {
    last_dt_ = dt;
  } else if (std::abs(dt - last_dt_) > kEps) {
    throw ContractViolation("tick length must stay constant within a run");
  }
  const double t = now();

  generate_arrivals(t, dt);
  process_messages(t);
  if (auto decision = controller_transition(controller, t, dt)) {
    const auto& plan = decision->plan;
    if (!is_legal_phase(plan.pair)) {
      violations_.push_back("t=" + format_number(t) + " illegal plan " + plan.pair.to_string());
    }
    decisions_.push_back({t, *decision, controller.state().mode});
  }

  const auto lit = controller.greens();
  if (lit != lit_) {
    if (lit_) {
      closed_greens_.push_back({lit_->first(), lit_since_, t});
      closed_greens_.push_back({lit_->second(), lit_since_, t});
    }
    lit_ = lit;
    lit_since_ = t;
  }
  if (lit_) {
    green_s_[index_of(lit_->first())] += dt;
    green_s_[index_of(lit_->second())] += dt;
  }

  discharge(t, dt);
  advance_vehicles(t, dt);
  ++ticks_;
  check_invariants(now());
}

std::vector<GreenInterval> World::green_log() const {
  auto log = closed_greens_;
  if (lit_) {
    log.push_back({lit_->first(), lit_since_, now()});
    log.push_back({lit_->second(), lit_since_, now()});
  }
  return log;
}

long World::total_arrivals() const {
  long sum = 0;
  for (const auto& lane : lanes_) sum += lane.arrivals_total;
  return sum;
}

long World::total_departures() const {
  long sum = 0;
  for (const auto& lane : lanes_) sum += lane.departures_total;
  return sum;
}

long World::total_queued() const {
  long sum = 0;
  for (const auto& lane : lanes_) sum += static_cast<long>(lane.queue.size());
  return sum;
}

}  // namespace tlc
