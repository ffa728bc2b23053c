#include "tlc/controller.hpp"

#include "tlc/error.hpp"

namespace tlc {
namespace {

constexpr double kTimeEps = 1e-9;

void apply_pending(ControllerState& s) {
  s.current_greens = s.pending->pair;
  s.phase_budget_s = s.pending->green_s;
  s.phase_elapsed_s = 0.0;
  s.mode = s.preempt_target ? ControllerMode::Preempt : ControllerMode::Normal;
  s.pending.reset();
  s.intergreen_elapsed_s = 0.0;
}

// Enters all-red ahead of `plan`, or switches at once when there is no intergreen.
void begin_transition(ControllerState& s, const PhasePlan& plan, const TimingConfig& cfg) {
  s.pending = plan;
  s.mode = ControllerMode::Intergreen;
  s.intergreen_elapsed_s = 0.0;
  if (cfg.intergreen_s <= kTimeEps) apply_pending(s);
}

// Returns true if the tick was consumed by an intergreen interval.
bool advance_intergreen(ControllerState& s, const TimingConfig& cfg, double dt) {
  if (s.mode != ControllerMode::Intergreen) return false;
  s.intergreen_elapsed_s += dt;
  if (s.intergreen_elapsed_s + kTimeEps >= cfg.intergreen_s) apply_pending(s);
  return true;
}

NodeId preemption_mate(NodeId direction, const LoadVector& loads) {
  std::optional<NodeId> best;
  for (NodeId n : kAllNodes) {
    if (!compatible(direction, n)) continue;
    if (!best || loads[n] > loads[*best]) best = n;
  }
  return *best;
}

void check_dt(double dt) {
  if (!(dt > 0.0)) throw ContractViolation("dt must be positive");
}

}  // namespace

std::string_view to_string(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::Normal: return "NORMAL";
    case ControllerMode::Preempt: return "PREEMPT";
    case ControllerMode::Intergreen: return "INTERGREEN";
  }
  return "?";
}

std::string_view to_string(DecisionReason reason) {
  switch (reason) {
    case DecisionReason::PhaseEnd: return "PHASE_END";
    case DecisionReason::Preemption: return "PREEMPTION";
    case DecisionReason::RecoveryStart: return "RECOVERY_START";
  }
  return "?";
}

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Dt3p: return "DT3P";
    case ControllerKind::Fixed: return "FIXED";
    case ControllerKind::Actuated: return "ACTUATED";
  }
  return "?";
}

std::optional<ControllerKind> controller_kind_from_string(std::string_view text) {
  for (auto kind : {ControllerKind::Dt3p, ControllerKind::Fixed, ControllerKind::Actuated}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<NodePair> ControllerState::greens() const {
  if (mode == ControllerMode::Intergreen) return std::nullopt;
  return current_greens;
}

ControllerState ControllerState::expired(NodePair greens) {
  ControllerState s;
  s.current_greens = greens;
  return s;
}

StepResult on_tick(ControllerState state, const RoadMatrix& matrix, const TimingConfig& cfg,
                   const LoadWeights& weights, double dt) {
  check_dt(dt);
  if (advance_intergreen(state, cfg, dt)) return {std::move(state), std::nullopt};
  state.phase_elapsed_s += dt;
  if (state.mode == ControllerMode::Preempt) return {std::move(state), std::nullopt};
  if (state.phase_elapsed_s + kTimeEps < state.phase_budget_s) return {std::move(state), std::nullopt};

  const PhasePlan plan = plan_next_phase(state.current_greens, matrix, cfg, weights);
  begin_transition(state, plan, cfg);
  return {std::move(state), ControllerDecision{plan, DecisionReason::PhaseEnd}};
}

DecisionStep on_emergency(ControllerState state, NodeId direction, const RoadMatrix& matrix,
                          const TimingConfig& cfg, const LoadWeights& weights) {
  auto it = matrix.find(direction);
  if (it == matrix.end() || !it->second.on_duty) {
    throw ContractViolation(std::string("no on-duty special vehicle reported on node ") + to_letter(direction));
  }
  state.preempt_target = direction;

  if (auto lit = state.greens(); lit && lit->contains(direction)) {
    state.mode = ControllerMode::Preempt;
    return {std::move(state), {{*lit, cfg.full_cycle_s}, DecisionReason::Preemption}};
  }
  if (state.mode == ControllerMode::Intergreen && state.pending->pair.contains(direction)) {
    state.pending->green_s = cfg.full_cycle_s;
    return {std::move(state), {*state.pending, DecisionReason::Preemption}};
  }

  const LoadVector loads = compute_loads(matrix, weights);
  const PhasePlan plan{NodePair(direction, preemption_mate(direction, loads)), cfg.full_cycle_s};
  if (state.mode == ControllerMode::Intergreen) {
    // Already all-red: retarget without restarting the clearance interval.
    state.pending = plan;
  } else {
    begin_transition(state, plan, cfg);
  }
  return {std::move(state), {plan, DecisionReason::Preemption}};
}

DecisionStep on_emergency_cleared(ControllerState state, const RoadMatrix& matrix, const TimingConfig& cfg,
                                  const LoadWeights& weights) {
  if (state.mode != ControllerMode::Preempt) {
    throw ContractViolation("emergency cleared outside preemption");
  }
  state.mode = ControllerMode::Normal;
  state.preempt_target.reset();
  const PhasePlan plan = plan_next_phase(state.current_greens, matrix, cfg, weights);
  begin_transition(state, plan, cfg);
  return {std::move(state), {plan, DecisionReason::RecoveryStart}};
}

NodePair next_in_rotation(const NodePair& pair) {
  using enum NodeId;
  static const std::array<NodePair, 4> kRotation = {NodePair(A, B), NodePair(C, D), NodePair(E, F),
                                                    NodePair(G, H)};
  for (std::size_t i = 0; i < kRotation.size(); ++i) {
    if (kRotation[i] == pair) return kRotation[(i + 1) % kRotation.size()];
  }
  return kRotation[0];
}

StepResult fixed_time_step(ControllerState state, const TimingConfig& cfg, double dt) {
  check_dt(dt);
  if (advance_intergreen(state, cfg, dt)) return {std::move(state), std::nullopt};
  state.phase_elapsed_s += dt;
  if (state.phase_elapsed_s + kTimeEps < state.phase_budget_s) return {std::move(state), std::nullopt};

  const PhasePlan plan{next_in_rotation(state.current_greens), cfg.base_green_s};
  begin_transition(state, plan, cfg);
  return {std::move(state), ControllerDecision{plan, DecisionReason::PhaseEnd}};
}

StepResult actuated_step(ControllerState state, double stopline_headway_s, const TimingConfig& cfg,
                         const ActuatedConfig& act, double dt) {
  check_dt(dt);
  if (advance_intergreen(state, cfg, dt)) return {std::move(state), std::nullopt};
  state.phase_elapsed_s += dt;
  const bool max_out = state.phase_elapsed_s + kTimeEps >= state.phase_budget_s;
  const bool gap_out = state.phase_elapsed_s + kTimeEps >= cfg.min_green_s &&
                       stopline_headway_s + kTimeEps >= act.gap_threshold_s;
  if (!max_out && !gap_out) return {std::move(state), std::nullopt};

  const PhasePlan plan{next_in_rotation(state.current_greens), act.max_green_s};
  begin_transition(state, plan, cfg);
  return {std::move(state), ControllerDecision{plan, DecisionReason::PhaseEnd}};
}

namespace {

class Dt3pController final : public SignalController {
 public:
  explicit Dt3pController(const ControllerSettings& s)
      : SignalController(ControllerState::expired(s.initial_greens)), timing_(s.timing), weights_(s.weights) {}

  ControllerKind kind() const override { return ControllerKind::Dt3p; }

  std::optional<ControllerDecision> tick(const TickInput& in) override {
    auto step = on_tick(state_, in.matrix, timing_, weights_, in.dt);
    state_ = std::move(step.state);
    return step.decision;
  }

  std::optional<ControllerDecision> emergency(NodeId direction, const RoadMatrix& matrix) override {
    auto step = on_emergency(state_, direction, matrix, timing_, weights_);
    state_ = std::move(step.state);
    return step.decision;
  }

  std::optional<ControllerDecision> emergency_cleared(const RoadMatrix& matrix) override {
    auto step = on_emergency_cleared(state_, matrix, timing_, weights_);
    state_ = std::move(step.state);
    return step.decision;
  }

 private:
  TimingConfig timing_;
  LoadWeights weights_;
};

class FixedTimeController final : public SignalController {
 public:
  explicit FixedTimeController(const ControllerSettings& s)
      : SignalController(ControllerState::expired(s.initial_greens)), timing_(s.timing) {}

  ControllerKind kind() const override { return ControllerKind::Fixed; }

  std::optional<ControllerDecision> tick(const TickInput& in) override {
    auto step = fixed_time_step(state_, timing_, in.dt);
    state_ = std::move(step.state);
    return step.decision;
  }

 private:
  TimingConfig timing_;
};

class ActuatedController final : public SignalController {
 public:
  explicit ActuatedController(const ControllerSettings& s)
      : SignalController(ControllerState::expired(s.initial_greens)), timing_(s.timing), act_(s.actuated) {}

  ControllerKind kind() const override { return ControllerKind::Actuated; }

  std::optional<ControllerDecision> tick(const TickInput& in) override {
    auto step = actuated_step(state_, in.stopline_headway_s, timing_, act_, in.dt);
    state_ = std::move(step.state);
    return step.decision;
  }

 private:
  TimingConfig timing_;
  ActuatedConfig act_;
};

}  // namespace

std::unique_ptr<SignalController> make_controller(ControllerKind kind, const ControllerSettings& settings) {
  switch (kind) {
    case ControllerKind::Dt3p: return std::make_unique<Dt3pController>(settings);
    case ControllerKind::Fixed: return std::make_unique<FixedTimeController>(settings);
    case ControllerKind::Actuated: return std::make_unique<ActuatedController>(settings);
  }
  throw ContractViolation("unknown controller kind");
}

}  // namespace tlc
