#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tlc/load.hpp"
#include "tlc/planner.hpp"

namespace tlc {

enum class ControllerMode { Normal, Preempt, Intergreen };
enum class DecisionReason { PhaseEnd, Preemption, RecoveryStart };
enum class ControllerKind { Dt3p, Fixed, Actuated };

std::string_view to_string(ControllerMode mode);
std::string_view to_string(DecisionReason reason);
std::string_view to_string(ControllerKind kind);
std::optional<ControllerKind> controller_kind_from_string(std::string_view text);

struct ControllerDecision {
  PhasePlan plan;
  DecisionReason reason;

  friend bool operator==(const ControllerDecision&, const ControllerDecision&) = default;
};

// Signal state machine shared by all controllers. During Intergreen every
// light is red and `pending` holds the plan that takes over afterwards.
struct ControllerState {
  NodePair current_greens{NodeId::A, NodeId::B};
  double phase_elapsed_s = 0.0;
  double phase_budget_s = 0.0;
  ControllerMode mode = ControllerMode::Normal;
  std::optional<NodeId> preempt_target;
  std::optional<PhasePlan> pending;
  double intergreen_elapsed_s = 0.0;

  // The lit pair, or nullopt during all-red.
  std::optional<NodePair> greens() const;

  // Starts with `greens` whose phase has just expired, so the first tick decides.
  static ControllerState expired(NodePair greens);
};

struct StepResult {
  ControllerState state;
  std::optional<ControllerDecision> decision;
};

struct DecisionStep {
  ControllerState state;
  ControllerDecision decision;
};

// Self-organizing controller transitions.
StepResult on_tick(ControllerState state, const RoadMatrix& matrix, const TimingConfig& cfg,
                   const LoadWeights& weights, double dt);

// Throws ContractViolation unless matrix[direction] reports an on-duty vehicle.
DecisionStep on_emergency(ControllerState state, NodeId direction, const RoadMatrix& matrix,
                          const TimingConfig& cfg, const LoadWeights& weights);

// Throws ContractViolation outside Preempt mode.
DecisionStep on_emergency_cleared(ControllerState state, const RoadMatrix& matrix, const TimingConfig& cfg,
                                  const LoadWeights& weights);

// AB -> CD -> EF -> GH -> AB; any other pair continues with AB.
NodePair next_in_rotation(const NodePair& pair);

StepResult fixed_time_step(ControllerState state, const TimingConfig& cfg, double dt);

struct ActuatedConfig {
  double gap_threshold_s = 3.0;
  double max_green_s = 60.0;
};

// `stopline_headway_s` is the time since the last stop-line crossing on a
// green direction (or since phase start when none has crossed).
StepResult actuated_step(ControllerState state, double stopline_headway_s, const TimingConfig& cfg,
                         const ActuatedConfig& act, double dt);

struct TickInput {
  const RoadMatrix& matrix;
  double stopline_headway_s;
  double dt;
};

// Common face of the three controllers as seen by the simulator.
class SignalController {
 public:
  virtual ~SignalController() = default;

  virtual ControllerKind kind() const = 0;
  virtual std::optional<ControllerDecision> tick(const TickInput& input) = 0;

  // Baselines ignore emergencies and return nullopt.
  virtual std::optional<ControllerDecision> emergency(NodeId, const RoadMatrix&) { return std::nullopt; }
  virtual std::optional<ControllerDecision> emergency_cleared(const RoadMatrix&) { return std::nullopt; }

  const ControllerState& state() const { return state_; }
  std::optional<NodePair> greens() const { return state_.greens(); }

 protected:
  explicit SignalController(ControllerState initial) : state_(std::move(initial)) {}
  ControllerState state_;
};

struct ControllerSettings {
  TimingConfig timing;
  LoadWeights weights;
  ActuatedConfig actuated;
  NodePair initial_greens{NodeId::A, NodeId::B};
};

std::unique_ptr<SignalController> make_controller(ControllerKind kind, const ControllerSettings& settings);

}  // namespace tlc
