#pragma once

#include <array>
#include <span>
#include <vector>

#include "tlc/intersection.hpp"
#include "tlc/load.hpp"

namespace tlc {

enum class Aggregation { Min, Avg, Max };

// How the per-side denominator of the green-time ratio is formed.
enum class DenominatorRule {
  OwnQueueIncluded,  // own confirmed queue + crossing queues (default)
  AdjacentOnly,      // crossing queues only, as in the literal pseudocode
};

struct TimingConfig {
  double full_cycle_s = 120.0;
  double base_green_s = 30.0;
  double min_green_s = 5.0;
  Aggregation aggregation = Aggregation::Avg;
  double intergreen_s = 3.0;
  DenominatorRule denominator = DenominatorRule::OwnQueueIncluded;
};

// Throws ConfigError when 0 < min <= base <= cycle or intergreen >= 0 is broken.
void validate(const TimingConfig& cfg);

struct PhasePlan {
  NodePair pair;
  double green_s;

  friend bool operator==(const PhasePlan&, const PhasePlan&) = default;
};

// Confirmed queue counts and confirmation flags per node, the only two
// road-status fields the timing decision reads.
struct QueueSnapshot {
  std::array<int, kNodeCount> queued{};
  std::array<bool, kNodeCount> confirmed{};

  static QueueSnapshot from_matrix(const RoadMatrix& matrix);
};

// Pairs built from adjacency(g1) x adjacency(g2) with self-pairs and
// conflicting pairs removed, deduplicated in first-seen order.
// Throws ContractViolation if {g1, g2} is not a legal phase.
std::vector<NodePair> candidate_pairs(NodeId g1, NodeId g2);
std::vector<NodePair> candidate_pairs(const NodePair& current);

// Highest load sum wins; ties go to the lexicographically smallest pair.
NodePair select_next_phase(std::span<const NodePair> pairs, const LoadVector& loads);

struct PhaseTimeBreakdown {
  double first_side_s;   // green demanded by next.first()
  double second_side_s;  // green demanded by next.second()
  double green_s;        // aggregated and clamped
};

PhaseTimeBreakdown next_phase_time_breakdown(const QueueSnapshot& queues, const NodePair& current,
                                             const NodePair& next, const TimingConfig& cfg);

double next_phase_time(const QueueSnapshot& queues, const NodePair& current, const NodePair& next,
                       const TimingConfig& cfg);

// compute_loads -> candidate_pairs -> select_next_phase -> next_phase_time.
PhasePlan plan_next_phase(const NodePair& current, const RoadMatrix& matrix, const TimingConfig& timing,
                          const LoadWeights& weights);

}  // namespace tlc
