#include "tlc/planner.hpp"

#include <algorithm>
#include <cmath>

#include "tlc/error.hpp"

namespace tlc {

void validate(const TimingConfig& cfg) {
  if (!(cfg.min_green_s > 0.0)) throw ConfigError("must be positive", "timing.min_green");
  if (!(cfg.min_green_s <= cfg.base_green_s)) throw ConfigError("must not exceed base_green", "timing.min_green");
  if (!(cfg.base_green_s <= cfg.full_cycle_s)) throw ConfigError("must not exceed full_cycle", "timing.base_green");
  if (!(cfg.intergreen_s >= 0.0)) throw ConfigError("must be nonnegative", "timing.intergreen");
}

QueueSnapshot QueueSnapshot::from_matrix(const RoadMatrix& matrix) {
  QueueSnapshot snap;
  for (const auto& [node, state] : matrix) {
    snap.queued[index_of(node)] = state.queued;
    snap.confirmed[index_of(node)] = state.first_confirmed;
  }
  return snap;
}

std::vector<NodePair> candidate_pairs(NodeId g1, NodeId g2) {
  if (!compatible(g1, g2)) {
    throw ContractViolation("current greens " + std::string{to_letter(g1), to_letter(g2)} +
                            " are not a legal phase");
  }
  std::vector<NodePair> pairs;
  for (NodeId x : adjacency(g1)) {
    for (NodeId y : adjacency(g2)) {
      if (x == y || adjacent(x, y)) continue;
      NodePair pair(x, y);
      if (std::find(pairs.begin(), pairs.end(), pair) == pairs.end()) pairs.push_back(pair);
    }
  }
  return pairs;
}

std::vector<NodePair> candidate_pairs(const NodePair& current) {
  return candidate_pairs(current.first(), current.second());
}

NodePair select_next_phase(std::span<const NodePair> pairs, const LoadVector& loads) {
  if (pairs.empty()) throw ContractViolation("select_next_phase needs at least one candidate");
  const NodePair* best = &pairs.front();
  double best_sum = loads[best->first()] + loads[best->second()];
  for (const NodePair& pair : pairs.subspan(1)) {
    const double sum = loads[pair.first()] + loads[pair.second()];
    if (sum > best_sum || (sum == best_sum && pair < *best)) {
      best = &pair;
      best_sum = sum;
    }
  }
  return *best;
}

namespace {

// Green demanded by one elected direction, or nullopt when its denominator is zero.
std::optional<double> side_green(const QueueSnapshot& q, const NodePair& current, NodeId elected,
                                 const TimingConfig& cfg) {
  auto confirmed_queue = [&](NodeId n) {
    return q.confirmed[index_of(n)] ? static_cast<double>(q.queued[index_of(n)]) : 0.0;
  };
  double crossing = 0.0;
  for (NodeId n : adjacency(elected)) {
    if (!current.contains(n)) crossing += confirmed_queue(n);
  }
  double numerator = 0.0;
  double denominator = 0.0;
  if (cfg.denominator == DenominatorRule::OwnQueueIncluded) {
    numerator = confirmed_queue(elected);
    denominator = numerator + crossing;
  } else {
    numerator = static_cast<double>(q.queued[index_of(elected)]);
    denominator = crossing;
  }
  if (!(denominator > 0.0)) return std::nullopt;
  return numerator / denominator * cfg.full_cycle_s;
}

}  // namespace

PhaseTimeBreakdown next_phase_time_breakdown(const QueueSnapshot& queues, const NodePair& current,
                                             const NodePair& next, const TimingConfig& cfg) {
  if (!is_legal_phase(current) || !is_legal_phase(next)) {
    throw ContractViolation("next_phase_time needs legal current and next phases");
  }
  const double a = side_green(queues, current, next.first(), cfg).value_or(cfg.min_green_s);
  const double b = side_green(queues, current, next.second(), cfg).value_or(cfg.min_green_s);
  double combined = 0.0;
  switch (cfg.aggregation) {
    case Aggregation::Min: combined = std::min(a, b); break;
    case Aggregation::Avg: combined = (a + b) / 2.0; break;
    case Aggregation::Max: combined = std::max(a, b); break;
  }
  return {a, b, std::clamp(combined, cfg.min_green_s, cfg.full_cycle_s)};
}

double next_phase_time(const QueueSnapshot& queues, const NodePair& current, const NodePair& next,
                       const TimingConfig& cfg) {
  return next_phase_time_breakdown(queues, current, next, cfg).green_s;
}

PhasePlan plan_next_phase(const NodePair& current, const RoadMatrix& matrix, const TimingConfig& timing,
                          const LoadWeights& weights) {
  const LoadVector loads = compute_loads(matrix, weights);
  const auto pairs = candidate_pairs(current);
  const NodePair next = select_next_phase(pairs, loads);
  return {next, next_phase_time(QueueSnapshot::from_matrix(matrix), current, next, timing)};
}

}  // namespace tlc
