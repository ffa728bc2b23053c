#include "tlc/load.hpp"

#include <algorithm>
#include <cmath>

#include "tlc/error.hpp"

namespace tlc {

std::string validate(const DirectionState& s) {
  if (s.queued < 0 || s.priority < 0 || s.back_queue < 0 || s.downstream_count < 0) {
    return "counts must be nonnegative";
  }
  if (!(s.occupancy >= 0.0 && s.occupancy <= 1.0)) return "occupancy must lie in [0,1]";
  if (!(s.first_wait_s >= 0.0) || !std::isfinite(s.first_wait_s)) {
    return "first-vehicle wait must be finite and nonnegative";
  }
  if (!s.first_confirmed && (s.queued != 0 || s.first_wait_s != 0.0)) {
    return "unconfirmed first vehicle implies an empty confirmed queue";
  }
  if (s.on_duty && s.priority <= 0) return "an on-duty special vehicle needs a priority class";
  return {};
}

void check_emergency_dominance(const LoadWeights& w, const LoadCaps& caps) {
  for (double v : {w.queued, w.occupancy, w.wait, w.back_queue, w.downstream, w.emergency}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("weights must be finite and nonnegative", "weights");
  }
  // The downstream term is subtracted from the on-duty side, so it counts too.
  const double wait_cap = w.wait_cap_s ? std::min(*w.wait_cap_s, caps.max_wait_s) : caps.max_wait_s;
  const double rest = w.queued * caps.max_queue + w.occupancy + w.wait * wait_cap +
                      w.back_queue * caps.max_queue + w.downstream * caps.max_queue;
  if (!(w.emergency > rest)) {
    throw ConfigError("emergency weight " + std::to_string(w.emergency) +
                          " must exceed the combined non-emergency maximum " + std::to_string(rest),
                      "weights.emergency");
  }
}

double direction_load(const DirectionState& s, const LoadWeights& w) {
  double wait = s.first_wait_s;
  if (w.wait_cap_s) wait = std::min(wait, *w.wait_cap_s);
  const double gate = s.first_confirmed ? 1.0 : 0.0;
  const double load = gate * (w.queued * s.queued + w.occupancy * s.occupancy + w.wait * wait) +
                      w.back_queue * s.back_queue - w.downstream * s.downstream_count +
                      w.emergency * s.priority * (s.on_duty ? 1.0 : 0.0);
  return std::max(0.0, load);
}

LoadVector compute_loads(const RoadMatrix& states, const LoadWeights& weights) {
  LoadVector loads;
  for (NodeId node : kAllNodes) {
    auto it = states.find(node);
    if (it == states.end()) {
      throw ConfigError("road status missing for node " + std::string(1, to_letter(node)), "matrix");
    }
    loads[node] = direction_load(it->second, weights);
  }
  return loads;
}

}  // namespace tlc
