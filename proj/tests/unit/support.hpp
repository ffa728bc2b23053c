#pragma once

#include <array>
#include <random>

#include "tlc/controller.hpp"
#include "tlc/load.hpp"

namespace testing_support {

// Matrix with every nonzero queue confirmed, in direction order A..H.
inline tlc::RoadMatrix queues_matrix(const std::array<int, tlc::kNodeCount>& q) {
  tlc::RoadMatrix m;
  for (tlc::NodeId n : tlc::kAllNodes) {
    tlc::DirectionState s;
    s.queued = q[tlc::index_of(n)];
    s.first_confirmed = s.queued > 0;
    s.occupancy = std::min(1.0, s.queued / 30.0);
    m.emplace(n, s);
  }
  return m;
}

// Queues left right after an emergency was served on A and B.
inline tlc::RoadMatrix post_emergency_matrix() { return queues_matrix({0, 0, 100, 100, 75, 75, 50, 50}); }

// Random state satisfying the DirectionState invariants within the default caps.
inline tlc::DirectionState random_state(std::mt19937_64& rng, bool allow_emergency = true) {
  std::uniform_int_distribution<int> q(0, 200);
  std::uniform_real_distribution<double> w(0.0, 3600.0);
  std::bernoulli_distribution coin(0.5);
  tlc::DirectionState s;
  s.first_confirmed = coin(rng);
  if (s.first_confirmed) {
    s.queued = q(rng);
    s.first_wait_s = w(rng);
  }
  s.occupancy = std::min(1.0, s.queued / 30.0);
  s.back_queue = q(rng);
  s.downstream_count = q(rng);
  if (allow_emergency && std::bernoulli_distribution(0.1)(rng)) {
    s.on_duty = true;
    s.priority = std::uniform_int_distribution<int>(1, 3)(rng);
  }
  return s;
}

inline tlc::RoadMatrix random_matrix(std::mt19937_64& rng, bool allow_emergency = true) {
  tlc::RoadMatrix m;
  for (tlc::NodeId n : tlc::kAllNodes) m.emplace(n, random_state(rng, allow_emergency));
  return m;
}

}  // namespace testing_support
