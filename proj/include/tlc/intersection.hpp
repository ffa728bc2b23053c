#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tlc {

// The eight signalized movements of a four-leg intersection. Declaration
// order is the tie-breaking order used everywhere (A < B < ... < H).
enum class NodeId : std::uint8_t { A, B, C, D, E, F, G, H };

inline constexpr std::size_t kNodeCount = 8;

inline constexpr std::array<NodeId, kNodeCount> kAllNodes = {
    NodeId::A, NodeId::B, NodeId::C, NodeId::D,
    NodeId::E, NodeId::F, NodeId::G, NodeId::H};

constexpr std::size_t index_of(NodeId node) { return static_cast<std::size_t>(node); }

char to_letter(NodeId node);
std::optional<NodeId> node_from_letter(char letter);

// Direction indices 1,2,4,5,7,8,10,11 are signalized; 3,6,9,12 are slip lanes.
int to_direction_index(NodeId node);
std::optional<NodeId> node_from_direction(int direction_index);
bool is_slip_lane(int direction_index);

// Unordered pair of distinct nodes, stored with first < second.
class NodePair {
 public:
  NodePair(NodeId x, NodeId y);

  NodeId first() const { return first_; }
  NodeId second() const { return second_; }
  bool contains(NodeId node) const { return node == first_ || node == second_; }
  std::string to_string() const;

  // Parses two letters, e.g. "GC" (orientation is ignored).
  static std::optional<NodePair> parse(std::string_view text);

  friend auto operator<=>(const NodePair&, const NodePair&) = default;

 private:
  NodeId first_;
  NodeId second_;
};

// Fixed conflict table: each movement lists the four movements whose paths
// cross it. Symmetry, irreflexivity and 4-regularity are checked at compile time.
const std::array<NodeId, 4>& adjacency(NodeId node);

bool adjacent(NodeId x, NodeId y);

// True when x and y may be green together.
bool compatible(NodeId x, NodeId y);
bool is_legal_phase(const NodePair& pair);

// All 12 compatible pairs, sorted by (first, second).
std::vector<NodePair> enumerate_phases();

}  // namespace tlc
