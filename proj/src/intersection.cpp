#include "tlc/intersection.hpp"

#include <algorithm>
#include <stdexcept>

namespace tlc {
namespace {

using enum NodeId;

constexpr std::array<std::array<NodeId, 4>, kNodeCount> kConflicts = {{
    {C, F, G, H},  // A
    {C, D, E, H},  // B
    {A, B, E, H},  // C
    {B, E, F, G},  // D
    {B, C, D, G},  // E
    {A, D, G, H},  // F
    {A, D, E, F},  // G
    {A, B, C, F},  // H
}};

constexpr std::array<int, kNodeCount> kDirectionIndex = {1, 2, 4, 5, 7, 8, 10, 11};

constexpr bool table_contains(NodeId row, NodeId value) {
  for (NodeId n : kConflicts[static_cast<std::size_t>(row)]) {
    if (n == value) return true;
  }
  return false;
}

constexpr bool table_is_well_formed() {
  std::size_t non_adjacent_pairs = 0;
  for (std::size_t x = 0; x < kNodeCount; ++x) {
    const auto nx = static_cast<NodeId>(x);
    if (table_contains(nx, nx)) return false;
    std::size_t degree = 0;
    for (std::size_t y = 0; y < kNodeCount; ++y) {
      const auto ny = static_cast<NodeId>(y);
      if (table_contains(nx, ny) != table_contains(ny, nx)) return false;
      if (table_contains(nx, ny)) ++degree;
      if (x < y && !table_contains(nx, ny)) ++non_adjacent_pairs;
    }
    if (degree != 4) return false;
  }
  return non_adjacent_pairs == 12;
}

static_assert(table_is_well_formed(), "conflict table must be symmetric, irreflexive and 4-regular");

}  // namespace

char to_letter(NodeId node) { return static_cast<char>('A' + index_of(node)); }

std::optional<NodeId> node_from_letter(char letter) {
  if (letter >= 'a' && letter <= 'h') letter = static_cast<char>(letter - 'a' + 'A');
  if (letter < 'A' || letter > 'H') return std::nullopt;
  return static_cast<NodeId>(letter - 'A');
}

int to_direction_index(NodeId node) { return kDirectionIndex[index_of(node)]; }

std::optional<NodeId> node_from_direction(int direction_index) {
  for (std::size_t i = 0; i < kNodeCount; ++i) {
    if (kDirectionIndex[i] == direction_index) return static_cast<NodeId>(i);
  }
  return std::nullopt;
}

bool is_slip_lane(int direction_index) {
  return direction_index >= 3 && direction_index <= 12 && direction_index % 3 == 0;
}

NodePair::NodePair(NodeId x, NodeId y) : first_(std::min(x, y)), second_(std::max(x, y)) {
  if (x == y) throw std::invalid_argument("a phase pair needs two distinct nodes");
}

std::string NodePair::to_string() const { return {to_letter(first_), to_letter(second_)}; }

std::optional<NodePair> NodePair::parse(std::string_view text) {
  if (text.size() != 2) return std::nullopt;
  auto x = node_from_letter(text[0]);
  auto y = node_from_letter(text[1]);
  if (!x || !y || *x == *y) return std::nullopt;
  return NodePair(*x, *y);
}

const std::array<NodeId, 4>& adjacency(NodeId node) { return kConflicts[index_of(node)]; }

bool adjacent(NodeId x, NodeId y) { return table_contains(x, y); }

bool compatible(NodeId x, NodeId y) { return x != y && !adjacent(x, y); }

bool is_legal_phase(const NodePair& pair) { return compatible(pair.first(), pair.second()); }

std::vector<NodePair> enumerate_phases() {
  std::vector<NodePair> phases;
  for (NodeId x : kAllNodes) {
    for (NodeId y : kAllNodes) {
      if (x < y && compatible(x, y)) phases.emplace_back(x, y);
    }
  }
  return phases;
}

}  // namespace tlc
