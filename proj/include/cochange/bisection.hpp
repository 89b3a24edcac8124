#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cochange/graph.hpp"

namespace cochange {

// A balanced two-way split of a vertex subset: side 0 holds floor(n/2)
// members, side 1 the rest. side[i] corresponds to members[i].
struct BisectionCut {
  Weight cut_weight = 0;
  std::size_t cut_edge_count = 0;
  std::vector<std::uint8_t> side;
};

// Minimum-weight balanced bisection of the subgraph induced by `members`.
// Subsets up to kExactBisectionLimit vertices are solved by exhaustive
// enumeration; larger ones by Kernighan-Lin style pair-swap refinement over
// several deterministic restarts. The result is deterministic for a fixed
// member list and seed; member sets of size < 2 yield an empty cut.
inline constexpr std::size_t kExactBisectionLimit = 16;

BisectionCut min_weight_bisection(const CoChangeGraph& graph, std::span<const VertexId> members,
                                  std::uint64_t seed);

}  // namespace cochange
