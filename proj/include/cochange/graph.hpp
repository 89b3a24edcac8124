#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cochange/class_id.hpp"
#include "cochange/history.hpp"

namespace cochange {

using Weight = std::int64_t;
using VertexId = std::uint32_t;

// Weighted undirected graph over classes. Vertices are kept sorted by fqn so
// that vertex ids are stable for a given vertex set; adjacency lists are
// sorted by neighbor id. No self-loops, all weights >= 1.
class CoChangeGraph {
public:
  struct Neighbor {
    VertexId vertex;
    Weight weight;
  };

  CoChangeGraph() = default;

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const ClassId& vertex_name(VertexId v) const { return names_[v]; }
  const std::vector<ClassId>& vertex_names() const { return names_; }
  std::optional<VertexId> find_vertex(const ClassId& name) const;

  std::span<const Neighbor> neighbors(VertexId v) const { return adj_[v]; }
  std::size_t degree(VertexId v) const { return adj_[v].size(); }

  // 0 when the vertices are not adjacent.
  Weight weight_between(VertexId a, VertexId b) const;

  // Visits every edge once as (a, b, weight) with a < b, in ascending order.
  template <class Fn>
  void for_each_edge(Fn&& fn) const {
    for (VertexId a = 0; a < adj_.size(); ++a) {
      for (const Neighbor& n : adj_[a]) {
        if (n.vertex > a) fn(a, n.vertex, n.weight);
      }
    }
  }

private:
  friend class GraphBuilder;
  std::vector<ClassId> names_;                 // ascending
  std::vector<std::vector<Neighbor>> adj_;     // each ascending by vertex id
  std::size_t edge_count_ = 0;
};

// Accumulates vertices and edge weights; duplicate edges add up.
class GraphBuilder {
public:
  void add_vertex(const ClassId& name);
  void add_edge(const ClassId& a, const ClassId& b, Weight weight);
  CoChangeGraph build() const;

private:
  std::map<ClassId, std::map<ClassId, Weight>> adjacency_;  // both directions
};

struct GraphStats {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  double density = 0.0;  // 2E / V(V-1), 0 when V < 2
};

// Vertices are the union of all change set classes; the weight of (a, b)
// counts the change sets containing both.
CoChangeGraph build_graph(std::span<const ChangeSet> changesets);

// Drops edges below min_weight, then vertices left without any incident edge.
CoChangeGraph prune_edges(const CoChangeGraph& graph, Weight min_weight);

GraphStats graph_stats(const CoChangeGraph& graph);

// Subgraph induced by `keep` (vertex ids of `graph`). With drop_edgeless,
// vertices that end up isolated are removed as well, matching prune_edges.
CoChangeGraph induced_subgraph(const CoChangeGraph& graph, std::span<const VertexId> keep,
                               bool drop_edgeless);

// True when the subgraph induced by `members` is connected. Empty and
// singleton member sets count as connected.
bool is_connected_subgraph(const CoChangeGraph& graph, std::span<const VertexId> members);

}  // namespace cochange
