#include "cochange/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace cochange {

std::optional<VertexId> CoChangeGraph::find_vertex(const ClassId& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

Weight CoChangeGraph::weight_between(VertexId a, VertexId b) const {
  const auto& list = adj_[a];
  auto it = std::lower_bound(list.begin(), list.end(), b,
                             [](const Neighbor& n, VertexId v) { return n.vertex < v; });
  if (it == list.end() || it->vertex != b) return 0;
  return it->weight;
}

void GraphBuilder::add_vertex(const ClassId& name) {
  adjacency_.try_emplace(name);
}

void GraphBuilder::add_edge(const ClassId& a, const ClassId& b, Weight weight) {
  if (a == b) throw std::invalid_argument("self-loop on '" + a.fqn + "'");
  if (weight < 1) throw std::invalid_argument("edge weight must be positive");
  adjacency_[a][b] += weight;
  adjacency_[b][a] += weight;
}

CoChangeGraph GraphBuilder::build() const {
  CoChangeGraph graph;
  graph.names_.reserve(adjacency_.size());
  for (const auto& [name, _] : adjacency_) graph.names_.push_back(name);

  auto id_of = [&](const ClassId& name) {
    return static_cast<VertexId>(
        std::lower_bound(graph.names_.begin(), graph.names_.end(), name) - graph.names_.begin());
  };

  graph.adj_.resize(graph.names_.size());
  std::size_t directed_edges = 0;
  for (const auto& [name, neighbors] : adjacency_) {
    auto& list = graph.adj_[id_of(name)];
    list.reserve(neighbors.size());
    for (const auto& [other, weight] : neighbors) {
      list.push_back(CoChangeGraph::Neighbor{id_of(other), weight});
    }
    // keys are sorted by ClassId, which is the same order as vertex ids
    directed_edges += list.size();
  }
  graph.edge_count_ = directed_edges / 2;
  return graph;
}

CoChangeGraph build_graph(std::span<const ChangeSet> changesets) {
  GraphBuilder builder;
  for (const ChangeSet& cs : changesets) {
    for (const ClassId& id : cs.classes) builder.add_vertex(id);
    for (std::size_t i = 0; i < cs.classes.size(); ++i) {
      for (std::size_t j = i + 1; j < cs.classes.size(); ++j) {
        builder.add_edge(cs.classes[i], cs.classes[j], 1);
      }
    }
  }
  return builder.build();
}

CoChangeGraph prune_edges(const CoChangeGraph& graph, Weight min_weight) {
  if (min_weight < 1) throw std::invalid_argument("min_weight must be >= 1");
  GraphBuilder builder;
  graph.for_each_edge([&](VertexId a, VertexId b, Weight w) {
    if (w >= min_weight) {
      builder.add_edge(graph.vertex_name(a), graph.vertex_name(b), w);
    }
  });
  // only edge endpoints become vertices, so isolated vertices are gone
  return builder.build();
}

GraphStats graph_stats(const CoChangeGraph& graph) {
  GraphStats stats;
  stats.vertex_count = graph.vertex_count();
  stats.edge_count = graph.edge_count();
  if (stats.vertex_count >= 2) {
    stats.density = 2.0 * static_cast<double>(stats.edge_count) /
                    (static_cast<double>(stats.vertex_count) *
                     static_cast<double>(stats.vertex_count - 1));
  }
  return stats;
}

CoChangeGraph induced_subgraph(const CoChangeGraph& graph, std::span<const VertexId> keep,
                               bool drop_edgeless) {
  std::unordered_set<VertexId> kept(keep.begin(), keep.end());
  GraphBuilder builder;
  if (!drop_edgeless) {
    for (VertexId v : keep) builder.add_vertex(graph.vertex_name(v));
  }
  graph.for_each_edge([&](VertexId a, VertexId b, Weight w) {
    if (kept.contains(a) && kept.contains(b)) {
      builder.add_edge(graph.vertex_name(a), graph.vertex_name(b), w);
    }
  });
  return builder.build();
}

bool is_connected_subgraph(const CoChangeGraph& graph, std::span<const VertexId> members) {
  if (members.size() <= 1) return true;
  std::unordered_set<VertexId> member_set(members.begin(), members.end());
  std::vector<VertexId> stack{members.front()};
  std::unordered_set<VertexId> visited{members.front()};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const auto& n : graph.neighbors(v)) {
      if (member_set.contains(n.vertex) && visited.insert(n.vertex).second) {
        stack.push_back(n.vertex);
      }
    }
  }
  return visited.size() == members.size();
}

}  // namespace cochange
