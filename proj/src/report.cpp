#include "cochange/report.hpp"

#include <algorithm>
#include <unordered_set>

#include "cochange/errors.hpp"

namespace cochange {

const std::array<std::string_view, 24> kClusterPalette = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1f77b4", "#aec7e8",
    "#ffbb78", "#98df8a", "#d62728", "#c5b0d5", "#8c564b", "#c49c94",
    "#e377c2", "#f7b6d2", "#7f7f7f", "#c7c7c7", "#bcbd22", "#17becf",
};

std::string_view cluster_color(int cluster_id) {
  std::size_t index = static_cast<std::size_t>(cluster_id - 1) % kClusterPalette.size();
  return kClusterPalette[index];
}

DistributionMapModel build_distribution_map(std::span<const CoChangeCluster> clusters,
                                            const PackageStructure& structure,
                                            std::span<const ClusterMetrics> per_cluster) {
  std::unordered_set<int> metric_ids;
  for (const ClusterMetrics& m : per_cluster) metric_ids.insert(m.cluster_id);

  // class -> owning cluster
  std::map<ClassId, int> cluster_of;
  for (const CoChangeCluster& cluster : clusters) {
    if (!metric_ids.contains(cluster.cluster_id))
      throw ConsistencyError("distribution map: cluster " + std::to_string(cluster.cluster_id) +
                             " has no metrics row");
    for (const ClassId& member : cluster.members) cluster_of[member] = cluster.cluster_id;
  }

  std::size_t placed = 0;
  DistributionMapModel model;
  for (const auto& [name, members] : structure.packages) {
    MapPackage package;
    package.name = name;
    for (const ClassId& member : members) {
      auto it = cluster_of.find(member);
      if (it == cluster_of.end())
        throw ConsistencyError("distribution map: '" + member.fqn + "' is in no cluster");
      int id = it->second;
      package.cells.push_back(MapCell{member, id, static_cast<int>((id - 1) % static_cast<int>(kClusterPalette.size()))});
      ++placed;
    }
    std::sort(package.cells.begin(), package.cells.end(), [](const MapCell& a, const MapCell& b) {
      if (a.cluster_id != b.cluster_id) return a.cluster_id < b.cluster_id;
      return a.class_id < b.class_id;
    });
    model.packages.push_back(std::move(package));
  }

  if (placed != cluster_of.size())
    throw ConsistencyError("distribution map: some clustered classes are in no package");

  std::sort(model.packages.begin(), model.packages.end(),
            [](const MapPackage& a, const MapPackage& b) {
              if (a.cells.size() != b.cells.size()) return a.cells.size() > b.cells.size();
              return a.name < b.name;
            });

  for (const CoChangeCluster& cluster : clusters) {
    model.legend.emplace_back(cluster.cluster_id, std::string(cluster_color(cluster.cluster_id)));
  }
  std::sort(model.legend.begin(), model.legend.end());
  return model;
}

std::string render_graph_edges(const CoChangeGraph& graph) {
  std::string out;
  graph.for_each_edge([&](VertexId a, VertexId b, Weight w) {
    // vertex ids ascend with fqns, so iteration order is already sorted
    out += graph.vertex_name(a).fqn;
    out += '\t';
    out += graph.vertex_name(b).fqn;
    out += '\t';
    out += std::to_string(w);
    out += '\n';
  });
  return out;
}

}  // namespace cochange
