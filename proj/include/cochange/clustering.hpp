#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cochange/graph.hpp"

namespace cochange {

// A retrieved dense subgraph; the unit of the modularity assessment.
struct CoChangeCluster {
  int cluster_id = 0;
  std::vector<ClassId> members;  // sorted, unique

  std::size_t size() const { return members.size(); }
};

struct ClusteringConfig {
  std::size_t min_cluster_size = 4;
  std::size_t knn_k = 10;
  std::optional<std::size_t> initial_partitions;  // nullopt selects the auto formula
  double alpha = 2.0;              // exponent on relative closeness in the merge score
  double merge_threshold = 0.0;    // merge while some pair scores strictly above this
  std::uint64_t seed = 0;
  std::size_t max_recluster_iterations = 10;
};

// Throws UsageError when a field is out of its documented range.
void validate(const ClusteringConfig& config);

// The auto partition count: max(2, ceil(V / min_cluster_size)), capped at V/2.
std::size_t resolve_partition_count(std::size_t vertex_count, const ClusteringConfig& config);

// Keeps edge (a, b) iff b is among a's k heaviest neighbors or vice versa.
// Weights and the vertex set are preserved.
CoChangeGraph knn_sparsify(const CoChangeGraph& graph, std::size_t k);

// Splits the graph into `target_count` disjoint parts covering all vertices
// by recursive minimum-weight bisection, always splitting the largest part
// next, stopping early when every part is a single vertex.
std::vector<CoChangeCluster> partition_phase(const CoChangeGraph& graph,
                                             std::size_t target_count, std::uint64_t seed);

// Merge criteria: inter-cluster edge mass and mean edge weight, each
// normalized by the clusters' own min-cut bisections. Both are symmetric,
// zero when no edge joins the clusters, and +infinity when inter-cluster
// edges exist but both internal bisections are free (singleton or
// disconnected clusters).
double relative_interconnectivity(const CoChangeCluster& c1, const CoChangeCluster& c2,
                                  const CoChangeGraph& graph, std::uint64_t seed = 0);
double relative_closeness(const CoChangeCluster& c1, const CoChangeCluster& c2,
                          const CoChangeGraph& graph, std::uint64_t seed = 0);

// Greedy merging of the best pair by RI * RC^alpha while some pair scores
// strictly above the threshold. Ties prefer the smaller merged cluster, then
// the lexicographically smallest member fqn.
std::vector<CoChangeCluster> agglomerate(std::vector<CoChangeCluster> subclusters,
                                         const CoChangeGraph& graph,
                                         const ClusteringConfig& config);

// Full retrieval over a pruned graph: sparsify, partition, agglomerate, then
// discard clusters under min_cluster_size and re-run on the surviving
// vertices until nothing is discarded (or the iteration cap is hit). Final
// clusters are labeled 1..n by decreasing size, then smallest member.
std::vector<CoChangeCluster> retrieve_cochange_clusters(const CoChangeGraph& pruned_graph,
                                                        const ClusteringConfig& config);

}  // namespace cochange
