#include "cochange/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "cochange/bisection.hpp"
#include "cochange/errors.hpp"

namespace cochange {

void validate(const ClusteringConfig& config) {
  if (config.min_cluster_size < 2) throw UsageError("min_cluster_size must be >= 2");
  if (config.knn_k < 1) throw UsageError("knn_k must be >= 1");
  if (config.initial_partitions && *config.initial_partitions < 1)
    throw UsageError("initial_partitions must be >= 1");
  if (!(config.alpha > 0.0)) throw UsageError("alpha must be > 0");
  if (config.merge_threshold < 0.0) throw UsageError("merge_threshold must be >= 0");
  if (config.max_recluster_iterations < 1)
    throw UsageError("max_recluster_iterations must be >= 1");
}

std::size_t resolve_partition_count(std::size_t vertex_count, const ClusteringConfig& config) {
  if (config.initial_partitions) return std::min(*config.initial_partitions, std::max<std::size_t>(vertex_count, 1));
  std::size_t want = std::max<std::size_t>(
      2, (vertex_count + config.min_cluster_size - 1) / config.min_cluster_size);
  std::size_t cap = std::max<std::size_t>(1, vertex_count / 2);
  return std::min(want, cap);
}

CoChangeGraph knn_sparsify(const CoChangeGraph& graph, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");

  std::set<std::pair<VertexId, VertexId>> kept;
  std::vector<CoChangeGraph::Neighbor> ranked;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    auto neighbors = graph.neighbors(v);
    ranked.assign(neighbors.begin(), neighbors.end());
    std::sort(ranked.begin(), ranked.end(),
              [](const CoChangeGraph::Neighbor& a, const CoChangeGraph::Neighbor& b) {
                if (a.weight != b.weight) return a.weight > b.weight;
                return a.vertex < b.vertex;
              });
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
      kept.emplace(std::min(v, ranked[i].vertex), std::max(v, ranked[i].vertex));
    }
  }

  GraphBuilder builder;
  for (const ClassId& name : graph.vertex_names()) builder.add_vertex(name);
  for (const auto& [a, b] : kept) {
    builder.add_edge(graph.vertex_name(a), graph.vertex_name(b), graph.weight_between(a, b));
  }
  return builder.build();
}

namespace {

std::uint64_t fnv1a(std::uint64_t seed, std::string_view text) {
  std::uint64_t h = seed ^ 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t subgraph_seed(const CoChangeGraph& graph, std::span<const VertexId> members,
                            std::uint64_t seed) {
  std::uint64_t h = seed;
  for (VertexId v : members) h = fnv1a(h, graph.vertex_name(v).fqn);
  return h;
}

// EC(c) and the mean weight of the edges it cuts; both zero for singleton or
// disconnected clusters, where a bisection is not meaningful.
struct ClusterCutStats {
  Weight ec = 0;
  double mean_cut_weight = 0.0;
};

ClusterCutStats cluster_cut_stats(const CoChangeGraph& graph, std::span<const VertexId> members,
                                  std::uint64_t seed) {
  ClusterCutStats stats;
  if (members.size() < 2) return stats;
  if (!is_connected_subgraph(graph, members)) return stats;
  BisectionCut cut = min_weight_bisection(graph, members, subgraph_seed(graph, members, seed));
  stats.ec = cut.cut_weight;
  stats.mean_cut_weight =
      cut.cut_edge_count == 0 ? 0.0
                              : static_cast<double>(cut.cut_weight) /
                                    static_cast<double>(cut.cut_edge_count);
  return stats;
}

struct InterStats {
  Weight total = 0;
  std::size_t edges = 0;

  double mean() const { return edges == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(edges); }
};

InterStats inter_cluster_stats(const CoChangeGraph& graph, std::span<const VertexId> a,
                               std::span<const VertexId> b) {
  std::unordered_set<VertexId> b_set(b.begin(), b.end());
  InterStats stats;
  for (VertexId v : a) {
    for (const auto& n : graph.neighbors(v)) {
      if (b_set.contains(n.vertex)) {
        stats.total += n.weight;
        ++stats.edges;
      }
    }
  }
  return stats;
}

double ratio_or_limits(double numerator, double denominator) {
  if (denominator > 0.0) return numerator / denominator;
  return numerator > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

double interconnectivity_from(const InterStats& inter, const ClusterCutStats& s1,
                              const ClusterCutStats& s2) {
  if (inter.total == 0) return 0.0;
  double denom = (static_cast<double>(s1.ec) + static_cast<double>(s2.ec)) / 2.0;
  return ratio_or_limits(static_cast<double>(inter.total), denom);
}

double closeness_from(const InterStats& inter, const ClusterCutStats& s1,
                      const ClusterCutStats& s2, std::size_t n1, std::size_t n2) {
  if (inter.edges == 0) return 0.0;
  double total = static_cast<double>(n1 + n2);
  double denom = (static_cast<double>(n1) / total) * s1.mean_cut_weight +
                 (static_cast<double>(n2) / total) * s2.mean_cut_weight;
  return ratio_or_limits(inter.mean(), denom);
}

double merge_score(const InterStats& inter, const ClusterCutStats& s1, const ClusterCutStats& s2,
                   std::size_t n1, std::size_t n2, double alpha) {
  if (inter.total == 0) return 0.0;
  double ri = interconnectivity_from(inter, s1, s2);
  double rc = closeness_from(inter, s1, s2, n1, n2);
  return ri * std::pow(rc, alpha);
}

std::vector<VertexId> to_vertex_ids(const CoChangeCluster& cluster, const CoChangeGraph& graph,
                                    const char* what) {
  if (cluster.members.empty())
    throw std::invalid_argument(std::string(what) + ": cluster must be non-empty");
  std::vector<VertexId> ids;
  ids.reserve(cluster.members.size());
  for (const ClassId& m : cluster.members) {
    auto v = graph.find_vertex(m);
    if (!v) throw std::invalid_argument(std::string(what) + ": '" + m.fqn + "' is not a graph vertex");
    ids.push_back(*v);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument(std::string(what) + ": duplicate cluster member");
  return ids;
}

void check_disjoint(std::span<const VertexId> a, std::span<const VertexId> b, const char* what) {
  // both sorted
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) throw std::invalid_argument(std::string(what) + ": clusters overlap");
    if (a[i] < b[j]) ++i;
    else ++j;
  }
}

CoChangeCluster make_cluster(const CoChangeGraph& graph, std::span<const VertexId> ids) {
  CoChangeCluster cluster;
  cluster.members.reserve(ids.size());
  for (VertexId v : ids) cluster.members.push_back(graph.vertex_name(v));
  std::sort(cluster.members.begin(), cluster.members.end());
  return cluster;
}

}  // namespace

std::vector<CoChangeCluster> partition_phase(const CoChangeGraph& graph,
                                             std::size_t target_count, std::uint64_t seed) {
  if (target_count < 1) throw std::invalid_argument("target_count must be >= 1");

  std::vector<std::vector<VertexId>> parts;
  if (graph.vertex_count() > 0) {
    std::vector<VertexId> all(graph.vertex_count());
    for (VertexId v = 0; v < graph.vertex_count(); ++v) all[v] = v;
    parts.push_back(std::move(all));
  }

  while (parts.size() < target_count) {
    // split the largest part next; ties go to the lexicographically smallest member
    std::size_t pick = parts.size();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].size() < 2) continue;
      if (pick == parts.size() || parts[i].size() > parts[pick].size() ||
          (parts[i].size() == parts[pick].size() &&
           graph.vertex_name(parts[i].front()) < graph.vertex_name(parts[pick].front()))) {
        pick = i;
      }
    }
    if (pick == parts.size()) break;  // every part is a single vertex

    std::vector<VertexId> part = std::move(parts[pick]);
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(pick));
    BisectionCut cut = min_weight_bisection(graph, part, subgraph_seed(graph, part, seed));
    std::vector<VertexId> lo, hi;
    for (std::size_t i = 0; i < part.size(); ++i) {
      (cut.side[i] == 0 ? lo : hi).push_back(part[i]);
    }
    parts.push_back(std::move(lo));
    parts.push_back(std::move(hi));
  }

  std::sort(parts.begin(), parts.end(),
            [&](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
              return graph.vertex_name(a.front()) < graph.vertex_name(b.front());
            });

  std::vector<CoChangeCluster> clusters;
  clusters.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    CoChangeCluster cluster = make_cluster(graph, parts[i]);
    cluster.cluster_id = static_cast<int>(i) + 1;
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

double relative_interconnectivity(const CoChangeCluster& c1, const CoChangeCluster& c2,
                                  const CoChangeGraph& graph, std::uint64_t seed) {
  std::vector<VertexId> a = to_vertex_ids(c1, graph, "relative_interconnectivity");
  std::vector<VertexId> b = to_vertex_ids(c2, graph, "relative_interconnectivity");
  check_disjoint(a, b, "relative_interconnectivity");
  return interconnectivity_from(inter_cluster_stats(graph, a, b),
                                cluster_cut_stats(graph, a, seed),
                                cluster_cut_stats(graph, b, seed));
}

double relative_closeness(const CoChangeCluster& c1, const CoChangeCluster& c2,
                          const CoChangeGraph& graph, std::uint64_t seed) {
  std::vector<VertexId> a = to_vertex_ids(c1, graph, "relative_closeness");
  std::vector<VertexId> b = to_vertex_ids(c2, graph, "relative_closeness");
  check_disjoint(a, b, "relative_closeness");
  return closeness_from(inter_cluster_stats(graph, a, b), cluster_cut_stats(graph, a, seed),
                        cluster_cut_stats(graph, b, seed), a.size(), b.size());
}

std::vector<CoChangeCluster> agglomerate(std::vector<CoChangeCluster> subclusters,
                                         const CoChangeGraph& graph,
                                         const ClusteringConfig& config) {
  struct Node {
    std::vector<VertexId> members;  // sorted
    ClusterCutStats stats;
    bool alive = true;
  };

  std::vector<Node> nodes;
  nodes.reserve(subclusters.size());
  for (const CoChangeCluster& cluster : subclusters) {
    Node node;
    node.members = to_vertex_ids(cluster, graph, "agglomerate");
    nodes.push_back(std::move(node));
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      check_disjoint(nodes[i].members, nodes[j].members, "agglomerate");
    }
  }
  for (Node& node : nodes) {
    node.stats = cluster_cut_stats(graph, node.members, config.seed);
  }

  // inter-cluster totals are additive under merges, so keep a full matrix
  std::size_t n = nodes.size();
  std::vector<InterStats> inter(n * n);
  auto at = [&](std::size_t i, std::size_t j) -> InterStats& { return inter[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      at(i, j) = at(j, i) = inter_cluster_stats(graph, nodes[i].members, nodes[j].members);
    }
  }

  auto smallest_fqn = [&](const Node& node) -> const std::string& {
    return graph.vertex_name(node.members.front()).fqn;
  };

  while (true) {
    std::size_t best_i = n, best_j = n;
    double best_score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!nodes[i].alive) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!nodes[j].alive) continue;
        double score = merge_score(at(i, j), nodes[i].stats, nodes[j].stats,
                                   nodes[i].members.size(), nodes[j].members.size(),
                                   config.alpha);
        if (!(score > config.merge_threshold)) continue;

        bool better = false;
        if (best_i == n || score > best_score) {
          better = true;
        } else if (score == best_score) {
          std::size_t size = nodes[i].members.size() + nodes[j].members.size();
          std::size_t best_size = nodes[best_i].members.size() + nodes[best_j].members.size();
          if (size != best_size) {
            better = size < best_size;
          } else {
            const std::string& lo = std::min(smallest_fqn(nodes[i]), smallest_fqn(nodes[j]));
            const std::string& hi = std::max(smallest_fqn(nodes[i]), smallest_fqn(nodes[j]));
            const std::string& best_lo =
                std::min(smallest_fqn(nodes[best_i]), smallest_fqn(nodes[best_j]));
            const std::string& best_hi =
                std::max(smallest_fqn(nodes[best_i]), smallest_fqn(nodes[best_j]));
            better = std::tie(lo, hi) < std::tie(best_lo, best_hi);
          }
        }
        if (better) {
          best_i = i;
          best_j = j;
          best_score = score;
        }
      }
    }
    if (best_i == n) break;

    Node& target = nodes[best_i];
    Node& source = nodes[best_j];
    std::vector<VertexId> merged;
    merged.reserve(target.members.size() + source.members.size());
    std::merge(target.members.begin(), target.members.end(), source.members.begin(),
               source.members.end(), std::back_inserter(merged));
    target.members = std::move(merged);
    target.stats = cluster_cut_stats(graph, target.members, config.seed);
    source.alive = false;
    for (std::size_t x = 0; x < n; ++x) {
      if (x == best_i || x == best_j) continue;
      at(best_i, x).total += at(best_j, x).total;
      at(best_i, x).edges += at(best_j, x).edges;
      at(x, best_i) = at(best_i, x);
    }
  }

  std::vector<const Node*> alive;
  for (const Node& node : nodes) {
    if (node.alive) alive.push_back(&node);
  }
  std::sort(alive.begin(), alive.end(), [&](const Node* a, const Node* b) {
    return smallest_fqn(*a) < smallest_fqn(*b);
  });

  std::vector<CoChangeCluster> result;
  result.reserve(alive.size());
  for (std::size_t i = 0; i < alive.size(); ++i) {
    CoChangeCluster cluster = make_cluster(graph, alive[i]->members);
    cluster.cluster_id = static_cast<int>(i) + 1;
    result.push_back(std::move(cluster));
  }
  return result;
}

std::vector<CoChangeCluster> retrieve_cochange_clusters(const CoChangeGraph& pruned_graph,
                                                        const ClusteringConfig& config) {
  validate(config);

  CoChangeGraph graph = pruned_graph;
  std::vector<CoChangeCluster> final_clusters;

  for (std::size_t iteration = 0; iteration < config.max_recluster_iterations; ++iteration) {
    if (graph.vertex_count() == 0) {
      final_clusters.clear();
      break;
    }
    CoChangeGraph sparse = knn_sparsify(graph, config.knn_k);
    std::size_t target = resolve_partition_count(sparse.vertex_count(), config);
    std::vector<CoChangeCluster> parts = partition_phase(sparse, target, config.seed);
    std::vector<CoChangeCluster> merged = agglomerate(std::move(parts), sparse, config);

    std::vector<CoChangeCluster> kept;
    bool discarded = false;
    for (CoChangeCluster& cluster : merged) {
      if (cluster.size() >= config.min_cluster_size) {
        kept.push_back(std::move(cluster));
      } else {
        discarded = true;
      }
    }
    final_clusters = std::move(kept);
    if (!discarded) break;

    // re-run on the surviving vertex set only
    std::vector<VertexId> survivors;
    for (const CoChangeCluster& cluster : final_clusters) {
      for (const ClassId& m : cluster.members) {
        if (auto v = graph.find_vertex(m)) survivors.push_back(*v);
      }
    }
    graph = induced_subgraph(graph, survivors, /*drop_edgeless=*/true);
  }

  std::sort(final_clusters.begin(), final_clusters.end(),
            [](const CoChangeCluster& a, const CoChangeCluster& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.members.front() < b.members.front();
            });
  for (std::size_t i = 0; i < final_clusters.size(); ++i) {
    final_clusters[i].cluster_id = static_cast<int>(i) + 1;
  }
  return final_clusters;
}

}  // namespace cochange
