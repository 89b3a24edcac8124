#include "cochange/clustering.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "cochange/errors.hpp"
#include "testutil.hpp"

using namespace cochange;

namespace {

CoChangeGraph star_graph() {
  return testutil::make_graph({
      {"hub.S", "leaf.L1", 5},
      {"hub.S", "leaf.L2", 4},
      {"hub.S", "leaf.L3", 3},
      {"hub.S", "leaf.L4", 2},
      {"hub.S", "leaf.L5", 1},
  });
}

CoChangeGraph clique(const std::string& prefix, int n, Weight w) {
  std::vector<testutil::EdgeSpec> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      edges.push_back({prefix + ".C" + std::to_string(i), prefix + ".C" + std::to_string(j), w});
    }
  }
  return testutil::make_graph(edges);
}

CoChangeGraph merge_graphs(const std::vector<CoChangeGraph>& graphs,
                           const std::vector<testutil::EdgeSpec>& extra) {
  GraphBuilder builder;
  for (const CoChangeGraph& g : graphs) {
    for (const ClassId& v : g.vertex_names()) builder.add_vertex(v);
    g.for_each_edge([&](VertexId a, VertexId b, Weight w) {
      builder.add_edge(g.vertex_name(a), g.vertex_name(b), w);
    });
  }
  for (const auto& e : extra) builder.add_edge(ClassId(e.a), ClassId(e.b), e.weight);
  return builder.build();
}

std::vector<std::string> member_names(const CoChangeCluster& cluster) {
  std::vector<std::string> names;
  for (const ClassId& m : cluster.members) names.push_back(m.fqn);
  return names;
}

}  // namespace

TEST_CASE("knn keeps the union of each endpoint's top-k edges") {
  CoChangeGraph star = star_graph();

  // k=2: the hub keeps its two heaviest leaves, but every leaf keeps the hub
  CoChangeGraph sparse = knn_sparsify(star, 2);
  CHECK(sparse.vertex_count() == star.vertex_count());
  CHECK(sparse.edge_count() == 5);

  // k at or above the maximum degree is the identity
  CoChangeGraph same = knn_sparsify(star, 5);
  CHECK(same.edge_count() == star.edge_count());

  CoChangeGraph empty;
  CHECK(knn_sparsify(empty, 3).vertex_count() == 0);
}

TEST_CASE("knn drops globally light edges of saturated vertices") {
  // triangle core plus a pendant: with k=1 the pendant still keeps its only
  // edge even though the core vertex prefers heavier partners
  CoChangeGraph graph = testutil::make_graph({
      {"a.A", "a.B", 9},
      {"a.B", "a.C", 8},
      {"a.A", "a.C", 7},
      {"a.C", "a.D", 1},
  });
  CoChangeGraph sparse = knn_sparsify(graph, 1);
  VertexId c = *sparse.find_vertex(ClassId("a.C"));
  VertexId d = *sparse.find_vertex(ClassId("a.D"));
  CHECK(sparse.weight_between(c, d) == 1);
  // A-C (weight 7) is nobody's single best edge
  VertexId a = *sparse.find_vertex(ClassId("a.A"));
  CHECK(sparse.weight_between(a, c) == 0);
}

TEST_CASE("resolve_partition_count auto formula") {
  ClusteringConfig config;  // min_cluster_size = 4
  CHECK(resolve_partition_count(32, config) == 8);
  CHECK(resolve_partition_count(5, config) == 2);
  CHECK(resolve_partition_count(11, config) == 3);
  CHECK(resolve_partition_count(2, config) == 1);
  CHECK(resolve_partition_count(100, config) == 25);

  config.initial_partitions = 5;
  CHECK(resolve_partition_count(100, config) == 5);
  CHECK(resolve_partition_count(3, config) == 3);  // clamped to the vertex count
}

TEST_CASE("partition_phase: target one keeps everything together") {
  CoChangeGraph graph = clique("a", 5, 2);
  auto parts = partition_phase(graph, 1, 0);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].members.size() == 5);
}

TEST_CASE("partition_phase separates two cliques at the bridge") {
  CoChangeGraph graph =
      merge_graphs({clique("a", 4, 3), clique("b", 4, 3)}, {{"a.C0", "b.C0", 1}});
  auto parts = partition_phase(graph, 2, 0);
  REQUIRE(parts.size() == 2);
  CHECK(member_names(parts[0]) ==
        std::vector<std::string>{"a.C0", "a.C1", "a.C2", "a.C3"});
  CHECK(member_names(parts[1]) ==
        std::vector<std::string>{"b.C0", "b.C1", "b.C2", "b.C3"});
}

TEST_CASE("partition_phase: component pairs split along zero-cost cuts") {
  std::vector<testutil::EdgeSpec> edges;
  for (int i = 0; i < 8; ++i) {
    edges.push_back({"p" + std::to_string(i) + ".A", "p" + std::to_string(i) + ".B", 2});
  }
  CoChangeGraph graph = testutil::make_graph(edges);
  auto parts = partition_phase(graph, 8, 0);
  REQUIRE(parts.size() == 8);
  for (const auto& part : parts) {
    REQUIRE(part.members.size() == 2);
    CHECK(package_of(part.members[0]) == package_of(part.members[1]));
  }
}

TEST_CASE("partition_phase rejects a zero target and stops at singletons") {
  CoChangeGraph graph = clique("a", 3, 1);
  CHECK_THROWS_AS(partition_phase(graph, 0, 0), std::invalid_argument);
  auto parts = partition_phase(graph, 99, 0);
  CHECK(parts.size() == 3);  // indivisible beyond single vertices
}

TEST_CASE("relative interconnectivity matches hand-computed ratios") {
  // each cluster is one edge of weight 4; inter weight varies
  CoChangeGraph g1 = testutil::make_graph({
      {"x.A1", "x.A2", 4},
      {"y.B1", "y.B2", 4},
      {"x.A1", "y.B1", 2},
      {"x.A2", "y.B2", 2},
  });
  auto c1 = testutil::make_cluster({"x.A1", "x.A2"});
  auto c2 = testutil::make_cluster({"y.B1", "y.B2"});
  CHECK(relative_interconnectivity(c1, c2, g1) == doctest::Approx(1.0));
  CHECK(relative_interconnectivity(c2, c1, g1) == doctest::Approx(1.0));

  CoChangeGraph g2 = testutil::make_graph({
      {"x.A1", "x.A2", 4},
      {"y.B1", "y.B2", 4},
      {"x.A1", "y.B1", 2},
  });
  CHECK(relative_interconnectivity(c1, c2, g2) == doctest::Approx(0.5));

  // disconnected clusters have no inter edges
  CoChangeGraph g3 = testutil::make_graph({{"x.A1", "x.A2", 4}, {"y.B1", "y.B2", 4}});
  CHECK(relative_interconnectivity(c1, c2, g3) == 0.0);
}

TEST_CASE("relative closeness matches hand-computed ratios") {
  auto c1 = testutil::make_cluster({"x.A1", "x.A2"});
  auto c2 = testutil::make_cluster({"y.B1", "y.B2"});

  // uniform weights: ratio of equal means is one
  CoChangeGraph uniform = testutil::make_graph({
      {"x.A1", "x.A2", 3},
      {"y.B1", "y.B2", 3},
      {"x.A1", "y.B1", 3},
  });
  CHECK(relative_closeness(c1, c2, uniform) == doctest::Approx(1.0));

  // inter mean 1 against bisection means 2 at equal sizes
  CoChangeGraph halved = testutil::make_graph({
      {"x.A1", "x.A2", 2},
      {"y.B1", "y.B2", 2},
      {"x.A1", "y.B1", 1},
  });
  CHECK(relative_closeness(c1, c2, halved) == doctest::Approx(0.5));
  CHECK(relative_closeness(c2, c1, halved) == doctest::Approx(0.5));

  CoChangeGraph separate = testutil::make_graph({{"x.A1", "x.A2", 2}, {"y.B1", "y.B2", 2}});
  CHECK(relative_closeness(c1, c2, separate) == 0.0);
}

TEST_CASE("ri and rc reject overlapping or foreign clusters") {
  CoChangeGraph graph = testutil::make_graph({{"x.A", "x.B", 1}, {"x.B", "x.C", 1}});
  auto c1 = testutil::make_cluster({"x.A", "x.B"});
  auto overlapping = testutil::make_cluster({"x.B", "x.C"});
  CHECK_THROWS_AS(relative_interconnectivity(c1, overlapping, graph), std::invalid_argument);
  CHECK_THROWS_AS(relative_closeness(c1, overlapping, graph), std::invalid_argument);

  auto foreign = testutil::make_cluster({"z.Z"});
  CHECK_THROWS_AS(relative_interconnectivity(c1, foreign, graph), std::invalid_argument);
  auto empty = testutil::make_cluster({});
  CHECK_THROWS_AS(relative_interconnectivity(c1, empty, graph), std::invalid_argument);
}

TEST_CASE("singleton pairs connected by an edge score infinitely") {
  CoChangeGraph graph = testutil::make_graph({{"x.A", "y.B", 3}});
  auto c1 = testutil::make_cluster({"x.A"});
  auto c2 = testutil::make_cluster({"y.B"});
  CHECK(std::isinf(relative_interconnectivity(c1, c2, graph)));
  CHECK(std::isinf(relative_closeness(c1, c2, graph)));
}

TEST_CASE("agglomerate leaves a single subcluster unchanged") {
  CoChangeGraph graph = clique("a", 4, 2);
  std::vector<CoChangeCluster> input = {testutil::make_cluster({"a.C0", "a.C1", "a.C2", "a.C3"})};
  ClusteringConfig config;
  auto result = agglomerate(input, graph, config);
  REQUIRE(result.size() == 1);
  CHECK(result[0].members == input[0].members);
}

TEST_CASE("agglomerate merges cliques joined by a heavy bundle") {
  CoChangeGraph graph = merge_graphs({clique("a", 4, 3), clique("b", 4, 3)},
                                     {{"a.C0", "b.C0", 3},
                                      {"a.C1", "b.C1", 3},
                                      {"a.C2", "b.C2", 3},
                                      {"a.C3", "b.C3", 3}});
  std::vector<CoChangeCluster> input = {
      testutil::make_cluster({"a.C0", "a.C1", "a.C2", "a.C3"}),
      testutil::make_cluster({"b.C0", "b.C1", "b.C2", "b.C3"}),
  };
  ClusteringConfig config;
  auto result = agglomerate(input, graph, config);
  REQUIRE(result.size() == 1);
  CHECK(result[0].members.size() == 8);
}

TEST_CASE("agglomerate merges a lone weakly-bridged pair at threshold zero") {
  CoChangeGraph graph =
      merge_graphs({clique("a", 4, 5), clique("b", 4, 5)}, {{"a.C0", "b.C0", 1}});
  std::vector<CoChangeCluster> input = {
      testutil::make_cluster({"a.C0", "a.C1", "a.C2", "a.C3"}),
      testutil::make_cluster({"b.C0", "b.C1", "b.C2", "b.C3"}),
  };
  ClusteringConfig config;  // merge_threshold 0: any positive score qualifies
  auto result = agglomerate(input, graph, config);
  CHECK(result.size() == 1);
}

TEST_CASE("agglomerate prefers the better-scoring pair") {
  // clusters A and B share a heavy bundle; C hangs off A by one light edge
  CoChangeGraph graph = merge_graphs(
      {clique("a", 4, 3), clique("b", 4, 3), clique("c", 4, 3)},
      {{"a.C0", "b.C0", 3}, {"a.C1", "b.C1", 3}, {"a.C2", "b.C2", 3}, {"a.C3", "b.C3", 3},
       {"a.C0", "c.C0", 1}});
  auto a = testutil::make_cluster({"a.C0", "a.C1", "a.C2", "a.C3"});
  auto b = testutil::make_cluster({"b.C0", "b.C1", "b.C2", "b.C3"});
  auto c = testutil::make_cluster({"c.C0", "c.C1", "c.C2", "c.C3"});

  ClusteringConfig config;
  double score_ab = relative_interconnectivity(a, b, graph) *
                    std::pow(relative_closeness(a, b, graph), config.alpha);
  double score_ac = relative_interconnectivity(a, c, graph) *
                    std::pow(relative_closeness(a, c, graph), config.alpha);
  CHECK(score_ab > score_ac);
  CHECK(score_ac > 0.0);

  // a threshold between the two scores admits exactly the better merge
  config.merge_threshold = (score_ab + score_ac) / 2;
  auto result = agglomerate({a, b, c}, graph, config);
  REQUIRE(result.size() == 2);
  CHECK(result[0].members.size() == 8);  // a + b
  CHECK(result[1].members == c.members);
}

TEST_CASE("retrieve: a five-clique survives whole at minimum size four") {
  CoChangeGraph graph = prune_edges(clique("a", 5, 2), 2);
  ClusteringConfig config;
  auto clusters = retrieve_cochange_clusters(graph, config);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].cluster_id == 1);
  CHECK(clusters[0].members.size() == 5);
}

TEST_CASE("retrieve discards small clusters and reclusters the survivors") {
  // a 4-clique and a triangle pack exactly into the balanced 3/4 split, so
  // the triangle comes out pure, falls under the minimum size, and is
  // discarded; the second round reclusters the clique alone
  CoChangeGraph graph = merge_graphs({clique("a", 4, 3), clique("t", 3, 4)}, {});
  ClusteringConfig config;
  auto clusters = retrieve_cochange_clusters(graph, config);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members.size() == 4);
  for (const ClassId& m : clusters[0].members) CHECK(package_of(m) == "a");
}

TEST_CASE("retrieve yields nothing when every cluster is too small") {
  CoChangeGraph graph = testutil::make_graph({{"z.X", "z.Y", 2}});
  ClusteringConfig config;
  CHECK(retrieve_cochange_clusters(graph, config).empty());
  CHECK(retrieve_cochange_clusters(CoChangeGraph{}, config).empty());
}

TEST_CASE("retrieve recovers a planted partition after pruning") {
  testutil::PlantedGraph planted = testutil::make_planted_graph(20240101);
  CoChangeGraph pruned = prune_edges(planted.graph, 2);
  ClusteringConfig config;
  config.seed = 20240101;
  auto clusters = retrieve_cochange_clusters(pruned, config);
  CHECK(clusters.size() == 4);
  CHECK(testutil::planted_recovery_ari(planted, clusters) == doctest::Approx(1.0));
}

TEST_CASE("retrieve output is disjoint, sized, labeled, deterministic") {
  testutil::PlantedGraph planted = testutil::make_planted_graph(77);
  CoChangeGraph pruned = prune_edges(planted.graph, 2);
  ClusteringConfig config;
  config.seed = 9;

  auto first = retrieve_cochange_clusters(pruned, config);
  auto second = retrieve_cochange_clusters(pruned, config);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].cluster_id == static_cast<int>(i) + 1);
    CHECK(first[i].members == second[i].members);
    CHECK(first[i].members.size() >= config.min_cluster_size);
    if (i > 0) CHECK(first[i - 1].members.size() >= first[i].members.size());
  }

  std::set<ClassId> seen;
  for (const auto& cluster : first) {
    for (const ClassId& m : cluster.members) {
      CHECK(seen.insert(m).second);
      CHECK(pruned.find_vertex(m).has_value());
    }
  }
}

TEST_CASE("clustering config validation") {
  ClusteringConfig config;
  config.min_cluster_size = 1;
  CHECK_THROWS_AS(validate(config), UsageError);
  config = {};
  config.alpha = 0.0;
  CHECK_THROWS_AS(validate(config), UsageError);
  config = {};
  config.knn_k = 0;
  CHECK_THROWS_AS(validate(config), UsageError);
  config = {};
  CHECK_NOTHROW(validate(config));
}
