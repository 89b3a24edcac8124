#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cochange/clustering.hpp"
#include "cochange/graph.hpp"
#include "cochange/history.hpp"
#include "cochange/metrics.hpp"

namespace cochange {

// Distribution map layout: package rectangles holding one square per
// clustered class, colored by cluster.
struct MapCell {
  ClassId class_id;
  int cluster_id = 0;
  int color_index = 0;
};

struct MapPackage {
  std::string name;
  std::vector<MapCell> cells;  // sorted by cluster_id, then fqn
};

struct DistributionMapModel {
  std::vector<MapPackage> packages;  // descending clustered-class count, then name
  std::vector<std::pair<int, std::string>> legend;  // cluster_id -> color, ascending id
};

// Cells wrap after this many squares inside a package rectangle.
inline constexpr std::size_t kMapRowWidth = 8;

// Qualitative palette; cluster numbers printed on each cell disambiguate
// repeats once the palette cycles.
extern const std::array<std::string_view, 24> kClusterPalette;
std::string_view cluster_color(int cluster_id);

struct AnalysisReport {
  // inputs
  std::string repo_log_path;
  VcsFormat vcs = VcsFormat::git;
  std::vector<std::string> issue_paths;

  // configuration echo: everything that influenced the result
  IngestConfig ingest;
  Weight min_edge_weight = 2;
  ClusteringConfig clustering;
  PatternThresholds thresholds;

  // history span (input data timestamps; the report carries no wall clock so
  // equal inputs produce identical bytes)
  std::size_t commit_count = 0;
  std::string first_commit_time;  // ISO-8601 UTC, empty when no commits
  std::string last_commit_time;

  FilterAttrition attrition;
  GraphStats graph_before;
  GraphStats graph_after;

  std::vector<CoChangeCluster> clusters;
  std::vector<ClusterMetrics> cluster_metrics;  // parallel to clusters, by cluster_id
  std::optional<DescriptiveStats> size_stats;
  std::optional<DescriptiveStats> density_stats;
  std::optional<DescriptiveStats> avg_edge_weight_stats;
  std::optional<DescriptiveStats> focus_stats;
  std::optional<DescriptiveStats> spread_stats;

  DistributionMapModel map;
};

// Builds the map model. Every cluster member must appear in the package
// structure and have a metrics row; violations raise ConsistencyError.
DistributionMapModel build_distribution_map(std::span<const CoChangeCluster> clusters,
                                            const PackageStructure& structure,
                                            std::span<const ClusterMetrics> per_cluster);

// Canonical JSON: sorted keys, reals at six decimal places, UTF-8, terminated
// by a newline. Byte-stable for equal inputs and seed.
std::string render_json(const AnalysisReport& report);

// Self-contained HTML document with an inline SVG distribution map and the
// metrics tables. Native <title> tooltips carry the class fqn.
std::string render_html(const DistributionMapModel& model, const AnalysisReport& report);

// Edge list dump: one line per edge, "fqnA<TAB>fqnB<TAB>weight" with
// fqnA < fqnB, lines sorted.
std::string render_graph_edges(const CoChangeGraph& graph);

}  // namespace cochange
