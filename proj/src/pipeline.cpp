#include "cochange/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cochange/errors.hpp"

namespace cochange {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw ParseError("read failure on '" + path + "'");
  return buffer.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + temp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(temp, ec);
      throw std::runtime_error("write failure on '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, target, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw std::runtime_error("cannot rename '" + temp.string() + "' to '" + path + "'");
  }
}

namespace {

void log_stage(const AnalysisConfig& config, const std::string& message) {
  if (config.verbosity > 0) std::cerr << "[cochange] " << message << "\n";
}

std::optional<DescriptiveStats> maybe_stats(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return descriptive_stats(values);
}

}  // namespace

AnalysisReport run_pipeline(const AnalysisConfig& config) {
  validate(config.clustering);
  validate(config.thresholds);
  if (config.ingest.max_scattering < 1) throw UsageError("max_scattering must be >= 1");
  if (config.min_edge_weight < 1) throw UsageError("min_edge_weight must be >= 1");
  if (config.repo_log_path.empty()) throw UsageError("no repository log given");

  // inputs are echoed by file name only, so reports from different checkouts
  // of the same data stay byte-identical
  AnalysisReport report;
  report.repo_log_path = std::filesystem::path(config.repo_log_path).filename().string();
  report.vcs = config.vcs;
  for (const std::string& path : config.issue_paths) {
    report.issue_paths.push_back(std::filesystem::path(path).filename().string());
  }
  report.ingest = config.ingest;
  report.min_edge_weight = config.min_edge_weight;
  report.clustering = config.clustering;
  report.thresholds = config.thresholds;

  log_stage(config, "parsing " + std::string(to_string(config.vcs)) + " log " + config.repo_log_path);
  std::vector<CommitRecord> commits =
      parse_vcs_log(read_file(config.repo_log_path), config.vcs);
  report.commit_count = commits.size();
  if (!commits.empty()) {
    report.first_commit_time = format_iso8601_utc(commits.front().timestamp);
    report.last_commit_time = format_iso8601_utc(commits.back().timestamp);
  }

  log_stage(config, "parsing " + std::to_string(config.issue_paths.size()) + " issue file(s)");
  std::vector<std::pair<std::string, std::string>> documents;
  documents.reserve(config.issue_paths.size());
  for (const std::string& path : config.issue_paths) {
    documents.emplace_back(path, read_file(path));
  }
  std::vector<IssueRecord> issues = parse_issue_reports(documents);

  log_stage(config, "filtering " + std::to_string(commits.size()) + " commits against " +
                        std::to_string(issues.size()) + " issues");
  FilterOutcome filtered = filter_commits(commits, issues, config.ingest);
  report.attrition = filtered.attrition;

  log_stage(config, std::to_string(filtered.change_sets.size()) + " change sets survived");
  CoChangeGraph graph = build_graph(filtered.change_sets);
  report.graph_before = graph_stats(graph);

  CoChangeGraph pruned = prune_edges(graph, config.min_edge_weight);
  report.graph_after = graph_stats(pruned);
  log_stage(config, "graph: " + std::to_string(report.graph_before.vertex_count) + "v/" +
                        std::to_string(report.graph_before.edge_count) + "e, pruned to " +
                        std::to_string(report.graph_after.vertex_count) + "v/" +
                        std::to_string(report.graph_after.edge_count) + "e");

  if (!config.dump_graph_path.empty()) {
    write_file_atomic(config.dump_graph_path, render_graph_edges(pruned));
  }

  report.clusters = retrieve_cochange_clusters(pruned, config.clustering);
  log_stage(config, "retrieved " + std::to_string(report.clusters.size()) + " clusters");

  PackageStructure structure = PackageStructure::from_clusters(report.clusters);
  std::vector<double> sizes, densities, weights, focuses, spreads;
  for (const CoChangeCluster& cluster : report.clusters) {
    ClusterShape shape = cluster_stats(cluster, pruned);
    ClusterMetrics metrics;
    metrics.cluster_id = cluster.cluster_id;
    metrics.size = shape.size;
    metrics.density = shape.density;
    metrics.avg_edge_weight = shape.avg_edge_weight;
    metrics.focus = focus(cluster, structure);
    metrics.spread = spread(cluster, structure);
    metrics.pattern = classify_pattern(std::min(metrics.focus, 1.0), metrics.spread, config.thresholds);
    report.cluster_metrics.push_back(metrics);

    sizes.push_back(static_cast<double>(metrics.size));
    densities.push_back(metrics.density);
    weights.push_back(metrics.avg_edge_weight);
    focuses.push_back(metrics.focus);
    spreads.push_back(static_cast<double>(metrics.spread));
  }
  report.size_stats = maybe_stats(sizes);
  report.density_stats = maybe_stats(densities);
  report.avg_edge_weight_stats = maybe_stats(weights);
  report.focus_stats = maybe_stats(focuses);
  report.spread_stats = maybe_stats(spreads);

  report.map = build_distribution_map(report.clusters, structure, report.cluster_metrics);

  if (!config.out_json_path.empty()) {
    write_file_atomic(config.out_json_path, render_json(report));
    log_stage(config, "wrote " + config.out_json_path);
  }
  if (!config.out_html_path.empty()) {
    write_file_atomic(config.out_html_path, render_html(report.map, report));
    log_stage(config, "wrote " + config.out_html_path);
  }
  return report;
}

}  // namespace cochange
