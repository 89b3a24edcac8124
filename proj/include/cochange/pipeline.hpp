#pragma once

#include <string>
#include <vector>

#include "cochange/report.hpp"

namespace cochange {

// Everything a run needs; defaults are complete, so an empty config file and
// no flags still resolve.
struct AnalysisConfig {
  std::string repo_log_path;
  VcsFormat vcs = VcsFormat::git;
  std::vector<std::string> issue_paths;

  IngestConfig ingest;
  Weight min_edge_weight = 2;
  ClusteringConfig clustering;
  PatternThresholds thresholds;

  std::string out_json_path;
  std::string out_html_path;
  std::string dump_graph_path;
  int verbosity = 0;
};

// Runs ingest -> filter -> graph -> prune -> cluster -> metrics -> render and
// writes the requested output files (write-to-temp, then atomic rename; no
// partial outputs on error). Returns the full report.
AnalysisReport run_pipeline(const AnalysisConfig& config);

// Serializes `content` to `path` atomically.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace cochange
