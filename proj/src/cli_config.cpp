#include "cochange/cli_config.hpp"

#include <charconv>
#include <iostream>

#include <CLI11.hpp>

#include "cochange/errors.hpp"

namespace cochange {
namespace {

void apply_pattern_thresholds(const std::string& spec, PatternThresholds& thresholds) {
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    std::string_view entry(spec.data() + pos, end - pos);
    pos = end + 1;
    if (entry.empty()) continue;

    std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("--pattern-thresholds entry '" + std::string(entry) + "' is not key=value");
    std::string_view key = entry.substr(0, eq);
    std::string_view value = entry.substr(eq + 1);

    auto as_real = [&]() {
      double parsed = 0.0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (ec != std::errc() || ptr != value.data() + value.size())
        throw UsageError("--pattern-thresholds: '" + std::string(value) + "' is not a number");
      return parsed;
    };
    auto as_int = [&]() {
      int parsed = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
      if (ec != std::errc() || ptr != value.data() + value.size())
        throw UsageError("--pattern-thresholds: '" + std::string(value) + "' is not an integer");
      return parsed;
    };

    if (key == "focus_min") thresholds.partial_focus_min = as_real();
    else if (key == "cc_focus") thresholds.crosscutting_focus_max = as_real();
    else if (key == "cc_spread") thresholds.crosscutting_spread_min = as_int();
    else if (key == "epsilon") thresholds.encapsulation_epsilon = as_real();
    else throw UsageError("--pattern-thresholds: unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

AnalysisConfig parse_config(const std::vector<std::string>& args) {
  AnalysisConfig config;
  std::string vcs_name = "git";
  std::string partitions = "auto";
  std::string pattern_thresholds;
  std::int64_t seed = 0;

  CLI::App app{"Package modularity assessment from co-change history"};
  app.set_config("--config", "", "Configuration file (key=value, keys match the long flags)");

  app.add_option("--repo-log", config.repo_log_path, "Exported version-control log");
  app.add_option("--vcs", vcs_name, "Log format")
      ->check(CLI::IsMember({"git", "svn"}))
      ->capture_default_str();
  app.add_option("--issues", config.issue_paths, "Issue report XML file(s)")
      ->allow_extra_args(true);
  app.add_option("--issue-pattern", config.ingest.issue_key_pattern,
                 "Regular expression that extracts issue keys from commit messages")
      ->capture_default_str();
  app.add_option("--issue-types", config.ingest.accepted_issue_types,
                 "Comma-separated accepted (maintenance) issue types")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--max-scatter", config.ingest.max_scattering,
                 "Commits touching more packages than this are dropped")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--source-root", config.ingest.source_roots,
                 "Source root prefix(es) stripped from class paths")
      ->allow_extra_args(true);

  app.add_option("--min-edge-weight", config.min_edge_weight,
                 "Prune co-change edges lighter than this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--dump-graph", config.dump_graph_path,
                 "Write the pruned graph as a sorted edge list");

  app.add_option("--min-cluster-size", config.clustering.min_cluster_size,
                 "Discard clusters with fewer classes (at least 2)")
      ->capture_default_str();
  app.add_option("--knn", config.clustering.knn_k, "Neighbors kept per vertex when sparsifying")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--alpha", config.clustering.alpha, "Exponent on relative closeness")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--partitions", partitions, "Initial partition count, or 'auto'")
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized refinement starts")->capture_default_str();
  app.add_option("--max-recluster-iterations", config.clustering.max_recluster_iterations,
                 "Cap on discard-and-recluster rounds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  app.add_option("--pattern-thresholds", pattern_thresholds,
                 "Pattern classifier thresholds, e.g. focus_min=0.9,cc_focus=0.5,cc_spread=4");

  app.add_option("--out-json", config.out_json_path, "Write the JSON report here");
  app.add_option("--out-html", config.out_html_path, "Write the HTML distribution map here");
  app.add_flag("-v,--verbose", config.verbosity, "Log pipeline stages to stderr");

  std::vector<const char*> argv;
  argv.push_back("cochange");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  config.vcs = *vcs_format_from_string(vcs_name);
  config.clustering.seed = static_cast<std::uint64_t>(seed);
  if (partitions == "auto") {
    config.clustering.initial_partitions.reset();
  } else {
    std::size_t parsed = 0;
    auto [ptr, ec] = std::from_chars(partitions.data(), partitions.data() + partitions.size(), parsed);
    if (ec != std::errc() || ptr != partitions.data() + partitions.size() || parsed < 1)
      throw UsageError("--partitions expects a positive integer or 'auto', got '" + partitions + "'");
    config.clustering.initial_partitions = parsed;
  }
  if (!pattern_thresholds.empty()) apply_pattern_thresholds(pattern_thresholds, config.thresholds);

  validate(config.clustering);
  validate(config.thresholds);
  return config;
}

int run_cli(int argc, const char* const* argv) {
  AnalysisConfig config;
  try {
    config = parse_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const HelpRequested& help) {
    std::cout << help.text;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    AnalysisReport report = run_pipeline(config);
    if (report.attrition.survivors == 0) {
      std::cerr << "cochange: no change sets survived the filters; "
                   "the report explains the attrition\n";
      return 4;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "cochange: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "cochange: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "cochange: internal error: " << e.what() << "\n";
    return 5;
  }
}

}  // namespace cochange
