#include <cinttypes>
#include <cstdio>
#include <map>
#include <memory>
#include <variant>

#include "cochange/report.hpp"

namespace cochange {
namespace {

// Small canonical-JSON value tree. Objects keep keys in a std::map, so
// serialization is sorted by construction; reals are always printed with six
// decimal places so documents are byte-stable.
struct JsonValue;
using JsonObject = std::map<std::string, JsonValue>;
using JsonArray = std::vector<JsonValue>;

struct JsonValue {
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, JsonArray,
               std::unique_ptr<JsonObject>>
      data = nullptr;

  JsonValue() = default;
  JsonValue(std::nullptr_t) {}
  JsonValue(bool b) : data(b) {}
  JsonValue(std::int64_t i) : data(i) {}
  JsonValue(std::size_t i) : data(static_cast<std::int64_t>(i)) {}
  JsonValue(int i) : data(static_cast<std::int64_t>(i)) {}
  JsonValue(double d) : data(d) {}
  JsonValue(std::string s) : data(std::move(s)) {}
  JsonValue(std::string_view s) : data(std::string(s)) {}
  JsonValue(const char* s) : data(std::string(s)) {}
  JsonValue(JsonArray a) : data(std::move(a)) {}
  JsonValue(JsonObject o) : data(std::make_unique<JsonObject>(std::move(o))) {}
};

void write_escaped(std::string& out, std::string_view text) {
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void write_value(std::string& out, const JsonValue& value) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          out += "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          out += v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%" PRId64, v);
          out += buf;
        } else if constexpr (std::is_same_v<T, double>) {
          char buf[64];
          // six decimals; magnitudes that would collapse to zero switch to
          // scientific form so config echoes stay faithful
          if (v != 0.0 && v < 1e-6 && v > -1e-6) {
            std::snprintf(buf, sizeof(buf), "%.6e", v);
          } else {
            std::snprintf(buf, sizeof(buf), "%.6f", v);
          }
          out += buf;
        } else if constexpr (std::is_same_v<T, std::string>) {
          write_escaped(out, v);
        } else if constexpr (std::is_same_v<T, JsonArray>) {
          out.push_back('[');
          for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out.push_back(',');
            write_value(out, v[i]);
          }
          out.push_back(']');
        } else {
          out.push_back('{');
          bool first = true;
          for (const auto& [key, item] : *v) {
            if (!first) out.push_back(',');
            first = false;
            write_escaped(out, key);
            out.push_back(':');
            write_value(out, item);
          }
          out.push_back('}');
        }
      },
      value.data);
}

JsonArray string_array(std::span<const std::string> values) {
  JsonArray array;
  for (const std::string& v : values) array.emplace_back(v);
  return array;
}

JsonValue stats_value(const std::optional<DescriptiveStats>& stats) {
  if (!stats) return JsonValue(nullptr);
  JsonObject obj;
  obj.emplace("max", stats->max);
  obj.emplace("mean", stats->mean);
  obj.emplace("median", stats->median);
  obj.emplace("min", stats->min);
  obj.emplace("std_dev", stats->std_dev);
  return JsonValue(std::move(obj));
}

JsonValue graph_stats_value(const GraphStats& stats) {
  JsonObject obj;
  obj.emplace("density", stats.density);
  obj.emplace("edges", stats.edge_count);
  obj.emplace("vertices", stats.vertex_count);
  return JsonValue(std::move(obj));
}

JsonValue config_value(const AnalysisReport& report) {
  JsonObject ingest;
  ingest.emplace("accepted_issue_types", string_array(report.ingest.accepted_issue_types));
  ingest.emplace("class_file_suffix", report.ingest.class_file_suffix);
  ingest.emplace("issue_key_pattern", report.ingest.issue_key_pattern);
  ingest.emplace("max_scattering", report.ingest.max_scattering);
  ingest.emplace("source_roots", string_array(report.ingest.source_roots));

  JsonObject clustering;
  clustering.emplace("alpha", report.clustering.alpha);
  clustering.emplace("initial_partitions",
                     report.clustering.initial_partitions
                         ? JsonValue(*report.clustering.initial_partitions)
                         : JsonValue("auto"));
  clustering.emplace("knn_k", report.clustering.knn_k);
  clustering.emplace("max_recluster_iterations", report.clustering.max_recluster_iterations);
  clustering.emplace("merge_threshold", report.clustering.merge_threshold);
  clustering.emplace("min_cluster_size", report.clustering.min_cluster_size);
  clustering.emplace("seed", static_cast<std::int64_t>(report.clustering.seed));

  JsonObject thresholds;
  thresholds.emplace("crosscutting_focus_max", report.thresholds.crosscutting_focus_max);
  thresholds.emplace("crosscutting_spread_min", report.thresholds.crosscutting_spread_min);
  thresholds.emplace("encapsulation_epsilon", report.thresholds.encapsulation_epsilon);
  thresholds.emplace("partial_focus_min", report.thresholds.partial_focus_min);

  JsonObject config;
  config.emplace("clustering", JsonValue(std::move(clustering)));
  config.emplace("ingest", JsonValue(std::move(ingest)));
  config.emplace("map_row_width", kMapRowWidth);
  config.emplace("min_edge_weight", report.min_edge_weight);
  config.emplace("pattern_thresholds", JsonValue(std::move(thresholds)));
  return JsonValue(std::move(config));
}

}  // namespace

std::string render_json(const AnalysisReport& report) {
  JsonObject root;
  root.emplace("schema", "cochange-report/1");

  JsonObject inputs;
  inputs.emplace("issues", string_array(report.issue_paths));
  inputs.emplace("repo_log", report.repo_log_path);
  inputs.emplace("vcs", to_string(report.vcs));
  root.emplace("inputs", JsonValue(std::move(inputs)));

  root.emplace("config", config_value(report));

  JsonObject history;
  history.emplace("commit_count", report.commit_count);
  history.emplace("first_commit_time",
                  report.first_commit_time.empty() ? JsonValue(nullptr)
                                                   : JsonValue(report.first_commit_time));
  history.emplace("last_commit_time",
                  report.last_commit_time.empty() ? JsonValue(nullptr)
                                                  : JsonValue(report.last_commit_time));
  root.emplace("history", JsonValue(std::move(history)));

  JsonObject filters;
  filters.emplace("change_sets", report.attrition.survivors);
  filters.emplace("input_commits", report.attrition.input_commits);
  filters.emplace("removed_multiple_issues", report.attrition.removed_multiple_issues);
  filters.emplace("removed_no_classes", report.attrition.removed_no_classes);
  filters.emplace("removed_no_maintenance_issue", report.attrition.removed_no_maintenance_issue);
  filters.emplace("removed_scattered", report.attrition.removed_scattered);
  root.emplace("filters", JsonValue(std::move(filters)));

  JsonObject graph;
  graph.emplace("after_pruning", graph_stats_value(report.graph_after));
  graph.emplace("before_pruning", graph_stats_value(report.graph_before));
  root.emplace("graph", JsonValue(std::move(graph)));

  JsonArray items;
  for (std::size_t i = 0; i < report.clusters.size(); ++i) {
    const CoChangeCluster& cluster = report.clusters[i];
    const ClusterMetrics& metrics = report.cluster_metrics[i];
    JsonObject item;
    item.emplace("avg_edge_weight", metrics.avg_edge_weight);
    item.emplace("density", metrics.density);
    item.emplace("focus", metrics.focus);
    item.emplace("id", cluster.cluster_id);
    JsonArray members;
    for (const ClassId& m : cluster.members) members.emplace_back(m.fqn);
    item.emplace("members", std::move(members));
    item.emplace("pattern", to_string(metrics.pattern));
    item.emplace("size", metrics.size);
    item.emplace("spread", metrics.spread);
    items.push_back(JsonValue(std::move(item)));
  }

  JsonObject clusters;
  clusters.emplace("avg_edge_weight_stats", stats_value(report.avg_edge_weight_stats));
  clusters.emplace("count", report.clusters.size());
  clusters.emplace("density_stats", stats_value(report.density_stats));
  clusters.emplace("focus_stats", stats_value(report.focus_stats));
  clusters.emplace("items", std::move(items));
  clusters.emplace("size_stats", stats_value(report.size_stats));
  clusters.emplace("spread_stats", stats_value(report.spread_stats));
  root.emplace("clusters", JsonValue(std::move(clusters)));

  JsonArray packages;
  for (const MapPackage& package : report.map.packages) {
    JsonObject pkg;
    JsonArray cells;
    for (const MapCell& cell : package.cells) {
      JsonObject c;
      c.emplace("class", cell.class_id.fqn);
      c.emplace("cluster", cell.cluster_id);
      c.emplace("color", cluster_color(cell.cluster_id));
      cells.push_back(JsonValue(std::move(c)));
    }
    pkg.emplace("cells", std::move(cells));
    pkg.emplace("name", package.name);
    packages.push_back(JsonValue(std::move(pkg)));
  }
  JsonObject legend;
  for (const auto& [id, color] : report.map.legend) {
    legend.emplace(std::to_string(id), color);
  }
  JsonObject map;
  map.emplace("legend", JsonValue(std::move(legend)));
  map.emplace("packages", std::move(packages));
  root.emplace("distribution_map", JsonValue(std::move(map)));

  std::string out;
  write_value(out, JsonValue(std::move(root)));
  out.push_back('\n');
  return out;
}

}  // namespace cochange
