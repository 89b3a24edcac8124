#include <algorithm>
#include <cstdio>
#include <string>

#include "cochange/report.hpp"

namespace cochange {
namespace {

constexpr int kCellSize = 22;
constexpr int kCellGap = 4;
constexpr int kCellStep = kCellSize + kCellGap;
constexpr int kBoxPadding = 8;
constexpr int kLabelHeight = 18;
constexpr int kBoxGap = 24;
constexpr int kCanvasWidth = 980;
constexpr int kMargin = 16;

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
}

std::string escaped(std::string_view text) {
  std::string out;
  append_escaped(out, text);
  return out;
}

std::string real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

struct BoxLayout {
  int x = 0, y = 0, width = 0, height = 0;
};

BoxLayout box_extent(const MapPackage& package) {
  std::size_t cells = package.cells.size();
  std::size_t columns = std::min(cells, kMapRowWidth);
  std::size_t rows = (cells + kMapRowWidth - 1) / kMapRowWidth;
  BoxLayout box;
  box.width = 2 * kBoxPadding + static_cast<int>(columns) * kCellStep - kCellGap;
  box.height = 2 * kBoxPadding + static_cast<int>(rows) * kCellStep - kCellGap;
  return box;
}

std::string render_map_svg(const DistributionMapModel& model) {
  // flow layout: boxes left to right, wrapping at the canvas width
  std::vector<BoxLayout> boxes;
  int x = kMargin, y = kMargin, row_height = 0;
  for (const MapPackage& package : model.packages) {
    BoxLayout box = box_extent(package);
    if (x > kMargin && x + box.width > kCanvasWidth - kMargin) {
      x = kMargin;
      y += row_height + kBoxGap;
      row_height = 0;
    }
    box.x = x;
    box.y = y;
    x += box.width + kBoxGap;
    row_height = std::max(row_height, box.height + kLabelHeight);
    boxes.push_back(box);
  }
  int total_height = y + row_height + kMargin;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kCanvasWidth) +
         "\" height=\"" + std::to_string(total_height) + "\" font-family=\"sans-serif\">\n";
  for (std::size_t p = 0; p < model.packages.size(); ++p) {
    const MapPackage& package = model.packages[p];
    const BoxLayout& box = boxes[p];
    svg += "<g>\n";
    svg += "<rect class=\"package-box\" x=\"" + std::to_string(box.x) + "\" y=\"" +
           std::to_string(box.y) + "\" width=\"" + std::to_string(box.width) + "\" height=\"" +
           std::to_string(box.height) + "\" fill=\"#f4f4f4\" stroke=\"#444\"/>\n";
    for (std::size_t i = 0; i < package.cells.size(); ++i) {
      const MapCell& cell = package.cells[i];
      int cx = box.x + kBoxPadding + static_cast<int>(i % kMapRowWidth) * kCellStep;
      int cy = box.y + kBoxPadding + static_cast<int>(i / kMapRowWidth) * kCellStep;
      svg += "<g class=\"class-cell\"><rect x=\"" + std::to_string(cx) + "\" y=\"" +
             std::to_string(cy) + "\" width=\"" + std::to_string(kCellSize) + "\" height=\"" +
             std::to_string(kCellSize) + "\" fill=\"" + std::string(cluster_color(cell.cluster_id)) +
             "\" stroke=\"#333\"><title>" + escaped(cell.class_id.fqn) + "</title></rect>";
      svg += "<text x=\"" + std::to_string(cx + kCellSize / 2) + "\" y=\"" +
             std::to_string(cy + kCellSize / 2 + 4) +
             "\" text-anchor=\"middle\" font-size=\"11\" fill=\"#000\">" +
             std::to_string(cell.cluster_id) + "</text></g>\n";
    }
    // the text below the rectangle is the package name
    svg += "<text class=\"package-label\" x=\"" + std::to_string(box.x) + "\" y=\"" +
           std::to_string(box.y + box.height + 14) + "\" font-size=\"12\">" +
           escaped(package.name.empty() ? "(default package)" : package.name) + "</text>\n";
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void append_stats_row(std::string& out, std::string_view label,
                      const std::optional<DescriptiveStats>& stats) {
  out += "<tr><td>";
  append_escaped(out, label);
  out += "</td>";
  if (stats) {
    out += "<td>" + real(stats->mean) + "</td><td>" + real(stats->std_dev) + "</td><td>" +
           real(stats->min) + "</td><td>" + real(stats->median) + "</td><td>" + real(stats->max) +
           "</td>";
  } else {
    out += "<td>-</td><td>-</td><td>-</td><td>-</td><td>-</td>";
  }
  out += "</tr>\n";
}

}  // namespace

std::string render_html(const DistributionMapModel& model, const AnalysisReport& report) {
  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n";
  html += "<title>Co-change distribution map</title>\n<style>\n";
  html += "body{font-family:sans-serif;margin:24px;color:#222}\n";
  html += "table{border-collapse:collapse;margin:12px 0}\n";
  html += "td,th{border:1px solid #999;padding:4px 10px;text-align:right}\n";
  html += "th{background:#eee}\ntd:first-child,th:first-child{text-align:left}\n";
  html += ".swatch{display:inline-block;width:14px;height:14px;margin-right:6px;vertical-align:middle;border:1px solid #333}\n";
  html += "</style>\n</head>\n<body>\n";
  html += "<h1>Co-change distribution map</h1>\n";

  html += "<p>Repository log: <code>" + escaped(report.repo_log_path) + "</code> (" +
          std::string(to_string(report.vcs)) + "), " + std::to_string(report.commit_count) +
          " commits";
  if (!report.first_commit_time.empty()) {
    html += " from " + escaped(report.first_commit_time) + " to " + escaped(report.last_commit_time);
  }
  html += ".</p>\n";

  if (model.packages.empty()) {
    html += "<p><strong>No co-change clusters were retrieved.</strong> "
            "The history may be too short, or the thresholds too strict.</p>\n";
  } else {
    html += render_map_svg(model);
    html += "<h2>Legend</h2>\n<p>\n";
    for (const auto& [id, color] : model.legend) {
      html += "<span class=\"swatch\" style=\"background:" + color + "\"></span>cluster " +
              std::to_string(id) + "&nbsp;&nbsp;\n";
    }
    html += "</p>\n";
  }

  html += "<h2>Commit filters</h2>\n<table>\n";
  html += "<tr><th>Stage</th><th>Commits</th></tr>\n";
  html += "<tr><td>extracted</td><td>" + std::to_string(report.attrition.input_commits) + "</td></tr>\n";
  html += "<tr><td>removed: no maintenance issue</td><td>" +
          std::to_string(report.attrition.removed_no_maintenance_issue) + "</td></tr>\n";
  html += "<tr><td>removed: no classes changed</td><td>" +
          std::to_string(report.attrition.removed_no_classes) + "</td></tr>\n";
  html += "<tr><td>removed: multiple issues</td><td>" +
          std::to_string(report.attrition.removed_multiple_issues) + "</td></tr>\n";
  html += "<tr><td>removed: too scattered</td><td>" +
          std::to_string(report.attrition.removed_scattered) + "</td></tr>\n";
  html += "<tr><td>useful change sets</td><td>" + std::to_string(report.attrition.survivors) +
          "</td></tr>\n</table>\n";

  html += "<h2>Co-change graph</h2>\n<table>\n";
  html += "<tr><th></th><th>Vertices</th><th>Edges</th><th>Density</th></tr>\n";
  html += "<tr><td>before pruning</td><td>" + std::to_string(report.graph_before.vertex_count) +
          "</td><td>" + std::to_string(report.graph_before.edge_count) + "</td><td>" +
          real(report.graph_before.density) + "</td></tr>\n";
  html += "<tr><td>after pruning (min weight " + std::to_string(report.min_edge_weight) +
          ")</td><td>" + std::to_string(report.graph_after.vertex_count) + "</td><td>" +
          std::to_string(report.graph_after.edge_count) + "</td><td>" +
          real(report.graph_after.density) + "</td></tr>\n</table>\n";

  html += "<h2>Clusters (" + std::to_string(report.clusters.size()) + ")</h2>\n";
  if (!report.cluster_metrics.empty()) {
    html += "<table>\n<tr><th>Cluster</th><th>Size</th><th>Density</th><th>Avg edge weight</th>"
            "<th>Focus</th><th>Spread</th><th>Pattern</th></tr>\n";
    for (const ClusterMetrics& m : report.cluster_metrics) {
      html += "<tr><td>" + std::to_string(m.cluster_id) + "</td><td>" + std::to_string(m.size) +
              "</td><td>" + real(m.density) + "</td><td>" + real(m.avg_edge_weight) + "</td><td>" +
              real(m.focus) + "</td><td>" + std::to_string(m.spread) + "</td><td>" +
              std::string(to_string(m.pattern)) + "</td></tr>\n";
    }
    html += "</table>\n";

    html += "<h2>Summary statistics</h2>\n<table>\n";
    html += "<tr><th>Metric</th><th>Mean</th><th>Std dev</th><th>Min</th><th>Median</th><th>Max</th></tr>\n";
    append_stats_row(html, "cluster size", report.size_stats);
    append_stats_row(html, "cluster density", report.density_stats);
    append_stats_row(html, "avg edge weight", report.avg_edge_weight_stats);
    append_stats_row(html, "focus", report.focus_stats);
    append_stats_row(html, "spread", report.spread_stats);
    html += "</table>\n";
  }

  html += "</body>\n</html>\n";
  return html;
}

}  // namespace cochange
