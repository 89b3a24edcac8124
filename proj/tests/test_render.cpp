#include <doctest.h>
#include <json.hpp>

#include <functional>
#include <set>

#include "cochange/errors.hpp"
#include "cochange/report.hpp"
#include "cochange/xml_lite.hpp"
#include "testutil.hpp"

using namespace cochange;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

ClusterMetrics metrics_row(int id, std::size_t size, double focus_value, std::size_t spread_value) {
  ClusterMetrics m;
  m.cluster_id = id;
  m.size = size;
  m.density = 1.0;
  m.avg_edge_weight = 2.0;
  m.focus = focus_value;
  m.spread = spread_value;
  m.pattern = DistributionPattern::WellEncapsulated;
  return m;
}

struct MapFixture {
  std::vector<CoChangeCluster> clusters;
  PackageStructure structure;
  std::vector<ClusterMetrics> metrics;
  DistributionMapModel model;
};

MapFixture three_package_fixture() {
  MapFixture fx;
  fx.clusters = {
      testutil::make_cluster({"core.A", "core.B", "core.C", "util.K"}, 1),
      testutil::make_cluster({"io.X", "io.Y", "util.L"}, 2),
  };
  fx.structure = PackageStructure::from_clusters(fx.clusters);
  fx.metrics = {metrics_row(1, 4, 0.9, 2), metrics_row(2, 3, 0.875, 2)};
  fx.model = build_distribution_map(fx.clusters, fx.structure, fx.metrics);
  return fx;
}

}  // namespace

TEST_CASE("distribution map model ordering and colors") {
  MapFixture fx = three_package_fixture();

  REQUIRE(fx.model.packages.size() == 3);
  // descending clustered-class count, ties by name
  CHECK(fx.model.packages[0].name == "core");
  CHECK(fx.model.packages[1].name == "io");
  CHECK(fx.model.packages[2].name == "util");
  CHECK(fx.model.packages[0].cells.size() == 3);
  CHECK(fx.model.packages[2].cells.size() == 2);

  // cells grouped by cluster, then fqn
  const auto& util_cells = fx.model.packages[2].cells;
  CHECK(util_cells[0].cluster_id == 1);
  CHECK(util_cells[1].cluster_id == 2);
  CHECK(util_cells[0].class_id.fqn == "util.K");

  REQUIRE(fx.model.legend.size() == 2);
  CHECK(fx.model.legend[0].second != fx.model.legend[1].second);
  CHECK(fx.model.legend[0].second == std::string(cluster_color(1)));
}

TEST_CASE("distribution map rejects inconsistent inputs") {
  auto cluster = testutil::make_cluster({"a.X"}, 1);
  PackageStructure empty_structure;
  std::vector<ClusterMetrics> metrics = {metrics_row(1, 1, 1.0, 1)};
  CHECK_THROWS_AS(
      build_distribution_map(std::vector<CoChangeCluster>{cluster}, empty_structure, metrics),
      ConsistencyError);

  PackageStructure structure = PackageStructure::from_clusters(std::vector<CoChangeCluster>{cluster});
  CHECK_THROWS_AS(build_distribution_map(std::vector<CoChangeCluster>{cluster}, structure,
                                         std::vector<ClusterMetrics>{}),
                  ConsistencyError);
}

TEST_CASE("palette cycles with distinct colors inside one period") {
  std::set<std::string_view> colors;
  for (int id = 1; id <= 24; ++id) colors.insert(cluster_color(id));
  CHECK(colors.size() == 24);
  CHECK(cluster_color(25) == cluster_color(1));
}

namespace {

AnalysisReport small_report() {
  AnalysisReport report;
  report.repo_log_path = "mini.gitlog";
  report.vcs = VcsFormat::git;
  report.issue_paths = {"issues.xml"};
  report.commit_count = 5;
  report.first_commit_time = "2021-03-01T09:00:00Z";
  report.last_commit_time = "2021-03-02T09:00:00Z";
  report.attrition.input_commits = 5;
  report.attrition.survivors = 4;
  report.attrition.removed_no_maintenance_issue = 1;
  report.graph_before = GraphStats{3, 3, 1.0};
  report.graph_after = GraphStats{3, 3, 1.0};

  report.clusters = {testutil::make_cluster({"a.X", "a.Y", "b.Z"}, 1)};
  ClusterMetrics m = metrics_row(1, 3, 7.0 / 9.0, 2);
  m.pattern = DistributionPattern::WellConfined;
  report.cluster_metrics = {m};
  report.size_stats = DescriptiveStats{3, 0, 3, 3, 3};
  report.density_stats = DescriptiveStats{1, 0, 1, 1, 1};
  report.avg_edge_weight_stats = DescriptiveStats{2, 0, 2, 2, 2};
  report.focus_stats = DescriptiveStats{7.0 / 9.0, 0, 7.0 / 9.0, 7.0 / 9.0, 7.0 / 9.0};
  report.spread_stats = DescriptiveStats{2, 0, 2, 2, 2};

  PackageStructure structure = PackageStructure::from_clusters(report.clusters);
  report.map = build_distribution_map(report.clusters, structure, report.cluster_metrics);
  return report;
}

}  // namespace

TEST_CASE("json report is canonical and parseable") {
  AnalysisReport report = small_report();
  std::string doc = render_json(report);

  CHECK(doc.back() == '\n');
  CHECK(render_json(report) == doc);  // byte-stable

  // reals carry exactly six decimals
  CHECK(doc.find("0.777778") != std::string::npos);
  CHECK(doc.find("\"schema\":\"cochange-report/1\"") != std::string::npos);

  auto parsed = nlohmann::json::parse(doc);
  CHECK(parsed["clusters"]["count"] == 1);
  CHECK(parsed["clusters"]["items"][0]["focus"] == doctest::Approx(7.0 / 9.0).epsilon(1e-6));
  CHECK(parsed["clusters"]["items"][0]["members"].size() == 3);
  CHECK(parsed["filters"]["input_commits"] == 5);
  CHECK(parsed["graph"]["before_pruning"]["vertices"] == 3);
  CHECK(parsed["config"]["clustering"]["min_cluster_size"] == 4);
  CHECK(parsed["distribution_map"]["packages"].size() == 2);
  CHECK(parsed["history"]["first_commit_time"] == "2021-03-01T09:00:00Z");

  // top-level keys land in the byte stream in sorted order
  CHECK(doc.find("\"clusters\"") < doc.find("\"config\""));
  CHECK(doc.find("\"config\"") < doc.find("\"distribution_map\""));
  CHECK(doc.find("\"filters\"") < doc.find("\"graph\""));
  CHECK(doc.find("\"graph\"") < doc.find("\"history\""));
  CHECK(doc.find("\"history\"") < doc.find("\"inputs\""));
}

TEST_CASE("json report with no clusters is a valid stub") {
  AnalysisReport report = small_report();
  report.clusters.clear();
  report.cluster_metrics.clear();
  report.size_stats.reset();
  report.density_stats.reset();
  report.avg_edge_weight_stats.reset();
  report.focus_stats.reset();
  report.spread_stats.reset();
  report.map = DistributionMapModel{};

  auto parsed = nlohmann::json::parse(render_json(report));
  CHECK(parsed["clusters"]["count"] == 0);
  CHECK(parsed["clusters"]["items"].empty());
  CHECK(parsed["clusters"]["size_stats"].is_null());
}

TEST_CASE("html map carries one rectangle per package and one cell per class") {
  MapFixture fx = three_package_fixture();
  AnalysisReport report = small_report();
  std::string html = render_html(fx.model, report);

  CHECK(count_occurrences(html, "class=\"package-box\"") == 3);
  CHECK(count_occurrences(html, "class=\"class-cell\"") == 7);

  std::set<std::string> fills;
  std::size_t pos = 0;
  while ((pos = html.find("class=\"class-cell\"", pos)) != std::string::npos) {
    std::size_t fill = html.find("fill=\"", pos) + 6;
    fills.insert(html.substr(fill, html.find('"', fill) - fill));
    pos = fill;
  }
  CHECK(fills.size() == 2);  // one color per cluster

  // native tooltip carries the exact fqn
  CHECK(html.find("<title>core.A</title>") != std::string::npos);
  CHECK(html.find("<title>util.K</title>") != std::string::npos);
}

TEST_CASE("the inline svg is well-formed markup") {
  MapFixture fx = three_package_fixture();
  std::string html = render_html(fx.model, small_report());

  std::size_t begin = html.find("<svg");
  std::size_t end = html.find("</svg>");
  REQUIRE(begin != std::string::npos);
  REQUIRE(end != std::string::npos);
  std::string svg = html.substr(begin, end + 6 - begin);

  xml::Element root = xml::parse_document(svg, "inline svg");
  CHECK(root.name == "svg");

  std::size_t boxes = 0, cells = 0, titles = 0;
  std::function<void(const xml::Element&)> walk = [&](const xml::Element& elem) {
    const std::string* cls = elem.attribute("class");
    if (cls && *cls == "package-box") ++boxes;
    if (cls && *cls == "class-cell") ++cells;
    if (elem.name == "title") ++titles;
    for (const xml::Element& child : elem.children) walk(child);
  };
  walk(root);
  CHECK(boxes == 3);
  CHECK(cells == 7);
  CHECK(titles == 7);  // one tooltip per cell
}

TEST_CASE("html without clusters explains itself") {
  AnalysisReport report = small_report();
  report.clusters.clear();
  report.cluster_metrics.clear();
  std::string html = render_html(DistributionMapModel{}, report);
  CHECK(html.find("No co-change clusters") != std::string::npos);
  CHECK(count_occurrences(html, "class=\"package-box\"") == 0);
}

TEST_CASE("html escapes markup in names") {
  auto cluster = testutil::make_cluster({"a.We<b>ird"}, 1);
  PackageStructure structure = PackageStructure::from_clusters(std::vector<CoChangeCluster>{cluster});
  std::vector<ClusterMetrics> metrics = {metrics_row(1, 1, 1.0, 1)};
  DistributionMapModel model = build_distribution_map(std::vector<CoChangeCluster>{cluster},
                                                      structure, metrics);
  AnalysisReport report = small_report();
  std::string html = render_html(model, report);
  CHECK(html.find("<title>a.We&lt;b&gt;ird</title>") != std::string::npos);
}

TEST_CASE("graph edge dump is sorted and tab separated") {
  CoChangeGraph graph = testutil::make_graph({
      {"b.N", "a.M", 3},
      {"a.K", "a.M", 2},
  });
  CHECK(render_graph_edges(graph) == "a.K\ta.M\t2\na.M\tb.N\t3\n");
}
