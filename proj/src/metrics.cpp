#include "cochange/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cochange/errors.hpp"

namespace cochange {

PackageStructure PackageStructure::from_clusters(std::span<const CoChangeCluster> clusters) {
  PackageStructure structure;
  for (const CoChangeCluster& cluster : clusters) {
    for (const ClassId& member : cluster.members) {
      structure.packages[std::string(package_of(member))].push_back(member);
    }
  }
  for (auto& [_, members] : structure.packages) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  return structure;
}

std::string_view to_string(DistributionPattern pattern) {
  switch (pattern) {
    case DistributionPattern::WellEncapsulated: return "WellEncapsulated";
    case DistributionPattern::PartiallyEncapsulated: return "PartiallyEncapsulated";
    case DistributionPattern::WellConfined: return "WellConfined";
    case DistributionPattern::Crosscutting: return "Crosscutting";
  }
  return "Unknown";
}

void validate(const PatternThresholds& thresholds) {
  if (thresholds.encapsulation_epsilon < 0.0)
    throw UsageError("encapsulation_epsilon must be >= 0");
  if (!(thresholds.crosscutting_focus_max >= 0.0 &&
        thresholds.crosscutting_focus_max < thresholds.partial_focus_min &&
        thresholds.partial_focus_min <= 1.0))
    throw UsageError("pattern thresholds must satisfy 0 <= cc_focus < focus_min <= 1");
  if (thresholds.crosscutting_spread_min < 1)
    throw UsageError("crosscutting_spread_min must be >= 1");
}

namespace {

std::size_t intersection_size(std::span<const ClassId> a, std::span<const ClassId> b) {
  // both sorted
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++count;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return count;
}

}  // namespace

double touch_cluster_in_package(const CoChangeCluster& q, std::span<const ClassId> package_members) {
  if (package_members.empty()) return 0.0;
  return static_cast<double>(intersection_size(q.members, package_members)) /
         static_cast<double>(package_members.size());
}

double touch_package_in_cluster(std::span<const ClassId> package_members, const CoChangeCluster& q) {
  if (q.members.empty()) throw std::invalid_argument("touch: cluster must be non-empty");
  return static_cast<double>(intersection_size(package_members, q.members)) /
         static_cast<double>(q.members.size());
}

double focus(const CoChangeCluster& q, const PackageStructure& structure) {
  if (q.members.empty()) throw std::invalid_argument("focus: cluster must be non-empty");
  std::size_t covered = 0;
  double total = 0.0;
  for (const auto& [_, members] : structure.packages) {
    std::size_t common = intersection_size(q.members, members);
    if (common == 0) continue;
    covered += common;
    double in_package = static_cast<double>(common) / static_cast<double>(members.size());
    double of_cluster = static_cast<double>(common) / static_cast<double>(q.members.size());
    total += in_package * of_cluster;
  }
  if (covered != q.members.size())
    throw ConsistencyError("focus: cluster has members outside the package structure");
  return total;
}

std::size_t spread(const CoChangeCluster& q, const PackageStructure& structure) {
  if (q.members.empty()) throw std::invalid_argument("spread: cluster must be non-empty");
  std::size_t count = 0;
  for (const auto& [_, members] : structure.packages) {
    if (intersection_size(q.members, members) > 0) ++count;
  }
  return count;
}

ClusterShape cluster_stats(const CoChangeCluster& q, const CoChangeGraph& graph) {
  ClusterShape shape;
  shape.size = q.size();

  std::size_t intra_edges = 0;
  Weight intra_weight = 0;
  for (std::size_t i = 0; i < q.members.size(); ++i) {
    auto a = graph.find_vertex(q.members[i]);
    if (!a) throw std::invalid_argument("cluster_stats: '" + q.members[i].fqn + "' is not a graph vertex");
    for (std::size_t j = i + 1; j < q.members.size(); ++j) {
      auto b = graph.find_vertex(q.members[j]);
      if (!b) throw std::invalid_argument("cluster_stats: '" + q.members[j].fqn + "' is not a graph vertex");
      Weight w = graph.weight_between(*a, *b);
      if (w > 0) {
        ++intra_edges;
        intra_weight += w;
      }
    }
  }

  if (shape.size >= 2) {
    shape.density = 2.0 * static_cast<double>(intra_edges) /
                    (static_cast<double>(shape.size) * static_cast<double>(shape.size - 1));
  }
  if (intra_edges > 0) {
    shape.avg_edge_weight = static_cast<double>(intra_weight) / static_cast<double>(intra_edges);
  }
  return shape;
}

DistributionPattern classify_pattern(double focus_value, std::size_t spread_value,
                                     const PatternThresholds& thresholds) {
  if (!(focus_value >= 0.0 && focus_value <= 1.0))
    throw std::invalid_argument("classify_pattern: focus must be in [0, 1]");
  if (spread_value < 1) throw std::invalid_argument("classify_pattern: spread must be >= 1");

  if (focus_value >= 1.0 - thresholds.encapsulation_epsilon)
    return DistributionPattern::WellEncapsulated;
  if (focus_value >= thresholds.partial_focus_min)
    return DistributionPattern::PartiallyEncapsulated;
  if (spread_value >= static_cast<std::size_t>(thresholds.crosscutting_spread_min) &&
      focus_value <= thresholds.crosscutting_focus_max)
    return DistributionPattern::Crosscutting;
  return DistributionPattern::WellConfined;
}

DescriptiveStats descriptive_stats(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("descriptive_stats: empty value list");

  DescriptiveStats stats;
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());

  double sq = 0.0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.std_dev = std::sqrt(sq / static_cast<double>(values.size()));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  stats.min = sorted.front();
  stats.max = sorted.back();
  std::size_t mid = sorted.size() / 2;
  stats.median = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  return stats;
}

}  // namespace cochange
