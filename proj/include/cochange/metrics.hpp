#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cochange/clustering.hpp"
#include "cochange/graph.hpp"

namespace cochange {

// Packages restricted to classes that belong to some co-change cluster. This
// is the "P" against which focus and spread are measured; classes outside
// every cluster never enter the metrics.
struct PackageStructure {
  std::map<std::string, std::vector<ClassId>> packages;  // members sorted

  static PackageStructure from_clusters(std::span<const CoChangeCluster> clusters);
};

enum class DistributionPattern {
  WellEncapsulated,
  PartiallyEncapsulated,
  WellConfined,
  Crosscutting,
};

std::string_view to_string(DistributionPattern pattern);

struct PatternThresholds {
  double encapsulation_epsilon = 1e-9;  // focus >= 1 - epsilon counts as total
  double partial_focus_min = 0.9;
  double crosscutting_focus_max = 0.5;
  int crosscutting_spread_min = 4;
};

void validate(const PatternThresholds& thresholds);

struct DescriptiveStats {
  double mean = 0.0;
  double std_dev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct ClusterMetrics {
  int cluster_id = 0;
  std::size_t size = 0;
  double density = 0.0;
  double avg_edge_weight = 0.0;
  double focus = 0.0;
  std::size_t spread = 0;
  DistributionPattern pattern = DistributionPattern::WellConfined;
};

// Share of the package's clustered classes owned by the cluster: |q n p| / |p|.
double touch_cluster_in_package(const CoChangeCluster& q, std::span<const ClassId> package_members);

// Share of the cluster located in the package: |p n q| / |q|.
double touch_package_in_cluster(std::span<const ClassId> package_members, const CoChangeCluster& q);

// focus(q, P) = sum over packages of touch(q, p) * touch(p, q). A convex
// combination of per-package ownership shares, always in [0, 1]; exactly 1
// when the cluster owns every clustered class of every package it touches.
double focus(const CoChangeCluster& q, const PackageStructure& structure);

// Number of packages holding at least one member of q.
std::size_t spread(const CoChangeCluster& q, const PackageStructure& structure);

struct ClusterShape {
  std::size_t size = 0;
  double density = 0.0;          // over intra-cluster edges
  double avg_edge_weight = 0.0;  // 0 when the cluster has no intra edges
};

ClusterShape cluster_stats(const CoChangeCluster& q, const CoChangeGraph& graph);

DistributionPattern classify_pattern(double focus_value, std::size_t spread_value,
                                     const PatternThresholds& thresholds);

// Mean, population standard deviation, min, max, median (midpoint of the two
// central values for even counts). Throws on an empty list.
DescriptiveStats descriptive_stats(std::span<const double> values);

}  // namespace cochange
