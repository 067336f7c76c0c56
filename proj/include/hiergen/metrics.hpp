#pragma once

// Structure metrics (N, L, D, B, P), per-level histograms and batch
// aggregation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "hiergen/model.hpp"

namespace hiergen {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;

  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

/// Population mean and standard deviation; {0,0} for an empty sample.
inline MeanStd population_moments(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n)};
}

/// Mean and n-1 standard deviation; the deviation is 0 for fewer than two values.
inline MeanStd sample_moments(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

struct HierarchyStats {
  std::size_t node_count = 0;   // N
  std::size_t leaf_count = 0;   // L
  std::size_t depth = 0;        // D, in edges
  MeanStd breadth;              // B: nodes per level over levels 0..D
  MeanStd path_length;          // P: root-to-leaf lengths in edges
  double mean_point_depth = 0;  // average depth of the points' owners

  friend bool operator==(const HierarchyStats&, const HierarchyStats&) = default;
};

struct LevelHistogram {
  std::vector<double> instances;           // points owned per level
  std::vector<double> width;               // nodes per level
  std::vector<double> leaves;              // leaves per level
  std::vector<double> children_per_node;   // mean child count of nodes at the level
  std::map<std::size_t, double> branching; // child count -> number of nodes

  friend bool operator==(const LevelHistogram&, const LevelHistogram&) = default;
};

namespace detail {

inline std::map<NodePath, std::size_t> child_counts(const Hierarchy& hierarchy) {
  std::map<NodePath, std::size_t> counts;
  for (const auto& [path, node] : hierarchy.nodes()) {
    counts.try_emplace(path, 0);
    if (!path.is_root()) ++counts[path.parent()];
  }
  return counts;
}

}  // namespace detail

inline HierarchyStats compute_stats(const Hierarchy& hierarchy) {
  HierarchyStats stats;
  if (hierarchy.size() == 0) return stats;
  const auto counts = detail::child_counts(hierarchy);

  std::vector<double> widths;
  std::vector<double> paths;
  double depth_sum = 0.0;
  std::size_t point_total = 0;
  for (const auto& [path, node] : hierarchy.nodes()) {
    const std::size_t level = path.depth();
    if (widths.size() <= level) widths.resize(level + 1, 0.0);
    widths[level] += 1.0;
    if (counts.at(path) == 0) {
      ++stats.leaf_count;
      paths.push_back(static_cast<double>(level));
    }
    depth_sum += static_cast<double>(level) * static_cast<double>(node.point_ids.size());
    point_total += node.point_ids.size();
  }
  stats.node_count = hierarchy.size();
  stats.depth = widths.size() - 1;
  stats.breadth = population_moments(widths);
  stats.path_length = population_moments(paths);
  stats.mean_point_depth = point_total == 0 ? 0.0 : depth_sum / static_cast<double>(point_total);
  return stats;
}

inline LevelHistogram compute_histograms(const Hierarchy& hierarchy) {
  LevelHistogram h;
  const auto counts = detail::child_counts(hierarchy);
  for (const auto& [path, node] : hierarchy.nodes()) {
    const std::size_t level = path.depth();
    if (h.width.size() <= level) {
      h.instances.resize(level + 1, 0.0);
      h.width.resize(level + 1, 0.0);
      h.leaves.resize(level + 1, 0.0);
      h.children_per_node.resize(level + 1, 0.0);
    }
    const std::size_t children = counts.at(path);
    h.instances[level] += static_cast<double>(node.point_ids.size());
    h.width[level] += 1.0;
    if (children == 0) h.leaves[level] += 1.0;
    h.children_per_node[level] += static_cast<double>(children);
    h.branching[children] += 1.0;
  }
  for (std::size_t level = 0; level < h.width.size(); ++level) {
    h.children_per_node[level] /= h.width[level];
  }
  return h;
}

/// Histogram from the points' owners rather than the nodes' id lists; the
/// instance row must agree with compute_histograms when ownership is consistent.
inline std::vector<double> instances_per_level(const std::vector<DataPoint>& points) {
  std::vector<double> out;
  for (const DataPoint& p : points) {
    if (out.size() <= p.owner.depth()) out.resize(p.owner.depth() + 1, 0.0);
    out[p.owner.depth()] += 1.0;
  }
  return out;
}

struct BatchSummary {
  std::size_t replicates = 0;
  MeanStd node_count;        // mean, sample std across hierarchies
  MeanStd leaf_count;
  MeanStd depth;
  MeanStd breadth;           // mean of means, mean of per-hierarchy stds
  MeanStd path_length;
  MeanStd mean_point_depth;

  // Per-level rows over levels 0..max depth of the batch; a hierarchy that
  // does not reach a level contributes 0 there.
  std::vector<MeanStd> instances;
  std::vector<MeanStd> width;
  std::vector<MeanStd> leaves;
  std::vector<MeanStd> children_per_node;
  std::map<std::size_t, MeanStd> branching;

  friend bool operator==(const BatchSummary&, const BatchSummary&) = default;
};

namespace detail {

inline std::vector<MeanStd> aggregate_rows(const std::vector<const std::vector<double>*>& rows) {
  std::size_t levels = 0;
  for (const auto* row : rows) levels = std::max(levels, row->size());
  std::vector<MeanStd> out(levels);
  std::vector<double> column(rows.size());
  for (std::size_t level = 0; level < levels; ++level) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      column[r] = level < rows[r]->size() ? (*rows[r])[level] : 0.0;
    }
    out[level] = sample_moments(column);
  }
  return out;
}

}  // namespace detail

/// Combines per-hierarchy results. N, L and D get a cross-run mean and
/// standard deviation; B and P get the mean of the per-hierarchy means and
/// the mean of the per-hierarchy standard deviations.
inline BatchSummary aggregate(std::span<const HierarchyStats> stats,
                              std::span<const LevelHistogram> histograms = {}) {
  if (stats.empty()) throw std::invalid_argument("aggregate: empty batch");
  BatchSummary s;
  s.replicates = stats.size();
  const std::size_t r = stats.size();
  std::vector<double> n(r), l(r), d(r), bm(r), bs(r), pm(r), ps(r), md(r);
  for (std::size_t i = 0; i < r; ++i) {
    n[i] = static_cast<double>(stats[i].node_count);
    l[i] = static_cast<double>(stats[i].leaf_count);
    d[i] = static_cast<double>(stats[i].depth);
    bm[i] = stats[i].breadth.mean;
    bs[i] = stats[i].breadth.std;
    pm[i] = stats[i].path_length.mean;
    ps[i] = stats[i].path_length.std;
    md[i] = stats[i].mean_point_depth;
  }
  s.node_count = sample_moments(n);
  s.leaf_count = sample_moments(l);
  s.depth = sample_moments(d);
  s.breadth = {sample_moments(bm).mean, sample_moments(bs).mean};
  s.path_length = {sample_moments(pm).mean, sample_moments(ps).mean};
  s.mean_point_depth = sample_moments(md);

  if (histograms.empty()) return s;
  if (histograms.size() != stats.size()) {
    throw std::invalid_argument("aggregate: stats and histogram counts differ");
  }
  auto rows = [&](auto member) {
    std::vector<const std::vector<double>*> out;
    for (const auto& h : histograms) out.push_back(&(h.*member));
    return detail::aggregate_rows(out);
  };
  s.instances = rows(&LevelHistogram::instances);
  s.width = rows(&LevelHistogram::width);
  s.leaves = rows(&LevelHistogram::leaves);
  s.children_per_node = rows(&LevelHistogram::children_per_node);

  std::map<std::size_t, std::vector<double>> factors;
  for (std::size_t i = 0; i < histograms.size(); ++i) {
    for (const auto& [factor, count] : histograms[i].branching) {
      auto& column = factors[factor];
      column.resize(histograms.size(), 0.0);
      column[i] = count;
    }
  }
  for (const auto& [factor, column] : factors) s.branching[factor] = sample_moments(column);
  return s;
}

}  // namespace hiergen
