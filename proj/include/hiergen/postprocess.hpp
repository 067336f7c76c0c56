#pragma once

// Post-processing passes: likelihood-based reassignment and per-dimension
// affine rescaling.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "hiergen/generator.hpp"
#include "hiergen/kernel.hpp"
#include "hiergen/model.hpp"

namespace hiergen {

namespace detail {

// log_likelihood() with the per-node logs hoisted out. The arithmetic is
// term-for-term the same, so results are bit-identical.
struct LikelihoodTable {
  std::vector<const NodePath*> paths;
  std::vector<const NodeDistribution*> dists;
  std::vector<double> log_sigmas;  // node-major, d per node
  std::size_t d = 0;

  explicit LikelihoodTable(const Hierarchy& hierarchy) : d(hierarchy.params().d) {
    for (const auto& [path, node] : hierarchy.nodes()) {
      paths.push_back(&path);
      dists.push_back(&node.distribution);
      for (double s : node.distribution.sigmas) log_sigmas.push_back(std::log(s));
    }
  }

  double evaluate(std::size_t node, std::span<const double> x) const {
    constexpr double half_log_two_pi = 0.91893853320467274178;
    const NodeDistribution& dist = *dists[node];
    double total = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double z = (x[k] - dist.means[k]) / dist.sigmas[k];
      total -= 0.5 * z * z + log_sigmas[node * d + k] + half_log_two_pi;
    }
    return total;
  }
};

inline void rebuild_ownership(Hierarchy& hierarchy, const std::vector<DataPoint>& points) {
  for (auto& [path, node] : hierarchy.nodes()) node.point_ids.clear();
  for (const DataPoint& point : points) hierarchy.at(point.owner).point_ids.push_back(point.id);
}

}  // namespace detail

/// Moves each point to its maximum-likelihood node. Nodes, edges and node
/// parameters are left untouched.
inline Dataset reassign(Dataset data) {
  const detail::LikelihoodTable table(data.hierarchy);
  const std::size_t count = table.paths.size();
  for (DataPoint& point : data.points) {
    const std::span<const double> x(point.features);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t choice = count;
    bool current_is_best = false;
    // Map order is lexicographic, so the first maximizer met at a given depth
    // is the lexicographically smallest one at that depth.
    for (std::size_t i = 0; i < count; ++i) {
      const double ll = table.evaluate(i, x);
      const bool is_current = (*table.paths[i] == point.owner);
      if (ll > best) {
        best = ll;
        choice = i;
        current_is_best = is_current;
      } else if (ll == best) {
        current_is_best = current_is_best || is_current;
        if (table.paths[i]->depth() < table.paths[choice]->depth()) choice = i;
      }
    }
    if (!current_is_best && choice < count) point.owner = *table.paths[choice];
  }
  detail::rebuild_ownership(data.hierarchy, data.points);
  return data;
}

struct AffineTransform {
  std::vector<double> scale;
  std::vector<double> offset;
};

/// value' = value * scale + offset for features and means; sigma' = sigma * scale.
inline Dataset rescale(Dataset data, const AffineTransform& transform) {
  const std::size_t d = data.hierarchy.params().d;
  if (transform.scale.size() != d || transform.offset.size() != d) {
    throw ParameterError("scale", "scale and offset need one entry per dimension");
  }
  for (double s : transform.scale) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("scale", "scale must be > 0");
  }
  for (double o : transform.offset) {
    if (!std::isfinite(o)) throw ParameterError("offset", "offset must be finite");
  }
  for (auto& [path, node] : data.hierarchy.nodes()) {
    for (std::size_t k = 0; k < d; ++k) {
      node.distribution.means[k] = node.distribution.means[k] * transform.scale[k] + transform.offset[k];
      node.distribution.sigmas[k] *= transform.scale[k];
    }
  }
  for (DataPoint& point : data.points) {
    for (std::size_t k = 0; k < d; ++k) {
      point.features[k] = point.features[k] * transform.scale[k] + transform.offset[k];
    }
  }
  return data;
}

/// Transform that maps the points' bounding box onto [lo, hi] in every
/// dimension. Degenerate extents (all points equal) get scale 1 and are
/// centred in the box.
inline AffineTransform fit_box(const std::vector<DataPoint>& points, std::size_t d, double lo, double hi) {
  if (!(hi > lo)) throw ParameterError("fit_box", "box upper bound must exceed lower bound");
  AffineTransform t{std::vector<double>(d, 1.0), std::vector<double>(d, 0.0)};
  if (points.empty()) return t;
  for (std::size_t k = 0; k < d; ++k) {
    double min = std::numeric_limits<double>::infinity();
    double max = -min;
    for (const DataPoint& p : points) {
      min = std::min(min, p.features[k]);
      max = std::max(max, p.features[k]);
    }
    if (max > min) {
      t.scale[k] = (hi - lo) / (max - min);
      t.offset[k] = lo - min * t.scale[k];
    } else {
      t.offset[k] = 0.5 * (lo + hi) - min;
    }
  }
  return t;
}

}  // namespace hiergen
