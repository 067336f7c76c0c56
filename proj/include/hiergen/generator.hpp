#pragma once

// Top-level generation: route n insertion points, draw each point from the
// node it lands in, then drop subtrees that received no points.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "hiergen/kernel.hpp"
#include "hiergen/model.hpp"
#include "hiergen/random.hpp"
#include "hiergen/tssb.hpp"

namespace hiergen {

struct Dataset {
  Hierarchy hierarchy;
  std::vector<DataPoint> points;  // ascending by id
};

struct GenerateOptions {
  bool prune = true;
};

/// Removes every node whose subtree holds no points. The root always stays.
/// Sticks that point at removed children are kept so the retained state is
/// still the state routing produced.
inline Hierarchy prune(Hierarchy hierarchy) {
  std::set<NodePath> keep;
  keep.insert(NodePath{});
  for (const auto& [path, node] : hierarchy.nodes()) {
    if (node.point_ids.empty()) continue;
    for (std::size_t len = path.depth(); len > 0; --len) {
      if (!keep.insert(path.prefix(len)).second) break;
    }
  }
  std::erase_if(hierarchy.nodes(), [&](const auto& entry) { return !keep.contains(entry.first); });
  return hierarchy;
}

inline Dataset generate(const GeneratorParams& params, GenerateOptions options = {}) {
  validate(params);
  RandomSource rng(params.seed);

  Dataset out{Hierarchy(params), {}};
  ensure_root(out.hierarchy);
  out.points.reserve(params.n);

  for (PointId id = 0; id < params.n; ++id) {
    const double insertion = draw_uniform_open(rng);
    RoutingOutcome outcome = route(out.hierarchy, rng, insertion);
    NodeState& owner = out.hierarchy.at(outcome.destination);
    out.points.push_back({id, draw_point(owner.distribution, rng), outcome.destination});
    owner.point_ids.push_back(id);
  }

  if (options.prune) out.hierarchy = prune(std::move(out.hierarchy));
  return out;
}

}  // namespace hiergen
