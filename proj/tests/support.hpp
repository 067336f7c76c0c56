#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "hiergen/generator.hpp"
#include "hiergen/model.hpp"

namespace hiergen::testing {

/// Hierarchy with the given nodes, each with a 1-d unit Gaussian at 0.
inline Hierarchy make_tree(std::initializer_list<NodePath> paths, std::size_t d = 1) {
  GeneratorParams params;
  params.d = d;
  Hierarchy h(params);
  for (const auto& path : paths) {
    NodeState node;
    node.path = path;
    node.distribution = {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    h.insert(std::move(node));
  }
  return h;
}

inline GeneratorParams small_params(std::uint64_t seed, std::uint64_t n = 500) {
  GeneratorParams p;
  p.n = n;
  p.d = 2;
  p.alpha0 = 5.0;
  p.lambda = 0.5;
  p.gamma = 1.0;
  p.seed = seed;
  return p;
}

}  // namespace hiergen::testing
