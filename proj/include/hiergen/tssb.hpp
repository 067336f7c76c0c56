#pragma once

// Stick-breaking routing over a lazily instantiated tree.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "hiergen/kernel.hpp"
#include "hiergen/model.hpp"
#include "hiergen/random.hpp"

namespace hiergen {

class DepthLimitError : public std::runtime_error {
 public:
  explicit DepthLimitError(std::size_t limit)
      : std::runtime_error("routing exceeded max_depth " + std::to_string(limit)), limit_(limit) {}
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

/// alpha0 * lambda^depth
inline double alpha_at(const GeneratorParams& params, std::size_t depth) {
  return params.alpha0 * std::pow(params.lambda, static_cast<double>(depth));
}

struct RoutingOutcome {
  NodePath destination;
  std::size_t sticks_drawn = 0;
};

/// Adds the root with its distribution when the hierarchy is empty.
inline NodeState& ensure_root(Hierarchy& hierarchy) {
  if (auto* root = hierarchy.find(NodePath{})) return *root;
  NodeState root;
  root.distribution = root_distribution(hierarchy.params());
  return hierarchy.insert(std::move(root));
}

/// Walks `insertion` down the tree, drawing any missing nu, psi and child
/// distributions on the way. Every drawn value is stored in `hierarchy`.
inline RoutingOutcome route(Hierarchy& hierarchy, RandomSource& rng, double insertion) {
  if (!(insertion > 0.0 && insertion < 1.0)) {
    throw ParameterError("insertion", "insertion point must lie in (0,1)");
  }
  const GeneratorParams& params = hierarchy.params();
  const KernelParams kernel = KernelParams::from(params);

  RoutingOutcome outcome;
  NodeState* current = hierarchy.find(NodePath{});
  if (current == nullptr) throw std::logic_error("route: hierarchy has no root");

  double x = insertion;
  for (;;) {
    const std::size_t depth = current->path.depth();
    if (!current->nu) {
      current->nu = draw_beta_one(rng, alpha_at(params, depth));
      ++outcome.sticks_drawn;
    }
    const double nu = *current->nu;
    if (x <= nu) {
      outcome.destination = current->path;
      return outcome;
    }
    if (depth >= params.max_depth) throw DepthLimitError(params.max_depth);
    x = (x - nu) / (1.0 - nu);

    for (std::uint32_t i = 0;; ++i) {
      if (i == current->psi_sticks.size()) {
        current->psi_sticks.push_back(draw_beta_one(rng, params.gamma));
        ++outcome.sticks_drawn;
      }
      const double psi = current->psi_sticks[i];
      NodePath child_path = current->path.child(i);
      NodeState* child = hierarchy.find(child_path);
      if (child == nullptr) {
        NodeState state;
        state.path = std::move(child_path);
        state.distribution = derive_child(current->distribution, kernel, rng);
        child = &hierarchy.insert(std::move(state));
      }
      if (x <= psi) {
        x = x / psi;
        current = child;
        break;
      }
      x = (x - psi) / (1.0 - psi);
    }
  }
}

/// Routing mass held by the instantiated nodes that have a nu stick: the sum
/// over such nodes of nu times the product of the stick pieces on the way.
inline double node_mass_prefix(const Hierarchy& hierarchy) {
  const NodeState* root = hierarchy.find(NodePath{});
  if (root == nullptr || !root->nu) return 0.0;

  // Depth-first accumulation; `reach` is the mass entering a node.
  double total = 0.0;
  auto visit = [&](auto&& self, const NodeState& node, double reach) -> void {
    if (!node.nu) return;
    total += reach * *node.nu;
    double remaining = reach * (1.0 - *node.nu);
    for (std::uint32_t i = 0; i < node.psi_sticks.size(); ++i) {
      const double psi = node.psi_sticks[i];
      if (const NodeState* child = hierarchy.find(node.path.child(i))) {
        self(self, *child, remaining * psi);
      }
      remaining *= 1.0 - psi;
    }
  };
  visit(visit, *root, 1.0);
  return total;
}

/// Probability that a fresh insertion stops at `path`, given the drawn
/// sticks. Zero when any stick on the way is missing.
inline double arrival_probability(const Hierarchy& hierarchy, const NodePath& path) {
  double mass = 1.0;
  NodePath at;
  for (std::size_t level = 0;; ++level) {
    const NodeState* node = hierarchy.find(at);
    if (node == nullptr || !node->nu) return 0.0;
    if (level == path.depth()) return mass * *node->nu;
    mass *= 1.0 - *node->nu;
    const std::uint32_t index = path.indices()[level];
    if (index >= node->psi_sticks.size()) return 0.0;
    for (std::uint32_t j = 0; j < index; ++j) mass *= 1.0 - node->psi_sticks[j];
    mass *= node->psi_sticks[index];
    at = at.child(index);
  }
}

}  // namespace hiergen
