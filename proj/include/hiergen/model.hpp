#pragma once

// Shared domain types: parameters, node identity, node state, hierarchy and
// data points.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hiergen/random.hpp"

namespace hiergen {

struct GeneratorParams {
  std::uint64_t n = 0;
  std::size_t d = 0;
  double alpha0 = 1.0;
  double lambda = 0.5;
  double gamma = 0.2;
  double p = 1.0;
  double q = 5.0;
  double sigma_min = 0.05;
  double sigma_max = 10.0;
  std::uint64_t seed = 0;
  std::size_t max_depth = 512;

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// First violated invariant, or nullopt when the parameters are usable.
inline std::optional<ParameterError> check(const GeneratorParams& params) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (params.d < 1) return ParameterError("d", "dimension count must be >= 1");
  if (!positive(params.alpha0)) return ParameterError("alpha0", "must be > 0");
  if (!positive(params.lambda)) return ParameterError("lambda", "must be > 0");
  if (!positive(params.gamma)) return ParameterError("gamma", "must be > 0");
  if (!positive(params.p)) return ParameterError("p", "must be > 0");
  if (!positive(params.q)) return ParameterError("q", "must be > 0");
  if (!(params.sigma_min >= 0.0) || !std::isfinite(params.sigma_min)) {
    return ParameterError("sigma_min", "must be >= 0");
  }
  if (!positive(params.sigma_max)) return ParameterError("sigma_max", "must be > 0");
  if (!(params.sigma_min < params.sigma_max)) {
    return ParameterError("sigma_min", "sigma_min must be < sigma_max");
  }
  if (params.max_depth < 1) return ParameterError("max_depth", "must be >= 1");
  return std::nullopt;
}

/// Throws the ParameterError reported by check().
inline void validate(const GeneratorParams& params) {
  if (auto err = check(params)) throw *err;
}

/// Child indices from the root; the empty path is the root. Ordering is
/// lexicographic, so a sorted sequence of paths is a depth-first pre-order.
class NodePath {
 public:
  NodePath() = default;
  explicit NodePath(std::vector<std::uint32_t> indices) : indices_(std::move(indices)) {}
  NodePath(std::initializer_list<std::uint32_t> indices) : indices_(indices) {}

  std::size_t depth() const noexcept { return indices_.size(); }
  bool is_root() const noexcept { return indices_.empty(); }
  const std::vector<std::uint32_t>& indices() const noexcept { return indices_; }

  NodePath child(std::uint32_t index) const {
    NodePath out = *this;
    out.indices_.push_back(index);
    return out;
  }

  /// Precondition: !is_root().
  NodePath parent() const {
    NodePath out = *this;
    out.indices_.pop_back();
    return out;
  }

  NodePath prefix(std::size_t length) const {
    return NodePath(std::vector<std::uint32_t>(indices_.begin(),
                                               indices_.begin() + static_cast<std::ptrdiff_t>(length)));
  }

  bool is_ancestor_of(const NodePath& other) const noexcept {
    if (indices_.size() >= other.indices_.size()) return false;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] != other.indices_[i]) return false;
    }
    return true;
  }

  /// "/" for the root, otherwise "/0/2/1".
  std::string to_string() const {
    if (indices_.empty()) return "/";
    std::string out;
    for (auto i : indices_) {
      out += '/';
      out += std::to_string(i);
    }
    return out;
  }

  friend auto operator<=>(const NodePath&, const NodePath&) = default;

 private:
  std::vector<std::uint32_t> indices_;
};

/// Diagonal Gaussian: one mean and one sigma per dimension.
struct NodeDistribution {
  std::vector<double> means;
  std::vector<double> sigmas;

  std::size_t dimension() const noexcept { return means.size(); }

  friend bool operator==(const NodeDistribution&, const NodeDistribution&) = default;
};

using PointId = std::uint64_t;

struct NodeState {
  NodePath path;
  std::optional<double> nu;         // stop stick, drawn on first arrival
  std::vector<double> psi_sticks;   // one per instantiated child index
  NodeDistribution distribution;
  std::vector<PointId> point_ids;   // ascending
};

struct DataPoint {
  PointId id = 0;
  std::vector<double> features;
  NodePath owner;

  friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

class Hierarchy {
 public:
  using NodeMap = std::map<NodePath, NodeState>;

  Hierarchy() = default;
  explicit Hierarchy(GeneratorParams params) : params_(std::move(params)) {}

  const GeneratorParams& params() const noexcept { return params_; }
  const NodeMap& nodes() const noexcept { return nodes_; }
  NodeMap& nodes() noexcept { return nodes_; }

  std::size_t size() const noexcept { return nodes_.size(); }
  bool contains(const NodePath& path) const { return nodes_.contains(path); }

  NodeState* find(const NodePath& path) {
    auto it = nodes_.find(path);
    return it == nodes_.end() ? nullptr : &it->second;
  }
  const NodeState* find(const NodePath& path) const {
    auto it = nodes_.find(path);
    return it == nodes_.end() ? nullptr : &it->second;
  }

  NodeState& at(const NodePath& path) { return nodes_.at(path); }
  const NodeState& at(const NodePath& path) const { return nodes_.at(path); }

  NodeState& insert(NodeState state) {
    auto [it, inserted] = nodes_.insert_or_assign(state.path, std::move(state));
    return it->second;
  }

  /// Direct children currently stored, ascending by index.
  std::vector<NodePath> children(const NodePath& path) const {
    std::vector<NodePath> out;
    auto it = nodes_.upper_bound(path);
    for (; it != nodes_.end() && path.is_ancestor_of(it->first); ++it) {
      if (it->first.depth() == path.depth() + 1) out.push_back(it->first);
    }
    return out;
  }

 private:
  GeneratorParams params_;
  NodeMap nodes_;
};

}  // namespace hiergen
