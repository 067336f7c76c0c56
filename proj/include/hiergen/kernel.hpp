#pragma once

// Parent-to-child distribution transition and diagonal Gaussian likelihood.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "hiergen/model.hpp"
#include "hiergen/random.hpp"

namespace hiergen {

struct KernelParams {
  double p = 1.0;
  double q = 5.0;
  double sigma_min = 0.05;

  static KernelParams from(const GeneratorParams& params) {
    return {params.p, params.q, params.sigma_min};
  }
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root distribution: Gauss(0, sigma_max) in every dimension.
inline NodeDistribution root_distribution(const GeneratorParams& params) {
  return {std::vector<double>(params.d, 0.0), std::vector<double>(params.d, params.sigma_max)};
}

/// Per dimension: mean ~ Gauss(parent mean, parent sigma), sigma = parent
/// sigma * Beta(p,q) clamped below at sigma_min. A child never gets a larger
/// sigma than its parent, even when the parent itself sits below sigma_min.
inline NodeDistribution derive_child(const NodeDistribution& parent, const KernelParams& kernel,
                                     RandomSource& rng) {
  NodeDistribution child;
  const std::size_t d = parent.dimension();
  child.means.resize(d);
  child.sigmas.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double parent_sigma = parent.sigmas[k];
    child.means[k] = draw_gaussian(rng, parent.means[k], parent_sigma);
    const double ratio = draw_beta(rng, kernel.p, kernel.q);
    const double sigma = std::max(parent_sigma * ratio, kernel.sigma_min);
    child.sigmas[k] = std::min(sigma, parent_sigma);
  }
  return child;
}

inline double log_likelihood(std::span<const double> features, const NodeDistribution& dist) {
  if (features.size() != dist.dimension() || dist.sigmas.size() != dist.dimension()) {
    throw DimensionError("point and distribution dimensions differ");
  }
  constexpr double half_log_two_pi = 0.91893853320467274178;  // 0.5 * log(2*pi)
  double total = 0.0;
  for (std::size_t k = 0; k < features.size(); ++k) {
    const double z = (features[k] - dist.means[k]) / dist.sigmas[k];
    total -= 0.5 * z * z + std::log(dist.sigmas[k]) + half_log_two_pi;
  }
  return total;
}

inline double log_likelihood(const DataPoint& point, const NodeDistribution& dist) {
  return log_likelihood(std::span<const double>(point.features), dist);
}

inline std::vector<double> draw_point(const NodeDistribution& dist, RandomSource& rng) {
  std::vector<double> out(dist.dimension());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = draw_gaussian(rng, dist.means[k], dist.sigmas[k]);
  }
  return out;
}

}  // namespace hiergen
