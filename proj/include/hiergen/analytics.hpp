#pragma once

// Closed-form structure estimators and the Monte-Carlo simulations used to
// check them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hiergen/kernel.hpp"
#include "hiergen/model.hpp"
#include "hiergen/random.hpp"
#include "hiergen/tssb.hpp"

namespace hiergen {

/// Probability that a point stops at depth `level`:
/// prod_{i<level} a_i / prod_{j<=level} (1 + a_j) with a_i = alpha0 * lambda^i.
inline double expected_retention(double alpha0, double lambda, std::size_t level) {
  double value = 1.0;
  for (std::size_t i = 0; i <= level; ++i) {
    const double a = alpha0 * std::pow(lambda, static_cast<double>(i));
    if (i < level) value *= a;
    value /= 1.0 + a;
  }
  return value;
}

inline double retention_variance(double alpha0, double lambda, std::size_t level) {
  const double a_n = alpha0 * std::pow(lambda, static_cast<double>(level));
  double second = 2.0 / (1.0 + a_n);
  for (std::size_t i = 0; i <= level; ++i) {
    const double a = alpha0 * std::pow(lambda, static_cast<double>(i));
    if (i < level) second *= a;
    second /= 2.0 + a;
  }
  const double mean = expected_retention(alpha0, lambda, level);
  return second - mean * mean;
}

/// Share of descending points that enter the `index`-th child subtree
/// (1-based): gamma^(index-1) / (1+gamma)^index.
inline double expected_child_selection(double gamma, std::size_t index) {
  if (index < 1) throw ParameterError("index", "child index is 1-based");
  return std::pow(gamma, static_cast<double>(index - 1)) /
         std::pow(1.0 + gamma, static_cast<double>(index));
}

/// The index-n width expectation exactly as printed in the original
/// derivation, gamma^(n-1) / (1 + alpha0*lambda^j)^n. Kept only so tests can
/// show that it disagrees with simulation.
inline double printed_child_selection(double gamma, double alpha0, double lambda, std::size_t j,
                                      std::size_t index) {
  const double a = alpha0 * std::pow(lambda, static_cast<double>(j));
  return std::pow(gamma, static_cast<double>(index - 1)) / std::pow(1.0 + a, static_cast<double>(index));
}

inline double child_selection_variance(double gamma, std::size_t index) {
  if (index < 1) throw ParameterError("index", "child index is 1-based");
  const double k = static_cast<double>(index);
  const double second = 2.0 * std::pow(gamma, k - 1.0) / ((1.0 + gamma) * std::pow(2.0 + gamma, k));
  const double mean = expected_child_selection(gamma, index);
  return second - mean * mean;
}

struct SigmaRatio {
  double mean = 0.0;
  double variance = 0.0;
};

/// Moments of the child/parent sigma ratio, Beta(p,q).
inline SigmaRatio expected_sigma_ratio(double p, double q) {
  const double s = p + q;
  return {p / s, p * q / (s * s * (s + 1.0))};
}

enum class DepthRegime {
  kChaotic,          // alpha0 = 1, lambda = 1
  kShallowTop,       // alpha0 <= 1, lambda <= 1
  kDeeperTop,        // alpha0 <= 1, lambda > 1
  kDeepMidMass,      // alpha0 > 1, lambda < 1
  kDeepSpreadTop,    // alpha0 > 1, lambda >= 1
};

enum class WidthRegime { kNarrow, kChaotic, kWide };

struct Regime {
  DepthRegime depth;
  WidthRegime width;
};

inline Regime predict_regime(double alpha0, double lambda, double gamma) {
  constexpr double eps = 1e-12;
  auto is_one = [](double v) { return std::abs(v - 1.0) <= eps; };
  Regime r{};
  if (is_one(alpha0) && is_one(lambda)) {
    r.depth = DepthRegime::kChaotic;
  } else if (alpha0 <= 1.0 + eps) {
    r.depth = lambda <= 1.0 + eps ? DepthRegime::kShallowTop : DepthRegime::kDeeperTop;
  } else {
    r.depth = lambda < 1.0 - eps ? DepthRegime::kDeepMidMass : DepthRegime::kDeepSpreadTop;
  }
  if (is_one(gamma)) {
    r.width = WidthRegime::kChaotic;
  } else {
    r.width = gamma < 1.0 ? WidthRegime::kNarrow : WidthRegime::kWide;
  }
  return r;
}

constexpr std::string_view to_string(DepthRegime d) {
  switch (d) {
    case DepthRegime::kChaotic: return "chaotic";
    case DepthRegime::kShallowTop: return "shallow/top-heavy";
    case DepthRegime::kDeeperTop: return "deeper/top-heavy";
    case DepthRegime::kDeepMidMass: return "deep/mid-mass";
    case DepthRegime::kDeepSpreadTop: return "deep/top-heavy-spread";
  }
  return "?";
}

constexpr std::string_view to_string(WidthRegime w) {
  switch (w) {
    case WidthRegime::kNarrow: return "narrow";
    case WidthRegime::kChaotic: return "chaotic";
    case WidthRegime::kWide: return "wide";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monte-Carlo checks

/// Empirical proportion with its binomial standard error.
struct Proportion {
  double value = 0.0;
  double std_error = 0.0;
};

inline Proportion make_proportion(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return {};
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

/// Routes each point through its own freshly drawn tree, so the stopping
/// depth frequencies estimate the expectation over trees. Returns one
/// proportion per level 0..max_level.
inline std::vector<Proportion> simulate_retention(double alpha0, double lambda, std::size_t max_level,
                                                  std::uint64_t points, RandomSource& rng) {
  GeneratorParams params;
  params.n = 1;
  params.d = 1;
  params.alpha0 = alpha0;
  params.lambda = lambda;
  params.gamma = 1.0;
  params.max_depth = 100000;
  std::vector<std::uint64_t> hits(max_level + 1, 0);
  for (std::uint64_t i = 0; i < points; ++i) {
    Hierarchy tree(params);
    ensure_root(tree);
    const auto outcome = route(tree, rng, draw_uniform_open(rng));
    if (outcome.destination.depth() <= max_level) ++hits[outcome.destination.depth()];
  }
  std::vector<Proportion> out;
  for (auto h : hits) out.push_back(make_proportion(h, points));
  return out;
}

/// Index (1-based) of the child subtree chosen by one descending point, with
/// fresh Beta(1,gamma) sticks for every selection. Selections beyond
/// `max_index` only count toward the number of trials.
inline std::vector<Proportion> simulate_child_selection(double gamma, std::size_t max_index,
                                                        std::uint64_t selections, RandomSource& rng) {
  std::vector<std::uint64_t> hits(max_index, 0);
  for (std::uint64_t s = 0; s < selections; ++s) {
    double x = draw_uniform_open(rng);
    for (std::size_t index = 1;; ++index) {
      const double psi = draw_beta_one(rng, gamma);
      if (x <= psi) {
        if (index <= max_index) ++hits[index - 1];
        break;
      }
      x = (x - psi) / (1.0 - psi);
    }
  }
  std::vector<Proportion> out;
  for (auto h : hits) out.push_back(make_proportion(h, selections));
  return out;
}

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;          // n-1 denominator
  double mean_std_error = 0.0;
  double variance_std_error = 0.0;
};

inline SampleMoments sample_moments_with_errors(const std::vector<double>& xs) {
  SampleMoments m;
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    const double c = (x - m.mean) * (x - m.mean);
    m2 += c;
    m4 += c * c;
  }
  m.variance = m2 / (n - 1.0);
  m4 /= n;
  const double pop_var = m2 / n;
  m.mean_std_error = std::sqrt(m.variance / n);
  m.variance_std_error = std::sqrt(std::max(0.0, (m4 - pop_var * pop_var) / n));
  return m;
}

/// Child/parent sigma ratios from `draws` calls to derive_child with a
/// one-dimensional parent of the given sigma.
inline SampleMoments simulate_sigma_ratio(double p, double q, double parent_sigma, double sigma_min,
                                          std::uint64_t draws, RandomSource& rng) {
  const NodeDistribution parent{{0.0}, {parent_sigma}};
  const KernelParams kernel{p, q, sigma_min};
  std::vector<double> ratios;
  ratios.reserve(draws);
  for (std::uint64_t i = 0; i < draws; ++i) {
    ratios.push_back(derive_child(parent, kernel, rng).sigmas[0] / parent_sigma);
  }
  return sample_moments_with_errors(ratios);
}

}  // namespace hiergen
