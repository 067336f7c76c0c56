#pragma once

// Deterministic random source and the samplers the generator needs.
//
// Engine: xoshiro256** 1.0 (Blackman & Vigna), state seeded by four
// successive SplitMix64 outputs of the 64-bit seed. Child streams are
// derived with fork(i): the child seed is splitmix64(seed ^ splitmix64(i + 1)),
// which depends only on the parent seed and the index, never on how many
// draws the parent has made.
//
// All samplers use only +,-,*,/, sqrt, log and pow on doubles, so a given
// seed produces the same sequence on any IEEE-754 platform with a correctly
// rounded libm for those calls.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hiergen {

class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) noexcept : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = s;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Independent stream for replicate or worker `index`.
  RandomSource fork(std::uint64_t index) const noexcept {
    return RandomSource(splitmix64(seed_ ^ splitmix64(index + 1)));
  }

  /// 53-bit uniform in [0,1).
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

/// Uniform on the open interval (0,1); a zero draw is rejected and redrawn.
inline double draw_uniform_open(RandomSource& rng) noexcept {
  for (;;) {
    const double u = rng.next_double();
    if (u > 0.0) return u;  // next_double() < 1 always
  }
}

/// Beta(1,b) by inverse CDF: x = 1 - (1-u)^(1/b).
inline double draw_beta_one(RandomSource& rng, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw ParameterError("b", "Beta(1,b) needs b > 0");
  }
  for (;;) {
    const double u = draw_uniform_open(rng);
    const double x = 1.0 - std::pow(1.0 - u, 1.0 / b);
    // Very small or very large b can round to an endpoint.
    if (x > 0.0 && x < 1.0) return x;
  }
}

/// Standard normal via the Marsaglia polar method.
inline double draw_standard_normal(RandomSource& rng) noexcept {
  for (;;) {
    const double v1 = 2.0 * rng.next_double() - 1.0;
    const double v2 = 2.0 * rng.next_double() - 1.0;
    const double s = v1 * v1 + v2 * v2;
    if (s > 0.0 && s < 1.0) {
      return v1 * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

inline double draw_gaussian(RandomSource& rng, double mean, double sigma) {
  if (!(sigma >= 0.0)) {
    throw ParameterError("sigma", "Gaussian sigma must be >= 0");
  }
  if (sigma == 0.0) return mean;
  return mean + sigma * draw_standard_normal(rng);
}

/// Gamma(shape, 1) by Marsaglia & Tsang (2000). Shapes below one use the
/// boost G(a) = G(a+1) * U^(1/a).
inline double draw_gamma(RandomSource& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw ParameterError("shape", "gamma shape must be > 0");
  }
  if (shape < 1.0) {
    const double g = draw_gamma(rng, shape + 1.0);
    return g * std::pow(draw_uniform_open(rng), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = draw_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = draw_uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// Beta(p,q) as Gp / (Gp + Gq). Endpoint results are redrawn.
inline double draw_beta(RandomSource& rng, double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("p", "Beta shape p must be > 0");
  if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("q", "Beta shape q must be > 0");
  for (;;) {
    const double gp = draw_gamma(rng, p);
    const double gq = draw_gamma(rng, q);
    const double sum = gp + gq;
    if (!(sum > 0.0)) continue;
    const double x = gp / sum;
    if (x > 0.0 && x < 1.0) return x;
  }
}

}  // namespace hiergen
