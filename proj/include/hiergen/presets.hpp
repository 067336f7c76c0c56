#pragma once

// The eight experiment parameter sets s00..s07. Shared values: n=10000,
// d=2, p=1, q=5, sigma_min=0.05, sigma_max=10.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hiergen/model.hpp"

namespace hiergen {

struct Preset {
  std::string_view name;
  double alpha0;
  double lambda;
  double gamma;
};

inline constexpr std::array<Preset, 8> kPresets{{
    {"s00", 1.0, 0.5, 0.2},
    {"s01", 1.0, 1.0, 0.2},
    {"s02", 1.0, 1.0, 1.0},
    {"s03", 5.0, 0.5, 0.2},
    {"s04", 5.0, 1.0, 0.2},
    {"s05", 5.0, 0.5, 1.0},
    {"s06", 25.0, 0.5, 0.2},
    {"s07", 25.0, 0.5, 1.0},
}};

inline GeneratorParams preset_params(const Preset& preset, std::uint64_t seed = 0) {
  GeneratorParams params;
  params.n = 10000;
  params.d = 2;
  params.alpha0 = preset.alpha0;
  params.lambda = preset.lambda;
  params.gamma = preset.gamma;
  params.p = 1.0;
  params.q = 5.0;
  params.sigma_min = 0.05;
  params.sigma_max = 10.0;
  params.seed = seed;
  return params;
}

inline std::optional<Preset> find_preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

}  // namespace hiergen
