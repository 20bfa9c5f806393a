#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "levymult/grid_function.hpp"
#include "levymult/transform.hpp"

namespace levymult {

struct CorpusConfig {
  std::size_t dimension = 2;
  std::size_t n = 256;      // points per axis
  double length = 6.283185307179586;
  std::size_t count = 40;
  std::uint64_t seed = 1;
  bool smooth_only = false;  // only Gaussians, cosine bumps and trigonometric polynomials
};

/// Deterministic corpus cycling through Gaussians, cosine bumps, box and disk
/// indicators, trigonometric polynomials and sign patterns. Ids are
/// "<kind>-<index>".
std::vector<CorpusMember> build_corpus(const CorpusConfig& config);

/// exp(-|x - c|^2 / (2 sigma^2)) with c wrapped periodically.
GridFunction gaussian_bump(std::size_t dimension, std::size_t n, double length, std::array<double, 2> center,
                           double sigma);

/// (1 + cos(pi r / w)) / 2 for r < w, zero outside; r the periodic distance to c.
GridFunction cosine_bump(std::size_t dimension, std::size_t n, double length, std::array<double, 2> center,
                         double width);

}  // namespace levymult
