#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mtc/field.hpp"

namespace mtc::synthetic {

/// Isotropic Gaussian centred at (row, col), in grid units.
struct Bump {
  double row = 0.0;
  double col = 0.0;
  double amplitude = 1.0;
  double sigma = 1.0;
};

ScalarField gaussian_mixture(std::size_t rows, std::size_t cols, std::span<const Bump> bumps, double base = 0.0);

/// Ground truth shipped with a generated series.
struct Series {
  std::vector<ScalarField> fields;
  std::vector<std::size_t> events;    // k such that a topological event happens between k and k+1
  std::vector<Bump> moving;           // per step position of the bump that changes (if any)
};

/// Twelve steps: two fixed peaks and one small peak that orbits the domain
/// centre. The small peak is absorbed by one fixed peak during steps 4..6
/// and by the other during steps 10, 11, 0; events are {0, 3, 6, 9}.
Series orbit_series();

/// 32 steps that repeat exactly every `period` steps (period must divide 32).
Series periodic_series(std::size_t period = 8);

/// 32 steps: an 8-step pattern alternating with its left-right mirror.
/// The field repeats every 16 steps; its topology every 8.
Series mirror_periodic_series();

/// Two fixed bumps plus a third that exists for steps < k and vanishes at
/// step k. `moving` holds the vanishing bump.
Series vanishing_series(std::size_t steps = 6, std::size_t k = 3);

}  // namespace mtc::synthetic
