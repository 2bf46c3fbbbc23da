#include "mtc/synthetic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtc::synthetic {

ScalarField gaussian_mixture(std::size_t rows, std::size_t cols, std::span<const Bump> bumps, double base) {
  std::vector<double> values(rows * cols, base);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double v = base;
      for (const Bump& b : bumps) {
        const double dr = static_cast<double>(r) - b.row;
        const double dc = static_cast<double>(c) - b.col;
        v += b.amplitude * std::exp(-(dr * dr + dc * dc) / (2.0 * b.sigma * b.sigma));
      }
      values[r * cols + c] = v;
    }
  return ScalarField(rows, cols, std::move(values));
}

namespace {

constexpr std::size_t kSize = 32;
constexpr double kCentre = 15.5;

Bump on_circle(double degrees, double radius, double amplitude, double sigma) {
  const double a = degrees * std::numbers::pi / 180.0;
  return {kCentre - radius * std::sin(a), kCentre + radius * std::cos(a), amplitude, sigma};
}

}  // namespace

Series orbit_series() {
  constexpr double radius = 10.0;
  const Bump a = on_circle(150.0, radius, 2.0, 3.0);
  const Bump b = on_circle(330.0, radius, 2.0, 3.0);
  // Absorbed steps hug the fixed peaks; free steps stay well away from both.
  constexpr std::array<double, 12> angles = {330, 45, 60, 75, 145, 150, 155, 225, 240, 255, 325, 335};
  Series s;
  for (std::size_t t = 0; t < angles.size(); ++t) {
    const Bump p = on_circle(angles[t], radius, 1.0, 1.5);
    const Bump bumps[] = {a, b, p};
    s.fields.push_back(gaussian_mixture(kSize, kSize, bumps));
    s.moving.push_back(p);
  }
  s.events = {0, 3, 6, 9};
  return s;
}

namespace {

// One step of the repeating pattern: three pits, one orbiting with a
// breathing depth so both geometry and persistence change within a period.
std::vector<Bump> pattern_step(std::size_t phase, std::size_t period) {
  static constexpr std::array<double, 8> depth = {1.0, 1.35, 1.8, 2.3, 2.1, 1.7, 1.45, 1.15};
  const double turn = 360.0 * static_cast<double>(phase) / static_cast<double>(period);
  std::vector<Bump> bumps = {
      {8.0, 6.0, -2.5, 3.0},
      {25.0, 9.0, -1.8, 2.5},
      on_circle(20.0 + turn, 8.0, -depth[phase * depth.size() / period], 2.0),
  };
  return bumps;
}

Bump mirrored(Bump b) {
  b.col = static_cast<double>(kSize - 1) - b.col;
  return b;
}

}  // namespace

Series periodic_series(std::size_t period) {
  if (period == 0 || 32 % period != 0) throw std::invalid_argument("period must divide 32");
  Series s;
  for (std::size_t t = 0; t < 32; ++t) {
    const auto bumps = pattern_step(t % period, period);
    s.fields.push_back(gaussian_mixture(kSize, kSize, bumps, 3.0));
  }
  return s;
}

Series mirror_periodic_series() {
  Series s;
  for (std::size_t t = 0; t < 32; ++t) {
    auto bumps = pattern_step(t % 8, 8);
    if ((t / 8) % 2 == 1)
      for (Bump& b : bumps) b = mirrored(b);
    s.fields.push_back(gaussian_mixture(kSize, kSize, bumps, 3.0));
  }
  return s;
}

Series vanishing_series(std::size_t steps, std::size_t k) {
  if (k == 0 || k >= steps) throw std::invalid_argument("vanishing step must lie inside the series");
  const Bump fixed[] = {{8.0, 8.0, 2.0, 3.0}, {24.0, 10.0, 1.6, 3.0}};
  const Bump target{12.0, 23.0, 1.4, 2.5};
  Series s;
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<Bump> bumps(std::begin(fixed), std::end(fixed));
    if (t < k) bumps.push_back(target);
    s.fields.push_back(gaussian_mixture(kSize, kSize, bumps));
    s.moving.push_back(target);
  }
  s.events = {k - 1};
  return s;
}

}  // namespace mtc::synthetic
