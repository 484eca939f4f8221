#pragma once

#include <cmath>
#include <random>

#include "fmwave/grid.hpp"
#include "fmwave/potential.hpp"

namespace fmwave::test {

inline constexpr double kNagumoSpeed25 = 0.35355339059327373;  // sqrt(2)/4
inline constexpr double kNagumoKinetic = 0.11785113019775792;  // 1/(6 sqrt(2))

/// Closed-form front of the cubic nonlinearity: 1/(1 + exp(t/sqrt(2))).
inline double nagumo(double t) { return 1.0 / (1.0 + std::exp(t / std::sqrt(2.0))); }

/// Exact front sampled on a grid, pins taken from the sampled endpoints.
inline Profile nagumo_profile(const Grid& g) {
  Profile p(g, 1);
  for (int i = 0; i < g.n; ++i) p.node(i)[0] = nagumo(g.node(i));
  p.pin_left[0] = p.node(0)[0];
  p.pin_right[0] = p.node(g.n - 1)[0];
  return p;
}

/// Exact front with both tails overwritten by the rest states so index rolls
/// stay representable.
inline Profile nagumo_profile_padded(const Grid& g, int pad) {
  Profile p = nagumo_profile(g);
  for (int i = 0; i <= pad; ++i) {
    p.node(i)[0] = 1.0;
    p.node(g.n - 1 - i)[0] = 0.0;
  }
  p.pin_left[0] = 1.0;
  p.pin_right[0] = 0.0;
  p.apply_pins();
  return p;
}

inline std::vector<double> random_point(std::mt19937_64& rng, int dim, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<double> p(dim);
  for (auto& v : p) v = u(rng);
  return p;
}

}  // namespace fmwave::test
