#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fmwave/numeric.hpp"

namespace fmwave {

/// Uniform grid on a truncated interval [t_min, t_max], endpoints included.
struct Grid {
  double t_min = -1.0;
  double t_max = 1.0;
  int n = 3;

  Grid() = default;
  Grid(double a, double b, int nodes) : t_min(a), t_max(b), n(nodes) {
    if (!(t_min < t_max)) throw Error("grid must satisfy t_min < t_max");
    if (n < 3) throw Error("grid needs at least 3 nodes");
  }

  double dt() const { return (t_max - t_min) / (n - 1); }
  double node(int i) const { return t_min + i * dt(); }
  int cells() const { return n - 1; }
};

/// Sampled curve u: grid -> R^k with Dirichlet anchors at both ends.
struct Profile {
  Grid grid;
  int dim = 1;
  std::vector<double> values;  // n*dim, row-major
  std::vector<double> pin_left, pin_right;
  bool pinned = true;

  Profile() = default;
  Profile(const Grid& g, int k) : grid(g), dim(k), values(static_cast<std::size_t>(g.n) * k, 0.0),
                                  pin_left(k, 0.0), pin_right(k, 0.0) {}

  std::span<double> node(int i) { return {values.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)}; }
  std::span<const double> node(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }

  void apply_pins() {
    if (!pinned) return;
    for (int d = 0; d < dim; ++d) {
      values[d] = pin_left[d];
      values[static_cast<std::size_t>(grid.n - 1) * dim + d] = pin_right[d];
    }
  }

  /// Throws if any entry is non-finite or a pin anchor is violated.
  void validate() const {
    for (double v : values)
      if (!std::isfinite(v)) throw Error("profile contains non-finite values");
    if (pinned) {
      for (int d = 0; d < dim; ++d) {
        if (values[d] != pin_left[d] || values[static_cast<std::size_t>(grid.n - 1) * dim + d] != pin_right[d])
          throw Error("pinned profile does not match its anchors");
      }
    }
  }
};

}  // namespace fmwave
