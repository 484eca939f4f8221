#pragma once

#include <utility>
#include <vector>

#include "fmwave/grid.hpp"
#include "fmwave/potential.hpp"

namespace fmwave {

enum class PdeScheme { SemiImplicit, Explicit };

struct PdeConfig {
  double dx = 0.05;
  double dt = 0.05;
  double half_length = 100.0;   // domain [-X, X]
  double t_end = 150.0;
  double tracking_level = 0.5;  // front position: |w - a_plus| crosses this
  PdeScheme scheme = PdeScheme::SemiImplicit;
  int snapshot_every = 0;       // 0 disables snapshots
  double fit_fraction = 0.5;    // fit the speed on this trailing fraction
};

struct PdeResult {
  double speed = 0.0;
  std::vector<std::pair<double, double>> front;  // (t, x_front)
  std::vector<std::vector<double>> snapshots;    // optional state dumps
  std::vector<double> snapshot_times;
  double invariant_overshoot = 0.0;  // worst per-step excursion beyond the state box
};

/// Thrown when the front reaches the boundary before the fit window; carries
/// the partial front trajectory for diagnostics.
struct PdeDomainError : Error {
  explicit PdeDomainError(const std::string& what, std::vector<std::pair<double, double>> f)
      : Error(what), front(std::move(f)) {}
  std::vector<std::pair<double, double>> front;
};

/// Front speed of the parabolic flow started from a mollified step between
/// the two minima. Implicit diffusion (tridiagonal solve per component),
/// explicit reaction; the explicit scheme is kept behind the config flag.
PdeResult pde_front_speed(const PotentialModel& potential, const PdeConfig& config);

}  // namespace fmwave
