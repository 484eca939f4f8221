#pragma once

#include <utility>

#include "fmwave/potential.hpp"

namespace fmwave {

struct ShootingConfig {
  double dt_ode = 1e-3;
  double start_offset = 1e-8;  // distance along the stable direction at the shallow well
  double span_max = 500.0;     // give up beyond this backward time
};

enum class ShotFate { Undershoot, Overshoot, Entered };

/// Classifies the backward trajectory from the stable manifold of the shallow
/// well at trial speed c: turns back before the deep tube (undershoot) or
/// runs past it (overshoot). k = 1 only.
ShotFate classify_shot(const PotentialModel& potential, const ShootingConfig& config, double c);

/// Heteroclinic speed by bisection on the fate flip. Throws "no heteroclinic
/// detected" if the bracket [c_lo, c_hi] does not straddle the flip.
double shoot_speed(const PotentialModel& potential, const ShootingConfig& config, double c_tol,
                   double c_lo, double c_hi);

/// Backward integration over a fixed span without event handling; returns the
/// final (u, u') state. Exposed for step-size order checks.
std::pair<double, double> integrate_profile_ode(const PotentialModel& potential,
                                                const ShootingConfig& config, double c,
                                                double span);

}  // namespace fmwave
