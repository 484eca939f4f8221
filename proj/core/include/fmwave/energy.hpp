#pragma once

#include <vector>

#include "fmwave/grid.hpp"
#include "fmwave/potential.hpp"

namespace fmwave {

/// Value of the discrete weighted functional together with its decomposition.
/// `total` covers the truncated window only; `left_tail` is the analytically
/// integrated contribution W(pin_left) * e^{c t_min} / c of the constant tail
/// beyond the window, reported separately so the truncation of the negative
/// plateau tail stays visible.
struct WeightedEnergyReport {
  double c = 0.0;
  double total = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double left_tail = 0.0;
  std::vector<double> per_cell;
  bool weight_floor_hit = false;
};

/// Discrete E_c of a profile. Per cell the integrand (|du/dt|^2/2 + W(mid)) is
/// taken at the cell midpoint and the exponential weight e^{ct} is integrated
/// exactly over the cell, which keeps the translation identity exact up to
/// roundoff for flat-tail shifts. Weights below 1e-300 are clamped to zero
/// with weight_floor_hit set.
WeightedEnergyReport energy(const Profile& profile, const PotentialModel& potential, double c);

/// Exact gradient of the discrete energy with respect to node values.
/// Rows for pinned endpoints are zero. Layout matches Profile::values.
std::vector<double> energy_gradient(const Profile& profile, const PotentialModel& potential,
                                    double c);

/// Relative defect of E_c(v(. + m dt)) = e^{-c m dt} E_c(v) under an index
/// roll with pin padding. Requires the profile to equal its pins on at least
/// |m| cells at both ends. Both sides include the analytic left tail.
double translation_defect(const Profile& profile, const PotentialModel& potential, double c,
                          int shift_cells);

/// Shifts a tail-flat profile by `shift_cells` nodes (index roll, pin padding).
Profile roll_profile(const Profile& profile, int shift_cells);

}  // namespace fmwave
