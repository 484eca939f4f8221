#pragma once

#include <optional>
#include <vector>

#include "fmwave/constants.hpp"
#include "fmwave/energy.hpp"
#include "fmwave/geometry.hpp"
#include "fmwave/grid.hpp"
#include "fmwave/potential.hpp"

namespace fmwave {

enum class StepRule { Fixed, Backtracking };

struct MinimizeConfig {
  double T = 0.0;  // constraint onset time; 0 means min(|t_min|, t_max)/4
  int max_iters = 20000;
  double grad_tol = 1e-4;        // stationarity threshold (constraint-aware)
  StepRule step_rule = StepRule::Backtracking;
  double fixed_step = 0.5;       // used when step_rule == Fixed
  bool enforce_truncation = true;
  bool enforce_left_constraint = true;
  bool enforce_right_constraint = true;
  bool record_iterations = false;
};

struct IterationRecord {
  int iter;
  double energy;      // after projections
  double grad_norm;
  double step;
};

struct MinimizeResult {
  Profile profile;
  double energy = 0.0;           // constrained minimum value on the window
  int iterations = 0;
  bool converged = false;
  bool constraint_active_left = false;   // any projection fired in last 10 iters
  bool constraint_active_right = false;
  double ode_residual = 0.0;     // weighted L2 residual of the profile equation
  double grad_norm = 0.0;
  double max_left_projection_gain = 0.0;  // largest energy increase caused by a left projection
  std::vector<IterationRecord> log;
};

/// Minimizes the discrete weighted energy over the constraint class by
/// preconditioned projected descent with an Armijo line search. Nodes with
/// t <= -T are projected onto the deep sublevel component {W <= h_minus},
/// nodes with t >= T onto the half tube around the shallow minima set, and
/// every node through the radial truncation when enabled. The stationarity
/// measure removes the outward normal component at active constraints, so it
/// vanishes at constrained minimizers.
MinimizeResult minimize(const PotentialModel& potential, const AuditedConstants& constants,
                        const Grid& grid, double c, const MinimizeConfig& config,
                        const std::optional<Profile>& init = std::nullopt);

/// Piecewise-linear default initial profile: deep anchor for t <= -1, shallow
/// anchor for t >= 1, linear in between.
Profile default_initial_profile(const PotentialModel& potential, const Grid& grid);

/// Weighted L2 residual of (-c u' - u'' + grad W(u)) over interior nodes,
/// second-order central differences, weight e^{ct} normalized by total weight.
double ode_residual(const Profile& profile, const PotentialModel& potential, double c);

}  // namespace fmwave
