#pragma once

#include <utility>
#include <vector>

namespace fmwave {

/// Every named constant the solver and the comparison checks consume, in one
/// place. Filled by the auditor from its sampled measurements.
struct AuditedConstants {
  // Level structure.
  double h0 = 0.0;       // split level: {W <= h0} separates into two components
  double h_minus = 0.0;  // deep-side level with {W <= h_minus} inside the half tube

  // Segment monotonicity.
  double sigma = 0.0;                                   // uniform slope lower bound
  std::vector<std::pair<double, double>> sigma_of_h;    // (h, pointwise slope bound)

  // Shell minima of W around each minima set: (r, min over dist in [r, rho0]).
  std::vector<std::pair<double, double>> kappa_minus;
  std::vector<std::pair<double, double>> kappa_plus;

  // Fitted coercivity constants and derived combinations.
  double C_minus = 0.0, C_plus = 0.0;
  double Cmix_minus = 0.0, Cmix_plus = 0.0;  // (1/2) C^2 (C^2 + (C+1)^2)
  double gamma_minus = 0.0, gamma_plus = 0.0;

  // Entry scales for the transition markers.
  double eta0_minus = 0.0, eta0_plus = 0.0;
  double eps0_minus = 0.0, eps0_plus = 0.0;

  // Distances between the two ends.
  double d0 = 0.0;        // dist(plus half tube, minus half tube)
  double d_alpha0 = 0.0;  // dist({W <= h0} minus component, plus half tube)

  // Reach of the deep sublevel set and crossing constants.
  double R = 0.0;         // max distance from {W <= h0}^- to the deep set, +10%
  double omega = 0.0;     // = sigma
  double alpha_ss = 0.0;  // min(h0, eps0_plus)

  // Boundary-condition inequality at -infinity (reported, never gating).
  bool a_minus_singleton = false;
  double bc_eta = 0.0;   // 1 / (Cmix_minus + C_minus)
  double bc_gap = 0.0;   // (d_alpha0 * bc_eta)^2 / 2
  bool bc_item2_ok = false;

  /// Shell minimum at radius r, linearly interpolated from the sampled table;
  /// below the smallest sampled radius the margin over `base_level` is
  /// extended quadratically.
  double kappa_at(bool minus_side, double r, double base_level) const;
};

}  // namespace fmwave
