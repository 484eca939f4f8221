#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fmwave/audit.hpp"
#include "fmwave/minimize.hpp"

namespace fmwave {

struct SpeedConfig {
  double c_tol = 1e-4;
  double bracket_inflation = 1.5;  // applied to the audited upper bound
  double predicate_rel = 1e-6;     // negativity threshold relative to the reachable scale
  MinimizeConfig minimize;
  MinimizeConfig refine;           // used for the final minimizer at c*
  SpeedConfig() { refine.grad_tol = 1e-6; }
};

struct DecayFit {
  double fitted = 0.0;     // least-squares tail rate
  double predicted = 0.0;  // linearization rate (c + sqrt(c^2 + 4 lambda_min))/2
  int nodes = 0;
};

struct SpeedResult {
  double c_star = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  double formula_speed = 0.0;            // -depth / unweighted kinetic integral
  std::optional<double> shooting_speed;
  std::optional<double> pde_speed;
  Profile profile;                       // minimizer at c_star
  double decay_rate = 0.0;               // fitted tail rate
  double decay_rate_predicted = 0.0;
  double energy_at_c_star = 0.0;         // m(c*)
  double m_tol_certificate = 0.0;        // energy-scale tolerance for |m(c*)|
  std::vector<std::pair<double, double>> probes;  // (c, m(c)) evaluated during bisection
};

/// Energy-scale tolerance |depth| (e^{c t_max} - e^{c t_min}) / c, relative
/// weight `rel`, used by the zero-energy certificate.
double energy_scale_tolerance(const PotentialModel& potential, const Grid& grid, double c,
                              double rel);

/// Constrained minimum m(c) of the discrete energy at one speed.
double constrained_minimum(const PotentialModel& potential, const AuditedConstants& constants,
                           const Grid& grid, double c, const MinimizeConfig& config);

/// Locates the unique speed by bisection on the sign of m(c), starting from
/// the audited upper bracket. Throws if the bracket is invalid.
SpeedResult bisect_speed(const PotentialModel& potential, const AuditedConstants& constants,
                         const Grid& grid, const SpeedConfig& config);

/// -depth / sum |du/dt|^2 dt (unweighted kinetic integral) of a zero-energy
/// minimizer. Throws on a degenerate (flat) profile.
double speed_formula(const Profile& profile, const PotentialModel& potential);

/// Audited upper bound sqrt(-2 depth) / d_alpha0 for the speed set.
double bracket_bound(const PotentialModel& potential, const AuditedConstants& constants);

struct TransitionTimeBounds {
  double T1;
  double T2;
  double Tss;
};

/// Exact evaluation of the explicit crossing-time bounds:
/// T1 = (2Rc + 2 sqrt(R^2 c^2 + 2 R omega)) / omega,
/// T2 = ln(-a/alpha_ss + 1) / c, Tss = T1 + T2.
TransitionTimeBounds transition_time_bounds(double c, double R, double omega, double a,
                                            double alpha_ss);

/// Exponential tail rate of the profile toward the shallow minima set,
/// fitted on the in-tube tail, plus the linearization prediction.
DecayFit fit_decay_rate(const Profile& profile, const PotentialModel& potential, double c,
                        double noise_floor = 1e-9);

}  // namespace fmwave
