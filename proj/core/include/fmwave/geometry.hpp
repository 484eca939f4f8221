#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fmwave/constants.hpp"
#include "fmwave/grid.hpp"
#include "fmwave/potential.hpp"

namespace fmwave {

enum class Branch { Minus, Plus };

/// One connected component of the sublevel set {W <= level}, selected by the
/// nearest minima set. Convexity of the minus branch is the auditor's job;
/// the projection assumes it.
class SublevelSet {
 public:
  SublevelSet(const PotentialModel& potential, double level, Branch branch);

  bool contains(std::span<const double> u) const;
  double level() const { return level_; }
  Branch branch() const { return branch_; }

  /// Interval bounds of the component (k = 1 only).
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  const PotentialModel& potential() const { return *pot_; }

 private:
  const PotentialModel* pot_;
  double level_;
  Branch branch_;
  double lo_ = 0.0, hi_ = 0.0;  // k = 1 component interval
};

/// Nearest point of the sublevel component. Exact root bracketing for k = 1;
/// level-set projected iterations driven to a KKT residual <= 1e-10 for
/// k >= 2. Throws on non-convergence (carrying the residual in the message).
std::vector<double> project_sublevel(const SublevelSet& set, std::span<const double> u);
void project_sublevel(const SublevelSet& set, std::span<const double> u, std::span<double> out);

/// Radial retraction onto the ball of radius growth_radius. Nonexpansive,
/// identity inside, and never increases W for potentials whose radial growth
/// certificate holds.
std::vector<double> truncation_map(const PotentialModel& potential, std::span<const double> u);
void truncation_map(const PotentialModel& potential, std::span<const double> u,
                    std::span<double> out);

/// Transition times of a profile between the deep region, the barrier level
/// and the shallow tube. Absent markers are values, not errors.
struct TransitionMarkers {
  std::optional<double> t1_minus;
  std::optional<double> t2_minus;
  std::optional<double> t_plus;
  double alpha_minus = 0.0;  // = h_minus
  double alpha_0 = 0.0;      // = h0
  double eps0_plus = 0.0;
};

TransitionMarkers transition_markers(const Profile& profile, const PotentialModel& potential,
                                     const AuditedConstants& constants);

}  // namespace fmwave
