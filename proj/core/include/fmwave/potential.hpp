#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmwave/numeric.hpp"

namespace fmwave {

/// Set of minima of the potential at one of the two levels, together with its
/// nearest-point map and the locally fitted coercivity constant.
struct MinimaSet {
  enum class Kind { Point, PointList, Segment1D, ParametricCurve };

  Kind kind = Kind::Point;
  int dim = 1;
  std::vector<std::vector<double>> points;  // Point / PointList representatives
  double seg_lo = 0.0, seg_hi = 0.0;        // Segment1D (k = 1 interval)
  double tube_radius = 0.0;                 // neighborhood radius
  double coercivity_const = 0.0;            // fitted constant in the quadratic bound

  /// Writes the nearest point of the set into `out`.
  void project(std::span<const double> u, std::span<double> out) const;
  std::vector<double> project(std::span<const double> u) const;
  double distance(std::span<const double> u) const;
  /// Any representative point (used for pins and segment anchors).
  std::vector<double> representative() const;
};

/// The potential W with its gradient, minima sets, depth and growth data.
/// Immutable after construction; safe for concurrent read-only use.
struct PotentialModel {
  int dim = 1;
  std::function<double(std::span<const double>)> eval;
  std::function<void(std::span<const double>, std::span<double>)> grad;
  /// Optional largest-Hessian-eigenvalue estimate at a point (step control).
  std::function<double(std::span<const double>)> hess_diag_bound;

  MinimaSet minima_minus;  // deep set, level `depth` < 0
  MinimaSet minima_plus;   // shallow set, level 0
  double depth = -1.0;
  double growth_radius = 1.0;  // radial coercivity radius
  double growth_coeff = 1.0;   // radial coercivity constant

  std::string name;
  std::map<std::string, double> params;

  double eval1(double u) const { return eval(std::span<const double>(&u, 1)); }
  double grad1(double u) const {
    double g;
    grad(std::span<const double>(&u, 1), std::span<double>(&g, 1));
    return g;
  }
};

/// Scalar double well W(u) = u^4/4 - (1+beta) u^3/3 + beta u^2/2 with wells at
/// 0 (level 0) and 1 (level (2 beta - 1)/12 < 0). Requires beta in (0, 1/2).
PotentialModel make_tilted_cubic(double beta);

struct PlateauOptions {
  double barrier_height = 0.02;  // interior barrier maximum
  double barrier_pos = -1.0;     // barrier top; < plateau_hi means "auto"
  double well_curvature = 0.5;   // second derivative at the point well u = 1
  double left_wall = 1.0;        // quadratic coefficient left of the plateau
};

/// Scalar potential that is identically `depth` on [plateau_lo, plateau_hi]
/// (an interval of non-isolated minima), has one interior barrier, a
/// nondegenerate well at u = 1 with value 0, and quadratic growth outside
/// [plateau_lo - 1, 2]. C^3 joins use the 7th-order smoothstep.
PotentialModel make_plateau_scalar(double plateau_lo, double plateau_hi, double depth,
                                   const PlateauOptions& opts = {});

/// Planar (k = 2) double well: quartic product well plus a linear tilt that
/// lowers `well_minus`, re-normalized so the shallow well sits at level 0.
/// Minima are located numerically; rejects if the tilt destroys a well.
PotentialModel make_planar_tilted(std::span<const double> well_minus,
                                  std::span<const double> well_plus, double tilt);

/// Scalar potential from a tabulated (u, W, dW) grid with cubic interpolation
/// and quadratic continuation outside the table range. Minima and levels are
/// detected from the table; the higher well is shifted to level 0.
PotentialModel make_tabulated(std::span<const double> u, std::span<const double> w,
                              std::span<const double> dw);

/// W -> s2 * W with minima data rescaled to match. The wave coordinate
/// contracts by sqrt(s2), so the selected speed scales by sqrt(s2).
PotentialModel make_scaled(const PotentialModel& base, double s2);

}  // namespace fmwave
