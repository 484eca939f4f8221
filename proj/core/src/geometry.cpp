#include "fmwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fmwave {

namespace {

// Outward march until W > level, then bisection plus Newton polish.
double crossing_1d(const PotentialModel& pot, double inside, double level, double dir,
                   double step0, double reach) {
  double a = inside;
  double step = step0;
  double b = a;
  while (std::abs(b - inside) < reach) {
    b = a + dir * step;
    if (pot.eval1(b) > level) break;
    a = b;
    step *= 1.5;
  }
  if (!(pot.eval1(b) > level))
    throw Error("sublevel component is unbounded within the search reach");
  // Bisection on W(x) - level.
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (pot.eval1(m) <= level)
      a = m;
    else
      b = m;
    if (std::abs(b - a) < 1e-15 * (1.0 + std::abs(a))) break;
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 4; ++it) {  // Newton polish on the boundary
    double g = pot.grad1(x);
    if (g == 0.0) break;
    double xn = x - (pot.eval1(x) - level) / g;
    if (!std::isfinite(xn)) break;
    x = xn;
  }
  // Keep the reported endpoint inside the set.
  if (pot.eval1(x) > level) x = a;
  return x;
}

}  // namespace

SublevelSet::SublevelSet(const PotentialModel& potential, double level, Branch branch)
    : pot_(&potential), level_(level), branch_(branch) {
  const MinimaSet& set = branch == Branch::Minus ? potential.minima_minus : potential.minima_plus;
  double base_level = branch == Branch::Minus ? potential.depth : 0.0;
  if (level < base_level) throw Error("sublevel component is empty at this level");
  if (potential.dim == 1) {
    double in_lo, in_hi;
    if (set.kind == MinimaSet::Kind::Segment1D) {
      in_lo = set.seg_lo;
      in_hi = set.seg_hi;
    } else {
      in_lo = in_hi = set.points[0][0];
    }
    double reach = 8.0 * potential.growth_radius;
    double step = std::max(set.tube_radius / 8.0, 1e-6);
    lo_ = crossing_1d(potential, in_lo, level, -1.0, step, reach);
    hi_ = crossing_1d(potential, in_hi, level, +1.0, step, reach);
  }
}

bool SublevelSet::contains(std::span<const double> u) const {
  if (pot_->dim == 1) return u[0] >= lo_ && u[0] <= hi_;
  if (pot_->eval(u) > level_) return false;
  double dm = pot_->minima_minus.distance(u);
  double dp = pot_->minima_plus.distance(u);
  bool minus_side = dm <= dp;  // ties break toward the deep branch
  return (branch_ == Branch::Minus) == minus_side;
}

void project_sublevel(const SublevelSet& set, std::span<const double> u, std::span<double> out) {
  const PotentialModel& pot = set.potential();
  if (pot.dim == 1) {
    out[0] = std::min(std::max(u[0], set.lo()), set.hi());
    return;
  }
  if (set.contains(u)) {
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  const int k = pot.dim;
  const MinimaSet& mset =
      set.branch() == Branch::Minus ? pot.minima_minus : pot.minima_plus;
  std::vector<double> anchor = mset.project(u);

  // Boundary point on the segment toward the anchor.
  std::vector<double> x(k), lo_pt(anchor), hi_pt(u.begin(), u.end());
  for (int it = 0; it < 120; ++it) {
    for (int d = 0; d < k; ++d) x[d] = 0.5 * (lo_pt[d] + hi_pt[d]);
    if (pot.eval(x) <= set.level())
      lo_pt = x;
    else
      hi_pt = x;
  }
  x = lo_pt;

  // Tangential descent along the level set, re-projected by Newton steps.
  // The optimality residual itself is the line-search merit; the raw distance
  // plateaus quadratically near the solution and would stall early.
  std::vector<double> g(k), tangent(k), trial(k);
  auto residual_at = [&](const std::vector<double>& p, std::vector<double>* tan) {
    pot.grad(p, g);
    double gn = norm2(g);
    if (gn < 1e-14) throw Error("sublevel projection stalled: vanishing gradient on boundary");
    double rn = 0.0;
    for (int d = 0; d < k; ++d) rn += (u[d] - p[d]) * g[d] / gn;
    double tn = 0.0;
    for (int d = 0; d < k; ++d) {
      double t = (u[d] - p[d]) - rn * g[d] / gn;
      if (tan) (*tan)[d] = t;
      tn += t * t;
    }
    return std::sqrt(tn) + std::abs(pot.eval(p) - set.level());
  };

  double eta = 1.0;
  double resid = residual_at(x, &tangent);
  for (int it = 0; it < 600 && resid > 1e-10; ++it) {
    for (int d = 0; d < k; ++d) trial[d] = x[d] + eta * tangent[d];
    for (int ns = 0; ns < 8; ++ns) {  // Newton back to the level set
      pot.grad(trial, g);
      double g2 = dot(g, g);
      if (g2 < 1e-28) break;
      double f = pot.eval(trial) - set.level();
      for (int d = 0; d < k; ++d) trial[d] -= f * g[d] / g2;
    }
    double trial_resid = residual_at(trial, nullptr);
    if (trial_resid < resid) {
      x = trial;
      resid = residual_at(x, &tangent);
      eta = std::min(1.0, eta * 1.3);
    } else {
      eta *= 0.5;
      if (eta < 1e-14) break;
    }
  }
  if (resid > 1e-10) {
    std::ostringstream os;
    os << "sublevel projection did not reach the KKT tolerance (residual " << resid << ")";
    throw Error(os.str());
  }
  std::copy(x.begin(), x.end(), out.begin());
}

std::vector<double> project_sublevel(const SublevelSet& set, std::span<const double> u) {
  std::vector<double> out(set.potential().dim);
  project_sublevel(set, u, out);
  return out;
}

void truncation_map(const PotentialModel& potential, std::span<const double> u,
                    std::span<double> out) {
  double r = norm2(u);
  if (r <= potential.growth_radius) {
    std::copy(u.begin(), u.end(), out.begin());
    return;
  }
  double s = potential.growth_radius / r;
  for (std::size_t d = 0; d < u.size(); ++d) out[d] = s * u[d];
}

std::vector<double> truncation_map(const PotentialModel& potential, std::span<const double> u) {
  std::vector<double> out(u.size());
  truncation_map(potential, u, out);
  return out;
}

TransitionMarkers transition_markers(const Profile& profile, const PotentialModel& potential,
                                     const AuditedConstants& constants) {
  TransitionMarkers mk;
  mk.alpha_minus = constants.h_minus;
  mk.alpha_0 = constants.h0;
  mk.eps0_plus = constants.eps0_plus;

  const Grid& g = profile.grid;
  const int n = g.n;
  std::vector<double> wvals(n);
  for (int i = 0; i < n; ++i) wvals[i] = potential.eval(profile.node(i));

  const double rho_half = 0.5 * potential.minima_plus.tube_radius;
  std::vector<double> dplus(n);
  for (int i = 0; i < n; ++i) dplus[i] = potential.minima_plus.distance(profile.node(i));

  bool left_ok = wvals[0] <= constants.h_minus + 1e-8;
  bool right_ok = dplus[n - 1] <= rho_half + 1e-8;

  // Deep-branch membership for the barrier-level marker. The component of
  // {W <= h0} decides the branch (exact interval for k = 1).
  SublevelSet deep(potential, constants.h0, Branch::Minus);
  auto minus_side = [&](int i) { return deep.contains(profile.node(i)); };

  if (left_ok) {
    // First upward crossing of the split level from inside the deep branch.
    for (int i = 0; i + 1 < n; ++i) {
      if (wvals[i] <= constants.h0 && wvals[i + 1] > constants.h0 && minus_side(i)) {
        double frac = (constants.h0 - wvals[i]) / (wvals[i + 1] - wvals[i]);
        mk.t2_minus = g.node(i) + frac * g.dt();
        break;
      }
    }
  }

  if (mk.t2_minus) {
    // Last time at or below h_minus before the barrier-level crossing.
    double t2 = *mk.t2_minus;
    for (int i = n - 1; i > 0; --i) {
      if (g.node(i - 1) > t2) continue;
      if (wvals[i - 1] <= constants.h_minus + 1e-8 && wvals[i] > constants.h_minus) {
        double frac = (constants.h_minus - wvals[i - 1]) / (wvals[i] - wvals[i - 1]);
        mk.t1_minus = std::min(g.node(i - 1) + frac * g.dt(), t2);
        break;
      }
    }
    if (!mk.t1_minus && wvals[0] <= constants.h_minus + 1e-8) mk.t1_minus = g.t_min;
  }

  if (right_ok) {
    for (int i = 0; i < n; ++i) {
      if (wvals[i] <= constants.eps0_plus + 1e-8 && dplus[i] <= rho_half + 1e-8) {
        if (i == 0) {
          mk.t_plus = g.t_min;
          break;
        }
        // Entry time within the previous cell: latest of the two conditions.
        double te = g.node(i - 1);
        if (wvals[i - 1] > constants.eps0_plus && wvals[i] != wvals[i - 1]) {
          double frac = (constants.eps0_plus - wvals[i - 1]) / (wvals[i] - wvals[i - 1]);
          te = std::max(te, g.node(i - 1) + std::min(std::max(frac, 0.0), 1.0) * g.dt());
        }
        if (dplus[i - 1] > rho_half && dplus[i] != dplus[i - 1]) {
          double frac = (rho_half - dplus[i - 1]) / (dplus[i] - dplus[i - 1]);
          te = std::max(te, g.node(i - 1) + std::min(std::max(frac, 0.0), 1.0) * g.dt());
        }
        mk.t_plus = te;
        break;
      }
    }
  }

  if (mk.t1_minus && mk.t2_minus && mk.t_plus) {
    if (!(*mk.t1_minus <= *mk.t2_minus && *mk.t2_minus < *mk.t_plus))
      throw Error("transition markers violate their ordering");
  }
  return mk;
}

}  // namespace fmwave
