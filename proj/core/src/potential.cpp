#include "fmwave/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

namespace fmwave {

namespace {

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// 7th-order smoothstep: S(0)=0, S(1)=1, flat to third order at both ends.
double smoothstep7(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return ((((-20.0 * x + 70.0) * x - 84.0) * x + 35.0) * x) * x * x * x;
}
double smoothstep7_d(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return (((-140.0 * x + 420.0) * x - 420.0) * x + 140.0) * x * x * x;
}
double smoothstep7_dd(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return (((-840.0 * x + 2100.0) * x - 1680.0) * x + 420.0) * x * x;
}

// Bridge from a C^3-flat start to pure quadratic tail: equals x^2 for x >= 1,
// all derivatives through third order vanish at 0.
double bridge_quad(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return x * x;
  return (((-4.0 * x + 15.0) * x - 20.0) * x + 10.0) * x * x * x * x;
}
double bridge_quad_d(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 2.0 * x;
  return (((-28.0 * x + 90.0) * x - 100.0) * x + 40.0) * x * x * x;
}
double bridge_quad_dd(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 2.0;
  return (((-168.0 * x + 450.0) * x - 400.0) * x + 120.0) * x * x;
}

// Unit drop 1 -> 0 with prescribed end curvature kappa, C^3-flat at the start:
// H(x) = (1 - S(x)) + kappa * Cq(x), Cq = 2.5 x^4 - 7 x^5 + 6.5 x^6 - 2 x^7.
double cq(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return (((-2.0 * x + 6.5) * x - 7.0) * x + 2.5) * x * x * x * x;
}
double cq_d(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.0;
  return (((-14.0 * x + 39.0) * x - 35.0) * x + 10.0) * x * x * x;
}
double cq_dd(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return (((-84.0 * x + 195.0) * x - 140.0) * x + 30.0) * x * x;
}

}  // namespace

// ---------------------------------------------------------------------------
// MinimaSet

void MinimaSet::project(std::span<const double> u, std::span<double> out) const {
  switch (kind) {
    case Kind::Point:
      std::copy(points[0].begin(), points[0].end(), out.begin());
      return;
    case Kind::PointList: {
      std::size_t best = 0;
      double bd = dist2(u, points[0]);
      for (std::size_t i = 1; i < points.size(); ++i) {
        double d = dist2(u, points[i]);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      std::copy(points[best].begin(), points[best].end(), out.begin());
      return;
    }
    case Kind::Segment1D:
      out[0] = clamp(u[0], seg_lo, seg_hi);
      return;
    case Kind::ParametricCurve:
      throw Error("parametric-curve minima sets have no built-in projection");
  }
  throw Error("unknown minima set kind");
}

std::vector<double> MinimaSet::project(std::span<const double> u) const {
  std::vector<double> out(dim);
  project(u, out);
  return out;
}

double MinimaSet::distance(std::span<const double> u) const {
  std::vector<double> p(dim);
  project(u, p);
  return dist2(u, p);
}

std::vector<double> MinimaSet::representative() const {
  if (kind == Kind::Segment1D) return {0.5 * (seg_lo + seg_hi)};
  if (points.empty()) throw Error("minima set has no representative point");
  return points[0];
}

// ---------------------------------------------------------------------------
// Shared fitting helpers

namespace {

// Max of dist^2 / (W - level) over a deterministic grid in the tube shell,
// with a safety margin. k = 1 only.
double fit_coercivity_1d(const std::function<double(double)>& w, const MinimaSet& set,
                         double level, int samples = 2000) {
  double lo, hi;
  if (set.kind == MinimaSet::Kind::Segment1D) {
    lo = set.seg_lo;
    hi = set.seg_hi;
  } else {
    lo = hi = set.points[0][0];
  }
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    double r = set.tube_radius * (i + 0.5) / (samples + 1);
    for (double u : {lo - r, hi + r}) {
      double gap = w(u) - level;
      if (gap <= 0.0) continue;
      worst = std::max(worst, r * r / gap);
    }
  }
  if (worst == 0.0) throw Error("coercivity fit found no usable samples");
  return 1.2 * worst;
}

double sampled_growth_coeff(const PotentialModel& pot, int dirs = 64) {
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> u(pot.dim), g(pot.dim);
  for (double mult : {1.0, 2.0, 4.0}) {
    double radius = pot.growth_radius * mult;
    int count = pot.dim == 1 ? 2 : dirs;
    for (int i = 0; i < count; ++i) {
      if (pot.dim == 1) {
        u[0] = (i == 0 ? radius : -radius);
      } else {
        double ang = 2.0 * M_PI * i / count;
        u[0] = radius * std::cos(ang);
        u[1] = radius * std::sin(ang);
        for (int d = 2; d < pot.dim; ++d) u[d] = 0.0;
      }
      pot.grad(u, g);
      worst = std::min(worst, dot(g, u) / (radius * radius));
    }
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tilted cubic double well

PotentialModel make_tilted_cubic(double beta) {
  if (!(beta > 0.0 && beta < 0.5))
    throw Error("tilted cubic requires beta in (0, 1/2); wells would swap or balance");

  PotentialModel pot;
  pot.dim = 1;
  pot.name = "tilted_cubic";
  pot.params["beta"] = beta;
  pot.depth = (2.0 * beta - 1.0) / 12.0;

  pot.eval = [beta](std::span<const double> u) {
    double x = u[0];
    return ((3.0 * x - 4.0 * (1.0 + beta)) * x + 6.0 * beta) * x * x / 12.0;
  };
  pot.grad = [beta](std::span<const double> u, std::span<double> g) {
    double x = u[0];
    g[0] = x * (x - 1.0) * (x - beta);
  };
  pot.hess_diag_bound = [beta](std::span<const double> u) {
    double x = u[0];
    return 3.0 * x * x - 2.0 * (1.0 + beta) * x + beta;
  };

  pot.minima_minus.kind = MinimaSet::Kind::Point;
  pot.minima_minus.dim = 1;
  pot.minima_minus.points = {{1.0}};
  pot.minima_minus.tube_radius = 0.5;

  pot.minima_plus.kind = MinimaSet::Kind::Point;
  pot.minima_plus.dim = 1;
  pot.minima_plus.points = {{0.0}};
  pot.minima_plus.tube_radius = 0.25;

  auto w1 = [&pot](double x) { return pot.eval1(x); };
  pot.minima_minus.coercivity_const = fit_coercivity_1d(w1, pot.minima_minus, pot.depth);
  pot.minima_plus.coercivity_const = fit_coercivity_1d(w1, pot.minima_plus, 0.0);

  pot.growth_radius = 2.0;
  pot.growth_coeff = 0.85 * sampled_growth_coeff(pot);
  return pot;
}

// ---------------------------------------------------------------------------
// Degenerate plateau potential

PotentialModel make_plateau_scalar(double plateau_lo, double plateau_hi, double depth,
                                   const PlateauOptions& opts) {
  if (!(plateau_lo < plateau_hi)) throw Error("plateau interval is empty");
  if (!(plateau_hi < 0.0)) throw Error("plateau must lie left of the point well at u = 1");
  if (!(depth < 0.0)) throw Error("plateau depth must be negative");
  if (!(opts.well_curvature > 0.0)) throw Error("well curvature must be positive");
  if (!(opts.left_wall > 0.0)) throw Error("left wall coefficient must be positive");

  const double p1 = plateau_lo, p2 = plateau_hi, h = depth;
  const double hb = opts.barrier_height;
  const double kp = opts.well_curvature;
  const double aL = opts.left_wall;
  const double wL = 1.0;  // quadratic growth starts at p1 - 1

  // Barrier top: keep the well-side span short enough that the drop piece
  // stays below the barrier value (end-curvature ratio <= ~8).
  double span = std::min(0.4 * (1.0 - p2), std::sqrt(8.0 * std::abs(hb) / kp));
  double ut = opts.barrier_pos > p2 ? opts.barrier_pos : 1.0 - span;
  if (!(ut > p2 && ut < 1.0)) throw Error("barrier position must lie between plateau and well");
  const double s2r = 1.0 - ut;               // drop span
  const double s2l = ut - p2;                // rise span
  const double kappa = kp * s2r * s2r / hb;  // normalized end curvature (sign of hb)

  auto value = [=](double x) -> double {
    if (x >= p1 && x <= p2) return h;
    if (x < p1) return h + aL * bridge_quad((p1 - x) / wL);
    if (x <= ut) return h + (hb - h) * smoothstep7((x - p2) / s2l);
    if (x <= 1.0) {
      double xi = (x - ut) / s2r;
      return hb * ((1.0 - smoothstep7(xi)) + kappa * cq(xi));
    }
    return 0.5 * kp * (x - 1.0) * (x - 1.0);
  };
  auto deriv = [=](double x) -> double {
    if (x >= p1 && x <= p2) return 0.0;
    if (x < p1) return -aL / wL * bridge_quad_d((p1 - x) / wL);
    if (x <= ut) return (hb - h) / s2l * smoothstep7_d((x - p2) / s2l);
    if (x <= 1.0) {
      double xi = (x - ut) / s2r;
      return hb / s2r * (-smoothstep7_d(xi) + kappa * cq_d(xi));
    }
    return kp * (x - 1.0);
  };
  auto second = [=](double x) -> double {
    if (x >= p1 && x <= p2) return 0.0;
    if (x < p1) return aL / (wL * wL) * bridge_quad_dd((p1 - x) / wL);
    if (x <= ut) return (hb - h) / (s2l * s2l) * smoothstep7_dd((x - p2) / s2l);
    if (x <= 1.0) {
      double xi = (x - ut) / s2r;
      return hb / (s2r * s2r) * (-smoothstep7_dd(xi) + kappa * cq_dd(xi));
    }
    return kp;
  };

  // Build-time validation: global lower bound, a positive interior barrier,
  // and a single slope sign change between plateau and well.
  {
    double barrier_max = -1e300;
    for (int i = 0; i <= 4000; ++i) {
      double x = p2 + (1.0 - p2) * i / 4000.0;
      barrier_max = std::max(barrier_max, value(x));
    }
    if (!(barrier_max > 0.0)) throw Error("plateau potential rejected: barrier maximum <= 0");
    int flips = 0;
    double prev = deriv(p2 + 1e-6);
    for (int i = 1; i <= 4000; ++i) {
      double x = p2 + 1e-6 + (1.0 - 2e-6 - p2) * i / 4000.0;
      double d = deriv(x);
      if (prev > 0 && d < 0) ++flips;
      if (prev < 0 && d > 0) ++flips;
      if (d != 0.0) prev = d;
    }
    if (flips != 1) throw Error("plateau potential rejected: barrier is not single-humped");
    for (int i = 0; i <= 8000; ++i) {
      double x = (p1 - 2.0) + (2.5 - (p1 - 2.0)) * i / 8000.0;
      if (value(x) < h - 1e-10) throw Error("plateau potential rejected: dips below its depth");
    }
  }

  PotentialModel pot;
  pot.dim = 1;
  pot.name = "plateau";
  pot.params = {{"plateau_lo", p1}, {"plateau_hi", p2}, {"depth", h},
                {"barrier_height", hb}, {"barrier_pos", ut}, {"well_curvature", kp}};
  pot.depth = h;
  pot.eval = [value](std::span<const double> u) { return value(u[0]); };
  pot.grad = [deriv](std::span<const double> u, std::span<double> g) { g[0] = deriv(u[0]); };
  pot.hess_diag_bound = [second](std::span<const double> u) { return second(u[0]); };

  pot.minima_minus.kind = MinimaSet::Kind::Segment1D;
  pot.minima_minus.dim = 1;
  pot.minima_minus.seg_lo = p1;
  pot.minima_minus.seg_hi = p2;
  pot.minima_minus.tube_radius = std::min(0.5, 0.5 * (ut - p2));

  pot.minima_plus.kind = MinimaSet::Kind::Point;
  pot.minima_plus.dim = 1;
  pot.minima_plus.points = {{1.0}};
  pot.minima_plus.tube_radius = std::min(0.25, 0.5 * (1.0 - ut));

  pot.minima_minus.coercivity_const = fit_coercivity_1d(value, pot.minima_minus, h);
  pot.minima_plus.coercivity_const = fit_coercivity_1d(value, pot.minima_plus, 0.0);

  pot.growth_radius = std::max(std::abs(p1 - 1.0), 2.0) + 1.0;
  pot.growth_coeff = 0.85 * sampled_growth_coeff(pot);
  if (pot.growth_coeff <= 0.0) throw Error("plateau potential rejected: no radial growth");
  return pot;
}

// ---------------------------------------------------------------------------
// Planar tilted quartic

namespace {

struct Planar {
  std::array<double, 2> am, ap;
  double tilt;
  std::array<double, 2> dir;  // unit vector from ap toward am
  double offset = 0.0;

  double base(std::span<const double> u) const {
    double rm2 = (u[0] - am[0]) * (u[0] - am[0]) + (u[1] - am[1]) * (u[1] - am[1]);
    double rp2 = (u[0] - ap[0]) * (u[0] - ap[0]) + (u[1] - ap[1]) * (u[1] - ap[1]);
    double lin = (u[0] - ap[0]) * dir[0] + (u[1] - ap[1]) * dir[1];
    return 0.25 * rm2 * rp2 - tilt * lin - offset;
  }
  void gradient(std::span<const double> u, std::span<double> g) const {
    double rm2 = (u[0] - am[0]) * (u[0] - am[0]) + (u[1] - am[1]) * (u[1] - am[1]);
    double rp2 = (u[0] - ap[0]) * (u[0] - ap[0]) + (u[1] - ap[1]) * (u[1] - ap[1]);
    for (int d = 0; d < 2; ++d)
      g[d] = 0.5 * rp2 * (u[d] - am[d]) + 0.5 * rm2 * (u[d] - ap[d]) - tilt * dir[d];
  }
  std::array<double, 4> hessian(std::span<const double> u) const {
    double rm2 = (u[0] - am[0]) * (u[0] - am[0]) + (u[1] - am[1]) * (u[1] - am[1]);
    double rp2 = (u[0] - ap[0]) * (u[0] - ap[0]) + (u[1] - ap[1]) * (u[1] - ap[1]);
    std::array<double, 4> hmat{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double v = (u[i] - am[i]) * (u[j] - ap[j]) + (u[i] - ap[i]) * (u[j] - am[j]);
        if (i == j) v += 0.5 * (rm2 + rp2);
        hmat[i * 2 + j] = v;
      }
    return hmat;
  }
};

// Damped Newton descent to the nearest critical point; returns false if the
// iteration leaves the basin or the Hessian fails to be positive definite.
bool locate_well(const Planar& f, std::array<double, 2> seed, double basin_radius,
                 std::array<double, 2>& out) {
  std::array<double, 2> x = seed;
  double gn = 1e300;
  for (int it = 0; it < 200; ++it) {
    double g[2];
    f.gradient(std::span<const double>(x.data(), 2), std::span<double>(g, 2));
    gn = std::hypot(g[0], g[1]);
    if (gn < 1e-13) break;
    auto hmat = f.hessian(std::span<const double>(x.data(), 2));
    double det = hmat[0] * hmat[3] - hmat[1] * hmat[2];
    double step[2];
    if (std::abs(det) > 1e-14) {
      step[0] = (hmat[3] * g[0] - hmat[1] * g[1]) / det;
      step[1] = (hmat[0] * g[1] - hmat[2] * g[0]) / det;
    } else {
      step[0] = g[0];
      step[1] = g[1];
    }
    double sc = 1.0;
    double sn = std::hypot(step[0], step[1]);
    if (sn > 0.2 * basin_radius) sc = 0.2 * basin_radius / sn;
    x[0] -= sc * step[0];
    x[1] -= sc * step[1];
    if (std::hypot(x[0] - seed[0], x[1] - seed[1]) > basin_radius) return false;
  }
  if (gn > 1e-9) return false;  // never settled on a critical point
  auto hmat = f.hessian(std::span<const double>(x.data(), 2));
  double tr = hmat[0] + hmat[3];
  double det = hmat[0] * hmat[3] - hmat[1] * hmat[2];
  double lmin = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
  if (!(lmin > 1e-8)) return false;
  out = x;
  return true;
}

}  // namespace

PotentialModel make_planar_tilted(std::span<const double> well_minus,
                                  std::span<const double> well_plus, double tilt) {
  if (well_minus.size() != 2 || well_plus.size() != 2)
    throw Error("planar potential needs two points in R^2");
  double sep = std::hypot(well_minus[0] - well_plus[0], well_minus[1] - well_plus[1]);
  if (sep < 1e-12) throw Error("planar wells must be distinct");
  if (tilt < 0.0) throw Error("tilt must be nonnegative");

  // The axial restoring slope of the quartic maxes out at ~0.04811 sep^3, so
  // `tilt` is taken as a fraction of that well-destroying coefficient.
  const double tilt_raw = tilt * 0.0481125224324688 * sep * sep * sep;

  auto f = std::make_shared<Planar>();
  f->am = {well_minus[0], well_minus[1]};
  f->ap = {well_plus[0], well_plus[1]};
  f->tilt = tilt_raw;
  f->dir = {(well_minus[0] - well_plus[0]) / sep, (well_minus[1] - well_plus[1]) / sep};

  std::array<double, 2> m_minus, m_plus;
  if (!locate_well(*f, f->am, 0.45 * sep, m_minus) || !locate_well(*f, f->ap, 0.45 * sep, m_plus))
    throw Error("planar potential rejected: tilt destroyed a well");
  f->offset = f->base(std::span<const double>(m_plus.data(), 2));

  double depth = f->base(std::span<const double>(m_minus.data(), 2));
  if (!(depth < -1e-12)) throw Error("planar potential rejected: depth must be < 0");

  PotentialModel pot;
  pot.dim = 2;
  pot.name = "planar_tilted";
  pot.params = {{"well_minus_x", well_minus[0]}, {"well_minus_y", well_minus[1]},
                {"well_plus_x", well_plus[0]},   {"well_plus_y", well_plus[1]},
                {"tilt", tilt},                  {"tilt_raw", tilt_raw}};
  pot.depth = depth;
  pot.eval = [f](std::span<const double> u) { return f->base(u); };
  pot.grad = [f](std::span<const double> u, std::span<double> g) { f->gradient(u, g); };
  pot.hess_diag_bound = [f](std::span<const double> u) {
    double rm = std::hypot(u[0] - f->am[0], u[1] - f->am[1]);
    double rp = std::hypot(u[0] - f->ap[0], u[1] - f->ap[1]);
    return 0.5 * (rm + rp) * (rm + rp);
  };

  double msep = std::hypot(m_minus[0] - m_plus[0], m_minus[1] - m_plus[1]);
  pot.minima_minus.kind = MinimaSet::Kind::Point;
  pot.minima_minus.dim = 2;
  pot.minima_minus.points = {{m_minus[0], m_minus[1]}};
  pot.minima_minus.tube_radius = 0.25 * msep;
  pot.minima_plus.kind = MinimaSet::Kind::Point;
  pot.minima_plus.dim = 2;
  pot.minima_plus.points = {{m_plus[0], m_plus[1]}};
  pot.minima_plus.tube_radius = 0.25 * msep;

  // Coercivity constants from radial sampling around each located minimum.
  auto fit2d = [&pot](const MinimaSet& set, double level) {
    double worst = 0.0;
    std::vector<double> u(2);
    for (int ir = 0; ir < 40; ++ir) {
      double r = set.tube_radius * (ir + 0.5) / 40.0;
      for (int ia = 0; ia < 48; ++ia) {
        double ang = 2.0 * M_PI * ia / 48.0;
        u[0] = set.points[0][0] + r * std::cos(ang);
        u[1] = set.points[0][1] + r * std::sin(ang);
        double gap = pot.eval(u) - level;
        if (gap <= 0.0) continue;
        worst = std::max(worst, r * r / gap);
      }
    }
    if (worst == 0.0) throw Error("coercivity fit found no usable samples");
    return 1.2 * worst;
  };
  pot.minima_minus.coercivity_const = fit2d(pot.minima_minus, pot.depth);
  pot.minima_plus.coercivity_const = fit2d(pot.minima_plus, 0.0);

  double reach = std::max({std::hypot(well_minus[0], well_minus[1]),
                           std::hypot(well_plus[0], well_plus[1]), 1.0});
  pot.growth_radius = 2.0 * (reach + sep);
  pot.growth_coeff = 0.85 * sampled_growth_coeff(pot);
  if (pot.growth_coeff <= 0.0) throw Error("planar potential rejected: no radial growth");
  return pot;
}

// ---------------------------------------------------------------------------
// Tabulated scalar potential

namespace {

struct CubicSpline {
  std::vector<double> x, y, ypp;

  void build(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    if (n < 4 || ys.size() != n) throw Error("tabulated potential needs at least 4 rows");
    for (std::size_t i = 1; i < n; ++i)
      if (!(xs[i] > xs[i - 1])) throw Error("tabulated abscissae must be strictly increasing");
    x.assign(xs.begin(), xs.end());
    y.assign(ys.begin(), ys.end());
    // Natural spline: tridiagonal system for second derivatives.
    std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
      lower[i] = hl / 6.0;
      diag[i] = (hl + hr) / 3.0;
      upper[i] = hr / 6.0;
      rhs[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
    }
    TridiagonalSolver ts;
    ts.factor(lower, diag, upper);
    ts.solve(rhs);
    ypp = std::move(rhs);
  }

  std::size_t interval(double v) const {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - x.begin()));
    return std::min(i, x.size() - 1) - 1;
  }

  double value(double v) const {
    if (v <= x.front()) {
      double s = slope_at_front();
      double d = v - x.front();
      return y.front() + s * d + 0.5 * edge_curv_front() * d * d;
    }
    if (v >= x.back()) {
      double s = slope_at_back();
      double d = v - x.back();
      return y.back() + s * d + 0.5 * edge_curv_back() * d * d;
    }
    std::size_t i = interval(v);
    double h = x[i + 1] - x[i];
    double a = (x[i + 1] - v) / h, b = (v - x[i]) / h;
    return a * y[i] + b * y[i + 1] +
           ((a * a * a - a) * ypp[i] + (b * b * b - b) * ypp[i + 1]) * h * h / 6.0;
  }

  double derivative(double v) const {
    if (v <= x.front()) return slope_at_front() + edge_curv_front() * (v - x.front());
    if (v >= x.back()) return slope_at_back() + edge_curv_back() * (v - x.back());
    std::size_t i = interval(v);
    double h = x[i + 1] - x[i];
    double a = (x[i + 1] - v) / h, b = (v - x[i]) / h;
    return (y[i + 1] - y[i]) / h +
           ((3.0 * b * b - 1.0) * ypp[i + 1] - (3.0 * a * a - 1.0) * ypp[i]) * h / 6.0;
  }

  double slope_at_front() const {
    double h = x[1] - x[0];
    return (y[1] - y[0]) / h - h / 6.0 * (2.0 * ypp[0] + ypp[1]);
  }
  double slope_at_back() const {
    std::size_t n = x.size();
    double h = x[n - 1] - x[n - 2];
    return (y[n - 1] - y[n - 2]) / h + h / 6.0 * (ypp[n - 2] + 2.0 * ypp[n - 1]);
  }
  // Quadratic continuation: keep at least unit curvature so the tails grow.
  double edge_curv_front() const { return std::max(ypp.front(), 1.0); }
  double edge_curv_back() const { return std::max(ypp.back(), 1.0); }
};

}  // namespace

PotentialModel make_tabulated(std::span<const double> u, std::span<const double> w,
                              std::span<const double> dw) {
  auto ws = std::make_shared<CubicSpline>();
  ws->build(u, w);
  auto gs = std::make_shared<CubicSpline>();
  gs->build(u, dw);

  // Locate the two lowest interior local minima of the spline.
  std::vector<double> mins;
  const int probes = 4000;
  double lo = u.front(), hi = u.back();
  double prev = ws->value(lo);
  double cur = ws->value(lo + (hi - lo) / probes);
  for (int i = 2; i <= probes; ++i) {
    double nxt = ws->value(lo + (hi - lo) * i / probes);
    if (cur <= prev && cur <= nxt) {
      // Golden-section refine inside the bracketing cell.
      double a = lo + (hi - lo) * (i - 2) / probes, b = lo + (hi - lo) * i / probes;
      for (int it = 0; it < 80; ++it) {
        double m1 = a + 0.382 * (b - a), m2 = a + 0.618 * (b - a);
        if (ws->value(m1) < ws->value(m2))
          b = m2;
        else
          a = m1;
      }
      double pos = 0.5 * (a + b);
      if (mins.empty() || std::abs(pos - mins.back()) > 1e-6 * (hi - lo)) mins.push_back(pos);
    }
    prev = cur;
    cur = nxt;
  }
  if (mins.size() < 2) throw Error("tabulated potential: fewer than two interior minima");
  std::sort(mins.begin(), mins.end(),
            [&](double a, double b) { return ws->value(a) < ws->value(b); });
  double a_minus = mins[0];
  double a_plus = mins[1];
  double shift = ws->value(a_plus);
  double depth = ws->value(a_minus) - shift;
  if (!(depth < -1e-12))
    throw Error("tabulated potential: minima are balanced, depth must be < 0");

  PotentialModel pot;
  pot.dim = 1;
  pot.name = "tabulated";
  pot.depth = depth;
  pot.eval = [ws, shift](std::span<const double> p) { return ws->value(p[0]) - shift; };
  pot.grad = [gs](std::span<const double> p, std::span<double> g) { g[0] = gs->value(p[0]); };
  pot.hess_diag_bound = nullptr;  // minimizer falls back to a Lipschitz probe

  double sep = std::abs(a_plus - a_minus);
  pot.minima_minus.kind = MinimaSet::Kind::Point;
  pot.minima_minus.dim = 1;
  pot.minima_minus.points = {{a_minus}};
  pot.minima_minus.tube_radius = 0.25 * sep;
  pot.minima_plus.kind = MinimaSet::Kind::Point;
  pot.minima_plus.dim = 1;
  pot.minima_plus.points = {{a_plus}};
  pot.minima_plus.tube_radius = 0.25 * sep;

  auto w1 = [&pot](double v) { return pot.eval1(v); };
  pot.minima_minus.coercivity_const = fit_coercivity_1d(w1, pot.minima_minus, depth);
  pot.minima_plus.coercivity_const = fit_coercivity_1d(w1, pot.minima_plus, 0.0);

  pot.growth_radius = std::max(std::abs(u.front()), std::abs(u.back())) + 0.5;
  pot.growth_coeff = 0.85 * sampled_growth_coeff(pot);
  if (pot.growth_coeff <= 0.0)
    throw Error("tabulated potential: no radial growth beyond the table range");
  return pot;
}

// ---------------------------------------------------------------------------

PotentialModel make_scaled(const PotentialModel& base, double s2) {
  if (!(s2 > 0.0)) throw Error("scale factor must be positive");
  PotentialModel pot = base;
  pot.name = base.name + "_scaled";
  pot.params["scale"] = s2;
  auto ev = base.eval;
  auto gr = base.grad;
  pot.eval = [ev, s2](std::span<const double> u) { return s2 * ev(u); };
  pot.grad = [gr, s2](std::span<const double> u, std::span<double> g) {
    gr(u, g);
    for (auto& v : g) v *= s2;
  };
  if (base.hess_diag_bound) {
    auto hb = base.hess_diag_bound;
    pot.hess_diag_bound = [hb, s2](std::span<const double> u) { return s2 * hb(u); };
  }
  pot.depth = s2 * base.depth;
  pot.growth_coeff = s2 * base.growth_coeff;
  pot.minima_minus.coercivity_const = base.minima_minus.coercivity_const / s2;
  pot.minima_plus.coercivity_const = base.minima_plus.coercivity_const / s2;
  return pot;
}

}  // namespace fmwave
