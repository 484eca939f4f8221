#include "fmwave/pde.hpp"

#include <algorithm>
#include <cmath>

namespace fmwave {

namespace {

double smoothstep7(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return ((((-20.0 * x + 70.0) * x - 84.0) * x + 35.0) * x) * x * x * x;
}

// Leftmost downward crossing of |w - a_plus| = level, linearly interpolated.
double front_position(const std::vector<double>& w, int nx, int k, double x0, double dx,
                      std::span<const double> a_plus, double level, bool& found) {
  double prev = 0.0;
  for (int i = 0; i < nx; ++i) {
    double d2 = 0.0;
    for (int d = 0; d < k; ++d) {
      double dd = w[static_cast<std::size_t>(i) * k + d] - a_plus[d];
      d2 += dd * dd;
    }
    double dist = std::sqrt(d2);
    if (i > 0 && prev >= level && dist < level) {
      double frac = (prev - level) / (prev - dist);
      found = true;
      return x0 + (i - 1 + frac) * dx;
    }
    prev = dist;
  }
  found = false;
  return 0.0;
}

}  // namespace

PdeResult pde_front_speed(const PotentialModel& potential, const PdeConfig& config) {
  const int k = potential.dim;
  if (!(config.dx > 0.0 && config.dt > 0.0 && config.half_length > 0.0 && config.t_end > 0.0))
    throw Error("pde oracle: invalid discretization");
  if (config.scheme == PdeScheme::Explicit && config.dt > 0.5 * config.dx * config.dx)
    throw Error("pde oracle: explicit scheme needs dt <= dx^2/2");

  const int nx = static_cast<int>(std::round(2.0 * config.half_length / config.dx)) + 1;
  const double x0 = -config.half_length;
  const int steps = static_cast<int>(std::round(config.t_end / config.dt));

  std::vector<double> a_plus = potential.minima_plus.representative();
  std::vector<double> a_minus = potential.minima_minus.project(a_plus);

  // State box for the invariant-region monitor (per component).
  std::vector<double> box_lo(k), box_hi(k);
  for (int d = 0; d < k; ++d) {
    box_lo[d] = std::min(a_minus[d], a_plus[d]) - 0.1;
    box_hi[d] = std::max(a_minus[d], a_plus[d]) + 0.1;
  }

  // Mollified step over 10 dx centered at x = 0.
  std::vector<double> w(static_cast<std::size_t>(nx) * k);
  const double moll = 10.0 * config.dx;
  for (int i = 0; i < nx; ++i) {
    double x = x0 + i * config.dx;
    double s = smoothstep7(x / moll + 0.5);
    for (int d = 0; d < k; ++d)
      w[static_cast<std::size_t>(i) * k + d] = a_minus[d] + s * (a_plus[d] - a_minus[d]);
  }

  TridiagonalSolver solver;
  if (config.scheme == PdeScheme::SemiImplicit) {
    double lam = config.dt / (config.dx * config.dx);
    std::vector<double> lower(nx, -lam), diag(nx, 1.0 + 2.0 * lam), upper(nx, -lam);
    diag[0] = 1.0;
    upper[0] = 0.0;
    diag[nx - 1] = 1.0;
    lower[nx - 1] = 0.0;
    solver.factor(lower, diag, upper);
  }

  PdeResult res;
  res.front.reserve(steps + 1);
  std::vector<double> rhs(nx), g(k), wn(w.size());
  const double boundary_guard = config.half_length - 10.0 * config.dx;

  auto track = [&](double t) {
    bool found = false;
    double xf = front_position(w, nx, k, x0, config.dx, a_plus, config.tracking_level, found);
    if (found) res.front.emplace_back(t, xf);
    return found ? xf : -config.half_length;
  };
  track(0.0);

  for (int n = 1; n <= steps; ++n) {
    if (config.scheme == PdeScheme::SemiImplicit) {
      // Implicit diffusion, explicit reaction, one tridiagonal solve per component.
      for (int d = 0; d < k; ++d) {
        for (int i = 0; i < nx; ++i) {
          if (i == 0 || i == nx - 1) {
            rhs[i] = w[static_cast<std::size_t>(i) * k + d];
            continue;
          }
          potential.grad(
              std::span<const double>(w.data() + static_cast<std::size_t>(i) * k, k), g);
          rhs[i] = w[static_cast<std::size_t>(i) * k + d] - config.dt * g[d];
        }
        solver.solve(rhs);
        for (int i = 0; i < nx; ++i) wn[static_cast<std::size_t>(i) * k + d] = rhs[i];
      }
    } else {
      double lam = config.dt / (config.dx * config.dx);
      for (int i = 0; i < nx; ++i) {
        if (i == 0 || i == nx - 1) {
          for (int d = 0; d < k; ++d)
            wn[static_cast<std::size_t>(i) * k + d] = w[static_cast<std::size_t>(i) * k + d];
          continue;
        }
        potential.grad(std::span<const double>(w.data() + static_cast<std::size_t>(i) * k, k), g);
        for (int d = 0; d < k; ++d) {
          double lap = w[static_cast<std::size_t>(i - 1) * k + d] -
                       2.0 * w[static_cast<std::size_t>(i) * k + d] +
                       w[static_cast<std::size_t>(i + 1) * k + d];
          wn[static_cast<std::size_t>(i) * k + d] =
              w[static_cast<std::size_t>(i) * k + d] + lam * lap - config.dt * g[d];
        }
      }
    }
    w.swap(wn);

    for (int i = 0; i < nx; ++i)
      for (int d = 0; d < k; ++d) {
        double v = w[static_cast<std::size_t>(i) * k + d];
        double exc = std::max(box_lo[d] - v, v - box_hi[d]);
        res.invariant_overshoot = std::max(res.invariant_overshoot, exc);
      }

    double t = n * config.dt;
    double xf = track(t);
    // The Dirichlet boundary can also park the front just inside the guard,
    // so the guard zone itself must stay at the shallow rest state.
    double guard_dist = 0.0;
    int gi = nx - 1 - 10;
    for (int d = 0; d < k; ++d) {
      double dd = w[static_cast<std::size_t>(gi) * k + d] - a_plus[d];
      guard_dist += dd * dd;
    }
    if (xf > boundary_guard || std::sqrt(guard_dist) > 0.05 * config.tracking_level)
      throw PdeDomainError("domain too short: front reached the boundary before the fit window",
                           res.front);
    if (config.snapshot_every > 0 && n % config.snapshot_every == 0) {
      res.snapshots.push_back(w);
      res.snapshot_times.push_back(t);
    }
  }

  // Least-squares slope over the trailing fit window.
  if (res.front.size() < 10) throw Error("pde oracle: front was never detected");
  double t_start = (1.0 - config.fit_fraction) * config.t_end;
  std::vector<double> ts, xs;
  for (const auto& [t, x] : res.front)
    if (t >= t_start) {
      ts.push_back(t);
      xs.push_back(x);
    }
  if (ts.size() < 10) throw Error("pde oracle: fit window has too few front samples");
  res.speed = least_squares_slope(ts, xs);
  return res;
}

}  // namespace fmwave
