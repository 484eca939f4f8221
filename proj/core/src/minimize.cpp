#include "fmwave/minimize.hpp"

#include <algorithm>
#include <cmath>

namespace fmwave {

namespace {

struct Workspace {
  const PotentialModel& pot;
  const Grid& grid;
  int k;
  double c;
  double dt, inv_dt2;
  std::vector<double> ew;       // node exponentials
  std::vector<double> cell_w;   // exact cell weights
  std::vector<double> mass;     // node masses
  bool floor_hit = false;

  Workspace(const PotentialModel& p, const Grid& g, double c_) : pot(p), grid(g), k(p.dim), c(c_) {
    if (!(c > 0.0)) throw Error("minimize requires c > 0");
    if (c * g.t_max > 700.0) throw Error("domain too long for weight");
    dt = g.dt();
    inv_dt2 = 1.0 / (dt * dt);
    ew.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
      double w = std::exp(c * g.node(i));
      if (w < 1e-300) {
        w = 0.0;
        floor_hit = true;
      }
      ew[i] = w;
    }
    cell_w.resize(g.cells());
    for (int i = 0; i < g.cells(); ++i) cell_w[i] = (ew[i + 1] - ew[i]) / c;
    mass.resize(g.n);
    for (int j = 0; j < g.n; ++j) {
      double wl = j > 0 ? cell_w[j - 1] : 0.0;
      double wr = j < g.cells() ? cell_w[j] : 0.0;
      mass[j] = 0.5 * (wl + wr);
    }
  }

  double energy_value(const std::vector<double>& values) const {
    KahanSum sum;
    std::vector<double> mid(k);
    for (int i = 0; i < grid.cells(); ++i) {
      const double* a = values.data() + static_cast<std::size_t>(i) * k;
      const double* b = a + k;
      double sq = 0.0;
      for (int d = 0; d < k; ++d) {
        double du = b[d] - a[d];
        sq += du * du;
        mid[d] = 0.5 * (a[d] + b[d]);
      }
      double wm = pot.eval(mid);
      if (!std::isfinite(wm)) throw Error("invalid profile: potential evaluated to NaN");
      sum.add((0.5 * sq * inv_dt2 + wm) * cell_w[i]);
    }
    return sum.value();
  }

  double energy_and_gradient(const std::vector<double>& values, std::vector<double>& g) const {
    KahanSum sum;
    std::fill(g.begin(), g.end(), 0.0);
    std::vector<double> mid(k), gw(k);
    for (int i = 0; i < grid.cells(); ++i) {
      const double* a = values.data() + static_cast<std::size_t>(i) * k;
      const double* b = a + k;
      double sq = 0.0;
      for (int d = 0; d < k; ++d) {
        double du = b[d] - a[d];
        sq += du * du;
        mid[d] = 0.5 * (a[d] + b[d]);
      }
      double wm = pot.eval(mid);
      if (!std::isfinite(wm)) throw Error("invalid profile: potential evaluated to NaN");
      sum.add((0.5 * sq * inv_dt2 + wm) * cell_w[i]);
      pot.grad(mid, gw);
      for (int d = 0; d < k; ++d) {
        double du = b[d] - a[d];
        double kin = du * inv_dt2 * cell_w[i];
        double potg = 0.5 * gw[d] * cell_w[i];
        g[static_cast<std::size_t>(i) * k + d] += potg - kin;
        g[static_cast<std::size_t>(i + 1) * k + d] += potg + kin;
      }
    }
    // Pinned rows stay fixed.
    for (int d = 0; d < k; ++d) {
      g[d] = 0.0;
      g[static_cast<std::size_t>(grid.n - 1) * k + d] = 0.0;
    }
    return sum.value();
  }
};

// Curvature scale for the preconditioner: largest Hessian estimate along the
// initial path, or a deterministic finite-difference Lipschitz probe.
double curvature_scale(const PotentialModel& pot, const Profile& init) {
  double mu = 0.1;
  if (pot.hess_diag_bound) {
    for (int i = 0; i < init.grid.n; i += std::max(1, init.grid.n / 256))
      mu = std::max(mu, pot.hess_diag_bound(init.node(i)));
    mu = std::max(mu, pot.hess_diag_bound(init.pin_left));
    mu = std::max(mu, pot.hess_diag_bound(init.pin_right));
  } else {
    const int k = init.dim;
    std::vector<double> x(k), y(k), gx(k), gy(k);
    const double golden = 0.6180339887498949;
    double phase = 0.0;
    for (int s = 0; s < 64; ++s) {
      phase += golden;
      double t = phase - std::floor(phase);
      for (int d = 0; d < k; ++d) {
        x[d] = init.pin_left[d] + t * (init.pin_right[d] - init.pin_left[d]);
        y[d] = x[d] + 0.25 * ((d + s) % 2 ? -1.0 : 1.0) * (0.3 + 0.7 * t);
      }
      pot.grad(x, gx);
      pot.grad(y, gy);
      double num = dist2(gx, gy), den = dist2(x, y);
      if (den > 1e-12) mu = std::max(mu, num / den);
    }
  }
  return 1.5 * mu;
}

}  // namespace

Profile default_initial_profile(const PotentialModel& potential, const Grid& grid) {
  const int k = potential.dim;
  std::vector<double> plus_rep = potential.minima_plus.representative();
  std::vector<double> anchor_minus = potential.minima_minus.project(plus_rep);
  std::vector<double> anchor_plus = potential.minima_plus.project(anchor_minus);

  Profile p(grid, k);
  p.pin_left = anchor_minus;
  p.pin_right = anchor_plus;
  for (int i = 0; i < grid.n; ++i) {
    double t = grid.node(i);
    double s = t <= -1.0 ? 0.0 : (t >= 1.0 ? 1.0 : 0.5 * (t + 1.0));
    auto node = p.node(i);
    for (int d = 0; d < k; ++d) node[d] = anchor_minus[d] + s * (anchor_plus[d] - anchor_minus[d]);
  }
  p.apply_pins();
  return p;
}

double ode_residual(const Profile& profile, const PotentialModel& potential, double c) {
  const Grid& g = profile.grid;
  const int k = profile.dim;
  const double dt = g.dt();
  KahanSum num, den;
  std::vector<double> gw(k);
  for (int j = 1; j + 1 < g.n; ++j) {
    auto um = profile.node(j - 1);
    auto u0 = profile.node(j);
    auto up = profile.node(j + 1);
    potential.grad(u0, gw);
    double w = std::exp(c * g.node(j));
    double r2 = 0.0;
    for (int d = 0; d < k; ++d) {
      double first = (up[d] - um[d]) / (2.0 * dt);
      double second = (up[d] - 2.0 * u0[d] + um[d]) / (dt * dt);
      double r = -c * first - second + gw[d];
      r2 += r * r;
    }
    num.add(r2 * w * dt);
    den.add(w * dt);
  }
  if (den.value() <= 0.0) return 0.0;
  return std::sqrt(num.value() / den.value());
}

MinimizeResult minimize(const PotentialModel& potential, const AuditedConstants& constants,
                        const Grid& grid, double c, const MinimizeConfig& config,
                        const std::optional<Profile>& init) {
  const int k = potential.dim;
  double T = config.T > 0.0 ? config.T : std::min(-grid.t_min, grid.t_max) / 4.0;
  if (!(T >= 1.0)) throw Error("constraint onset time T must be >= 1");
  if (!(T < std::min(-grid.t_min, grid.t_max)))
    throw Error("constraint onset time T must be inside the window");
  if (!(config.grad_tol > 0.0)) throw Error("grad_tol must be positive");

  Profile u = init ? *init : default_initial_profile(potential, grid);
  if (init) {
    if (u.grid.n != grid.n || u.dim != k) throw Error("initial profile does not match the grid");
    u.apply_pins();
    u.validate();
  }

  Workspace ws(potential, grid, c);

  // Constraint sets.
  std::optional<SublevelSet> left_set;
  if (config.enforce_left_constraint)
    left_set.emplace(potential, constants.h_minus, Branch::Minus);
  const double tube_half = 0.5 * potential.minima_plus.tube_radius;

  std::vector<double> buf(k), proj(k);
  struct Fired {
    bool left = false, right = false, trunc = false;
    bool any() const { return left || right || trunc; }
  };
  auto apply_constraints = [&](std::vector<double>& values) {
    Fired fired;
    for (int j = 1; j + 1 < grid.n; ++j) {
      double t = grid.node(j);
      std::span<double> node(values.data() + static_cast<std::size_t>(j) * k,
                             static_cast<std::size_t>(k));
      if (config.enforce_truncation) {
        double r = norm2(node);
        if (r > potential.growth_radius) {
          double s = potential.growth_radius / r;
          for (int d = 0; d < k; ++d) node[d] *= s;
          fired.trunc = true;
        }
      }
      if (left_set && t <= -T) {
        if (!left_set->contains(node)) {
          project_sublevel(*left_set, node, buf);
          std::copy(buf.begin(), buf.end(), node.begin());
          fired.left = true;
        }
      }
      if (config.enforce_right_constraint && t >= T) {
        potential.minima_plus.project(node, proj);
        double dist = dist2(node, proj);
        if (dist > tube_half) {
          double s = tube_half / dist;
          for (int d = 0; d < k; ++d) node[d] = proj[d] + s * (node[d] - proj[d]);
          fired.right = true;
        }
      }
    }
    for (int d = 0; d < k; ++d) {
      values[d] = u.pin_left[d];
      values[static_cast<std::size_t>(grid.n - 1) * k + d] = u.pin_right[d];
    }
    return fired;
  };

  apply_constraints(u.values);

  // Base preconditioner bands: kinetic Hessian plus curvature * mass.
  double mu = curvature_scale(potential, u);
  std::vector<double> base_lower(grid.n, 0.0), base_diag(grid.n, 0.0), base_upper(grid.n, 0.0);
  for (int j = 0; j < grid.n; ++j) {
    double wl = j > 0 ? ws.cell_w[j - 1] : 0.0;
    double wr = j < grid.cells() ? ws.cell_w[j] : 0.0;
    base_diag[j] = (wl + wr) * ws.inv_dt2 + mu * ws.mass[j];
    base_lower[j] = j > 0 ? -wl * ws.inv_dt2 : 0.0;
    base_upper[j] = j < grid.cells() ? -wr * ws.inv_dt2 : 0.0;
  }

  MinimizeResult res;
  std::vector<double> g(u.values.size()), dir(u.values.size()), trial(u.values.size());
  std::vector<double> comp(grid.n), gw(k);

  // Nodes pressed against a constraint boundary are held fixed in the
  // coupled solve (Dirichlet rows) and move only tangentially; this keeps
  // the preconditioned step compatible with the nodewise projections.
  std::vector<char> active(grid.n, 0), prev_active(grid.n, 2);
  std::vector<double> tangential(u.values.size(), 0.0);
  auto classify_active = [&]() {
    std::vector<double> r(k), nrm(k);
    std::fill(tangential.begin(), tangential.end(), 0.0);
    active[0] = active[grid.n - 1] = 1;
    for (int j = 1; j + 1 < grid.n; ++j) {
      double t = grid.node(j);
      auto node = u.node(j);
      active[j] = 0;
      for (int d = 0; d < k; ++d) r[d] = g[static_cast<std::size_t>(j) * k + d];
      auto press_and_tangent = [&](std::span<const double> normal) -> bool {
        double nn = dot(normal, normal);
        if (nn < 1e-28) return false;
        // Pressed: the descent direction -g points outward, i.e. <g, n> < 0.
        double out = dot(r, normal) / nn;
        if (out >= 0.0) return false;
        for (int d = 0; d < k; ++d)
          tangential[static_cast<std::size_t>(j) * k + d] =
              -(r[d] - out * normal[d]) / base_diag[j];
        return true;
      };
      if (left_set && t <= -T) {
        double w_here = potential.eval(node);
        if (w_here >= constants.h_minus - 1e-10 * (1.0 + std::abs(constants.h_minus))) {
          potential.grad(node, gw);
          if (press_and_tangent(gw)) {
            active[j] = 1;
            continue;
          }
        }
      }
      if (config.enforce_right_constraint && t >= T) {
        potential.minima_plus.project(node, proj);
        double dist = dist2(node, proj);
        if (dist >= tube_half * (1.0 - 1e-10) && dist > 1e-300) {
          for (int d = 0; d < k; ++d) nrm[d] = (node[d] - proj[d]) / dist;
          if (press_and_tangent(nrm)) {
            active[j] = 1;
            continue;
          }
        }
      }
      if (config.enforce_truncation) {
        double rad = norm2(node);
        if (rad >= potential.growth_radius * (1.0 - 1e-10)) {
          for (int d = 0; d < k; ++d) nrm[d] = node[d] / rad;
          if (press_and_tangent(nrm)) active[j] = 1;
        }
      }
    }
  };

  TridiagonalSolver solver;
  std::vector<double> lower(grid.n), diag(grid.n), upper(grid.n);
  auto refactor_if_needed = [&]() {
    if (active == prev_active) return;
    for (int j = 0; j < grid.n; ++j) {
      if (active[j]) {
        lower[j] = 0.0;
        diag[j] = 1.0;
        upper[j] = 0.0;
      } else {
        lower[j] = (j > 0 && active[j - 1]) ? 0.0 : base_lower[j];
        upper[j] = (j + 1 < grid.n && active[j + 1]) ? 0.0 : base_upper[j];
        diag[j] = base_diag[j];
      }
    }
    solver.factor(lower, diag, upper);
    prev_active = active;
  };

  // Stationarity with the outward normal removed at active constraints.
  auto stationarity = [&](const std::vector<double>& grad_vec) {
    double worst = 0.0;
    std::vector<double> r(k), nrm(k);
    for (int j = 1; j + 1 < grid.n; ++j) {
      double t = grid.node(j);
      auto node = u.node(j);
      for (int d = 0; d < k; ++d) r[d] = grad_vec[static_cast<std::size_t>(j) * k + d];
      // At a pressed node the constraint force balances the normal part of
      // the gradient (<g, n> < 0 there), so only the tangential part counts.
      auto remove_outward = [&](std::span<const double> normal) {
        double nn = dot(normal, normal);
        if (nn < 1e-28) return;
        double comp_out = dot(r, normal) / nn;
        if (comp_out < 0.0)
          for (int d = 0; d < k; ++d) r[d] -= comp_out * normal[d];
      };
      if (left_set && t <= -T && potential.eval(node) >= constants.h_minus - 1e-10) {
        potential.grad(node, gw);
        remove_outward(gw);
      }
      if (config.enforce_right_constraint && t >= T) {
        potential.minima_plus.project(node, proj);
        double dist = dist2(node, proj);
        if (dist >= tube_half - 1e-12 && dist > 1e-300) {
          for (int d = 0; d < k; ++d) nrm[d] = (node[d] - proj[d]) / dist;
          remove_outward(nrm);
        }
      }
      if (config.enforce_truncation) {
        double rad = norm2(node);
        if (rad >= potential.growth_radius - 1e-12) {
          for (int d = 0; d < k; ++d) nrm[d] = node[d] / rad;
          remove_outward(nrm);
        }
      }
      double rn = norm2(r) / std::max(ws.mass[j], 1e-300);
      worst = std::max(worst, rn);
    }
    return worst;
  };

  double energy_base = ws.energy_and_gradient(u.values, g);
  double prev_energy = energy_base;
  int energy_rise_streak = 0;
  int last_left_fired = -100, last_right_fired = -100;
  double step_scale = 1.0;

  int it = 0;
  for (; it < config.max_iters; ++it) {
    res.grad_norm = stationarity(g);
    if (res.grad_norm <= config.grad_tol) {
      res.converged = true;
      break;
    }

    // Preconditioned direction with the active set held fixed, one
    // tridiagonal solve per component; active nodes get their tangential step.
    classify_active();
    refactor_if_needed();
    for (int d = 0; d < k; ++d) {
      for (int j = 0; j < grid.n; ++j) {
        if (active[j]) {
          comp[j] = tangential[static_cast<std::size_t>(j) * k + d];
          continue;
        }
        double r = -g[static_cast<std::size_t>(j) * k + d];
        if (j > 0 && active[j - 1])
          r -= base_lower[j] * tangential[static_cast<std::size_t>(j - 1) * k + d];
        if (j + 1 < grid.n && active[j + 1])
          r -= base_upper[j] * tangential[static_cast<std::size_t>(j + 1) * k + d];
        comp[j] = r;
      }
      solver.solve(comp);
      for (int j = 0; j < grid.n; ++j) dir[static_cast<std::size_t>(j) * k + d] = comp[j];
    }

    // Projected backtracking: the trial is projected into the constraint
    // class before the sufficient-decrease test, so accepted iterates are
    // feasible and their energies are non-increasing.
    double step = config.step_rule == StepRule::Fixed ? config.fixed_step
                                                      : std::min(1.0, 2.0 * step_scale);
    double trial_energy = 0.0;
    Fired fired;
    bool accepted = false;
    bool stalled = false;
    for (int ls = 0; ls < 45; ++ls) {
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = u.values[i] + step * dir[i];
      fired = apply_constraints(trial);
      trial_energy = ws.energy_value(trial);
      double model_dec = 0.0;
      for (std::size_t i = 0; i < trial.size(); ++i) model_dec += g[i] * (trial[i] - u.values[i]);
      if (config.step_rule == StepRule::Fixed) {
        accepted = true;
        break;
      }
      if (model_dec < 0.0 && trial_energy <= energy_base + 1e-4 * model_dec) {
        accepted = true;
        break;
      }
      if (trial_energy <= energy_base && std::abs(model_dec) <= 1e-14 * std::abs(energy_base)) {
        stalled = true;  // projection absorbed the whole step
        break;
      }
      step *= 0.5;
    }
    if (stalled) {
      res.converged = res.grad_norm <= 10.0 * config.grad_tol;
      break;
    }
    if (!accepted) {
      res.profile = u;
      res.energy = energy_base;
      res.iterations = it;
      throw Error("line search failed to find a decreasing step");
    }
    step_scale = step;
    if (fired.left && left_set) {
      // Energy change attributable to the deep-side projection, measured on
      // the cells whose endpoints the projection controls: cells inside the
      // constrained region, plus the junction cell when its free endpoint is
      // already feasible (the comparison argument projects sub-paths with
      // feasible ends).
      std::vector<double> raw(u.values.size());
      for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = u.values[i] + step * dir[i];
      for (int d = 0; d < k; ++d) {
        raw[d] = u.pin_left[d];
        raw[static_cast<std::size_t>(grid.n - 1) * k + d] = u.pin_right[d];
      }
      int last_constrained = 0;
      while (last_constrained + 1 < grid.n && grid.node(last_constrained + 1) <= -T)
        ++last_constrained;
      auto cell_energy = [&](const std::vector<double>& values, int i) {
        const double* a = values.data() + static_cast<std::size_t>(i) * k;
        const double* b = a + k;
        double sq = 0.0;
        std::vector<double> mid(k);
        for (int d = 0; d < k; ++d) {
          double du = b[d] - a[d];
          sq += du * du;
          mid[d] = 0.5 * (a[d] + b[d]);
        }
        return (0.5 * sq * ws.inv_dt2 + potential.eval(mid)) * ws.cell_w[i];
      };
      double gain = 0.0;
      for (int i = 0; i < last_constrained; ++i)
        gain += cell_energy(trial, i) - cell_energy(raw, i);
      std::span<const double> junction(raw.data() + static_cast<std::size_t>(last_constrained + 1) * k,
                                       static_cast<std::size_t>(k));
      if (last_constrained < grid.cells() && left_set->contains(junction))
        gain += cell_energy(trial, last_constrained) - cell_energy(raw, last_constrained);
      res.max_left_projection_gain = std::max(res.max_left_projection_gain, gain);
    }
    u.values = trial;
    u.apply_pins();
    if (fired.left) last_left_fired = it;
    if (fired.right) last_right_fired = it;

    energy_base = ws.energy_and_gradient(u.values, g);
    if (energy_base > prev_energy) {
      if (++energy_rise_streak >= 50) {
        res.profile = u;
        res.energy = energy_base;
        res.iterations = it;
        throw Error("descent diverged: energy increased across 50 consecutive steps");
      }
    } else {
      energy_rise_streak = 0;
    }
    prev_energy = energy_base;

    if (config.record_iterations)
      res.log.push_back({it, energy_base, res.grad_norm, step});
  }

  res.profile = u;
  res.energy = energy_base;
  res.iterations = it;
  // A constraint counts as active if a projection fired recently or nodes
  // finished pressed against its boundary.
  classify_active();
  bool pressed_left = false, pressed_right = false;
  for (int j = 1; j + 1 < grid.n; ++j) {
    if (!active[j]) continue;
    if (grid.node(j) <= -T) pressed_left = true;
    if (grid.node(j) >= T) pressed_right = true;
  }
  res.constraint_active_left = pressed_left || (it - last_left_fired < 10);
  res.constraint_active_right = pressed_right || (it - last_right_fired < 10);
  res.ode_residual = ode_residual(u, potential, c);
  return res;
}

}  // namespace fmwave
