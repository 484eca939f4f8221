#include "fmwave/speed.hpp"

#include <algorithm>
#include <cmath>

namespace fmwave {

double energy_scale_tolerance(const PotentialModel& potential, const Grid& grid, double c,
                              double rel) {
  return rel * std::abs(potential.depth) * (std::exp(c * grid.t_max) - std::exp(c * grid.t_min)) /
         c;
}

double constrained_minimum(const PotentialModel& potential, const AuditedConstants& constants,
                           const Grid& grid, double c, const MinimizeConfig& config) {
  return minimize(potential, constants, grid, c, config).energy;
}

double bracket_bound(const PotentialModel& potential, const AuditedConstants& constants) {
  if (!(constants.d_alpha0 > 0.0)) throw Error("bracket bound needs a positive separation");
  return std::sqrt(-2.0 * potential.depth) / constants.d_alpha0;
}

TransitionTimeBounds transition_time_bounds(double c, double R, double omega, double a,
                                            double alpha_ss) {
  if (!(c > 0.0)) throw Error("transition time bounds need c > 0");
  if (!(R > 0.0)) throw Error("transition time bounds need R > 0");
  if (!(omega > 0.0)) throw Error("transition time bounds need omega > 0");
  if (!(a < 0.0)) throw Error("transition time bounds need a < 0");
  if (!(alpha_ss > 0.0)) throw Error("transition time bounds need alpha_ss > 0");
  TransitionTimeBounds b;
  b.T1 = (2.0 * R * c + 2.0 * std::sqrt(R * R * c * c + 2.0 * R * omega)) / omega;
  b.T2 = std::log(-a / alpha_ss + 1.0) / c;
  b.Tss = b.T1 + b.T2;
  return b;
}

double speed_formula(const Profile& profile, const PotentialModel& potential) {
  const Grid& g = profile.grid;
  const double dt = g.dt();
  KahanSum kin;
  for (int i = 0; i < g.cells(); ++i) {
    auto a = profile.node(i);
    auto b = profile.node(i + 1);
    double sq = 0.0;
    for (int d = 0; d < profile.dim; ++d) {
      double du = (b[d] - a[d]) / dt;
      sq += du * du;
    }
    kin.add(sq * dt);
  }
  if (kin.value() < 1e-14) throw Error("speed formula: degenerate profile with no kinetic mass");
  return -potential.depth / kin.value();
}

DecayFit fit_decay_rate(const Profile& profile, const PotentialModel& potential, double c,
                        double noise_floor) {
  const Grid& g = profile.grid;
  const double tube_half = 0.5 * potential.minima_plus.tube_radius;
  noise_floor = std::max(noise_floor, 1e-12);

  std::vector<double> ts, logs;
  bool inside = false;
  for (int i = 0; i < g.n; ++i) {
    double dist = potential.minima_plus.distance(profile.node(i));
    if (!inside && dist <= tube_half) inside = true;
    if (inside) {
      if (dist <= noise_floor) break;
      ts.push_back(g.node(i));
      logs.push_back(std::log(dist));
    }
  }
  if (ts.size() < 20) throw Error("decay fit: tail too short or below the noise floor");

  DecayFit fit;
  fit.nodes = static_cast<int>(ts.size());
  fit.fitted = -least_squares_slope(ts, logs);

  // Linearization prediction from the Hessian at the tail's landing point.
  const int k = potential.dim;
  std::vector<double> a_plus = potential.minima_plus.project(profile.node(g.n - 1));
  std::vector<double> hess(static_cast<std::size_t>(k) * k, 0.0);
  std::vector<double> xp(k), xm(k), gp(k), gm(k);
  const double h = 1e-5;
  for (int j = 0; j < k; ++j) {
    for (int d = 0; d < k; ++d) xp[d] = xm[d] = a_plus[d];
    xp[j] += h;
    xm[j] -= h;
    potential.grad(xp, gp);
    potential.grad(xm, gm);
    for (int i2 = 0; i2 < k; ++i2) hess[static_cast<std::size_t>(i2) * k + j] = (gp[i2] - gm[i2]) / (2.0 * h);
  }
  // Symmetrize before the eigenvalue sweep.
  for (int i2 = 0; i2 < k; ++i2)
    for (int j = i2 + 1; j < k; ++j) {
      double v = 0.5 * (hess[static_cast<std::size_t>(i2) * k + j] + hess[static_cast<std::size_t>(j) * k + i2]);
      hess[static_cast<std::size_t>(i2) * k + j] = hess[static_cast<std::size_t>(j) * k + i2] = v;
    }
  double lmin = symmetric_eigen_range(hess, k).min;
  fit.predicted = 0.5 * (c + std::sqrt(c * c + 4.0 * std::max(lmin, 0.0)));
  return fit;
}

SpeedResult bisect_speed(const PotentialModel& potential, const AuditedConstants& constants,
                         const Grid& grid, const SpeedConfig& config) {
  SpeedResult res;
  const double c_tol = config.c_tol;
  if (!(c_tol > 0.0)) throw Error("bisect_speed needs a positive tolerance");

  double T_eff = config.minimize.T > 0.0 ? config.minimize.T
                                         : std::min(-grid.t_min, grid.t_max) / 4.0;
  auto predicate_threshold = [&](double c) {
    return config.predicate_rel * std::abs(potential.depth) * std::exp(-c * T_eff) / c;
  };
  auto m_of = [&](double c) {
    double m = constrained_minimum(potential, constants, grid, c, config.minimize);
    res.probes.emplace_back(c, m);
    return m;
  };
  auto in_speed_set = [&](double c) { return m_of(c) < -predicate_threshold(c); };

  double c_lo = c_tol;
  double c_hi = config.bracket_inflation * bracket_bound(potential, constants);
  if (c_hi * grid.t_max > 690.0) c_hi = 690.0 / grid.t_max;

  if (!in_speed_set(c_lo))
    throw Error("bracket invalid; increase domain or audit potential (lower end not negative)");
  if (in_speed_set(c_hi))
    throw Error("bracket invalid; increase domain or audit potential (upper end still negative)");

  while (c_hi - c_lo > c_tol) {
    double mid = 0.5 * (c_lo + c_hi);
    if (in_speed_set(mid))
      c_lo = mid;
    else
      c_hi = mid;
  }
  res.bracket_lo = c_lo;
  res.bracket_hi = c_hi;
  res.c_star = 0.5 * (c_lo + c_hi);

  MinimizeResult refined =
      minimize(potential, constants, grid, res.c_star, config.refine);
  res.profile = refined.profile;
  res.energy_at_c_star = refined.energy;
  res.m_tol_certificate = energy_scale_tolerance(potential, grid, res.c_star, 1e-6);
  res.formula_speed = speed_formula(res.profile, potential);
  DecayFit fit = fit_decay_rate(res.profile, potential, res.c_star);
  res.decay_rate = fit.fitted;
  res.decay_rate_predicted = fit.predicted;
  return res;
}

}  // namespace fmwave
