#include "fmwave/energy.hpp"

#include <algorithm>
#include <cmath>

namespace fmwave {

namespace {

constexpr double kWeightFloor = 1e-300;

// Node weights e^{c t_i}, clamped to zero once they underflow the floor.
std::vector<double> node_weights(const Grid& g, double c, bool* floor_hit) {
  if (!(c > 0.0)) throw Error("weighted energy requires c > 0");
  if (c * g.t_max > 700.0) throw Error("domain too long for weight");
  std::vector<double> e(g.n);
  bool hit = false;
  for (int i = 0; i < g.n; ++i) {
    double w = std::exp(c * g.node(i));
    if (w < kWeightFloor) {
      w = 0.0;
      hit = true;
    }
    e[i] = w;
  }
  if (floor_hit) *floor_hit = hit;
  return e;
}

}  // namespace

WeightedEnergyReport energy(const Profile& profile, const PotentialModel& potential, double c) {
  const Grid& g = profile.grid;
  const int k = profile.dim;
  if (k != potential.dim) throw Error("profile and potential dimensions differ");

  WeightedEnergyReport rep;
  rep.c = c;
  std::vector<double> ew = node_weights(g, c, &rep.weight_floor_hit);
  const double dt = g.dt();
  const double inv_dt2 = 1.0 / (dt * dt);

  rep.per_cell.resize(g.cells());
  KahanSum kin_sum, pot_sum;
  std::vector<double> mid(k);
  for (int i = 0; i < g.cells(); ++i) {
    auto a = profile.node(i);
    auto b = profile.node(i + 1);
    double sq = 0.0;
    for (int d = 0; d < k; ++d) {
      double du = b[d] - a[d];
      sq += du * du;
      mid[d] = 0.5 * (a[d] + b[d]);
    }
    double wmid = potential.eval(mid);
    if (!std::isfinite(wmid)) throw Error("invalid profile: potential evaluated to NaN");
    double cell_w = (ew[i + 1] - ew[i]) / c;  // exact integral of the weight over the cell
    double kin = 0.5 * sq * inv_dt2;
    kin_sum.add(kin * cell_w);
    pot_sum.add(wmid * cell_w);
    rep.per_cell[i] = (kin + wmid) * cell_w;
  }
  rep.kinetic = kin_sum.value();
  rep.potential = pot_sum.value();
  rep.total = rep.kinetic + rep.potential;

  double w_left = potential.eval(profile.pinned ? std::span<const double>(profile.pin_left)
                                                : profile.node(0));
  rep.left_tail = w_left * ew[0] / c;
  return rep;
}

std::vector<double> energy_gradient(const Profile& profile, const PotentialModel& potential,
                                    double c) {
  const Grid& g = profile.grid;
  const int k = profile.dim;
  if (k != potential.dim) throw Error("profile and potential dimensions differ");

  bool floor_hit = false;
  std::vector<double> ew = node_weights(g, c, &floor_hit);
  const double dt = g.dt();
  const double inv_dt2 = 1.0 / (dt * dt);

  std::vector<double> grad(profile.values.size(), 0.0);
  std::vector<double> mid(k), gw(k);
  for (int i = 0; i < g.cells(); ++i) {
    auto a = profile.node(i);
    auto b = profile.node(i + 1);
    double cell_w = (ew[i + 1] - ew[i]) / c;
    for (int d = 0; d < k; ++d) mid[d] = 0.5 * (a[d] + b[d]);
    potential.grad(mid, gw);
    for (int d = 0; d < k; ++d) {
      double du = b[d] - a[d];
      double kin_term = du * inv_dt2 * cell_w;
      double pot_term = 0.5 * gw[d] * cell_w;
      grad[static_cast<std::size_t>(i) * k + d] += pot_term - kin_term;
      grad[static_cast<std::size_t>(i + 1) * k + d] += pot_term + kin_term;
    }
  }
  if (profile.pinned) {
    for (int d = 0; d < k; ++d) {
      grad[d] = 0.0;
      grad[static_cast<std::size_t>(g.n - 1) * k + d] = 0.0;
    }
  }
  for (double v : grad)
    if (!std::isfinite(v)) throw Error("invalid profile: gradient evaluated to NaN");
  return grad;
}

Profile roll_profile(const Profile& profile, int shift_cells) {
  const int n = profile.grid.n;
  const int k = profile.dim;
  Profile out = profile;
  for (int i = 0; i < n; ++i) {
    int j = i + shift_cells;
    const double* src;
    if (j < 0)
      src = profile.pin_left.data();
    else if (j >= n)
      src = profile.pin_right.data();
    else
      src = profile.values.data() + static_cast<std::size_t>(j) * k;
    std::copy(src, src + k, out.values.begin() + static_cast<std::size_t>(i) * k);
  }
  out.apply_pins();
  return out;
}

double translation_defect(const Profile& profile, const PotentialModel& potential, double c,
                          int shift_cells) {
  const int n = profile.grid.n;
  const int k = profile.dim;
  const int m = std::abs(shift_cells);
  if (m >= n - 1) throw Error("shift exceeds the window");

  auto flat_at = [&](int i, const std::vector<double>& pin) {
    auto u = profile.node(i);
    for (int d = 0; d < k; ++d)
      if (u[d] != pin[d]) return false;
    return true;
  };
  for (int i = 0; i <= m; ++i) {
    if (!flat_at(i, profile.pin_left) || !flat_at(n - 1 - i, profile.pin_right))
      throw Error("translation check requires tails flat over the shifted cells");
  }

  WeightedEnergyReport base = energy(profile, potential, c);
  WeightedEnergyReport shifted = energy(roll_profile(profile, shift_cells), potential, c);
  double tau = shift_cells * profile.grid.dt();
  double lhs = shifted.total + shifted.left_tail;
  double rhs = std::exp(-c * tau) * (base.total + base.left_tail);
  double scale = std::abs(base.total + base.left_tail) + 2.2e-16;
  return std::abs(lhs - rhs) / scale;
}

}  // namespace fmwave
