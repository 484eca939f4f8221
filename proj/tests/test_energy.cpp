#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fmwave/energy.hpp"
#include "test_helpers.hpp"

using namespace fmwave;
using fmwave::test::kNagumoSpeed25;

namespace {

Profile constant_profile(const Grid& g, double value) {
  Profile p(g, 1);
  p.pin_left = {value};
  p.pin_right = {value};
  for (int i = 0; i < g.n; ++i) p.node(i)[0] = value;
  return p;
}

}  // namespace

TEST_CASE("energy: rest state at the shallow well costs nothing") {
  PotentialModel pot = make_tilted_cubic(0.25);
  for (double c : {0.1, 0.5, 2.0}) {
    WeightedEnergyReport rep = energy(constant_profile(Grid(-15, 10, 501), 0.0), pot, c);
    CHECK(rep.total == 0.0);
    CHECK(rep.kinetic == 0.0);
    CHECK(rep.potential == 0.0);
    CHECK(rep.left_tail == 0.0);
  }
}

TEST_CASE("energy: deep rest state integrates the plateau weight exactly") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-10.0, 0.0, 1001);
  WeightedEnergyReport rep = energy(constant_profile(g, 1.0), pot, 1.0);
  double expected = pot.depth * (1.0 - std::exp(-10.0));
  CHECK(rep.kinetic == 0.0);
  CHECK(rep.potential == doctest::Approx(expected).epsilon(1e-13));
  CHECK(rep.total == doctest::Approx(-0.0416648).epsilon(1e-4));
  CHECK(rep.left_tail == doctest::Approx(pot.depth * std::exp(-10.0)).epsilon(1e-13));
}

TEST_CASE("energy: exact front at the selected speed is near zero") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, 4001);
  WeightedEnergyReport rep = energy(test::nagumo_profile(g), pot, kNagumoSpeed25);
  double tol = 1e-3 * std::abs(pot.depth) / kNagumoSpeed25;
  CHECK(std::abs(rep.total) <= tol);
  CHECK(rep.total == rep.kinetic + rep.potential);
}

TEST_CASE("energy: per-cell decomposition sums to the total") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-20, 20, 801);
  WeightedEnergyReport rep = energy(test::nagumo_profile(g), pot, 0.3);
  KahanSum s;
  for (double v : rep.per_cell) s.add(v);
  CHECK(s.value() == doctest::Approx(rep.total).epsilon(1e-12));
}

TEST_CASE("energy gradient: zero at the rest state, exact differential elsewhere") {
  PotentialModel cubic = make_tilted_cubic(0.25);
  auto grad0 = energy_gradient(constant_profile(Grid(-10, 10, 201), 0.0), cubic, 0.5);
  for (double v : grad0) CHECK(v == 0.0);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pert(-0.05, 0.05);
  PotentialModel plateau = make_plateau_scalar(-2.0, -1.0, -0.05);
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  PotentialModel planar = make_planar_tilted({wm, 2}, {wp, 2}, 0.1);

  for (const PotentialModel* pot : {&cubic, &plateau, &planar}) {
    Grid g(-10, 10, 301);
    Profile p(g, pot->dim);
    p.pin_left = pot->minima_minus.project(pot->minima_plus.representative());
    p.pin_right = pot->minima_plus.representative();
    for (int i = 0; i < g.n; ++i) {
      double s = test::nagumo(g.node(i));
      for (int d = 0; d < pot->dim; ++d)
        p.node(i)[d] = s * p.pin_left[d] + (1.0 - s) * p.pin_right[d] + pert(rng);
    }
    p.apply_pins();
    const double c = 0.35;
    auto grad = energy_gradient(p, *pot, c);

    double worst = 0.0;
    for (int dir = 0; dir < 20; ++dir) {
      std::vector<double> phi(p.values.size());
      for (std::size_t i = static_cast<std::size_t>(pot->dim);
           i + pot->dim < phi.size(); ++i)
        phi[i] = pert(rng);
      const double h = 1e-6;
      Profile pp = p, pm = p;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        pp.values[i] += h * phi[i];
        pm.values[i] -= h * phi[i];
      }
      double fd = (energy(pp, *pot, c).total - energy(pm, *pot, c).total) / (2.0 * h);
      double gphi = dot(grad, phi);
      worst = std::max(worst, std::abs(fd - gphi) / (std::abs(gphi) + 1e-12));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("energy gradient: exact front is near stationary") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, 4001);
  Profile nag = test::nagumo_profile(g);
  auto grad = energy_gradient(nag, pot, kNagumoSpeed25);
  double worst = 0.0;
  for (int j = 1; j + 1 < g.n; ++j) {
    double wl = (std::exp(kNagumoSpeed25 * g.node(j)) - std::exp(kNagumoSpeed25 * g.node(j - 1))) /
                kNagumoSpeed25;
    double wr = (std::exp(kNagumoSpeed25 * g.node(j + 1)) - std::exp(kNagumoSpeed25 * g.node(j))) /
                kNagumoSpeed25;
    worst = std::max(worst, std::abs(grad[j]) / (0.5 * (wl + wr)));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("translation identity: flat-tail rolls rescale the energy") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, 4001);
  Profile pad = test::nagumo_profile_padded(g, 120);

  CHECK(translation_defect(pad, pot, kNagumoSpeed25, 0) == 0.0);
  for (double c : {0.8 * kNagumoSpeed25, kNagumoSpeed25, 1.2 * kNagumoSpeed25})
    for (int m : {1, 5, 10}) CHECK(translation_defect(pad, pot, c, m) <= 1e-8);
  for (int m : {-1, -5}) CHECK(translation_defect(pad, pot, kNagumoSpeed25, m) <= 1e-8);

  // Both sides vanish on the shallow rest state.
  Profile rest = constant_profile(g, 0.0);
  CHECK(translation_defect(rest, pot, 0.5, 7) == 0.0);

  // Tails that are not flat over the shifted cells are rejected.
  Profile raw = test::nagumo_profile(g);
  CHECK_THROWS_AS(translation_defect(raw, pot, kNagumoSpeed25, 10), Error);
}

TEST_CASE("quadrature: refinement ladder converges at second order") {
  PotentialModel pot = make_tilted_cubic(0.25);
  auto value = [&](int n) {
    return energy(test::nagumo_profile(Grid(-40, 40, n)), pot, kNagumoSpeed25).total;
  };
  double e1 = value(1001), e2 = value(2001), e4 = value(4001);
  double order = std::log2(std::abs(e1 - e2) / std::abs(e2 - e4));
  CHECK(order >= 1.9);
}

TEST_CASE("energy: guard rails") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid long_grid(-10, 3000, 301);
  CHECK_THROWS_WITH_AS(energy(constant_profile(long_grid, 0.0), pot, 1.0),
                       doctest::Contains("domain too long"), Error);
  CHECK_THROWS_AS(energy(constant_profile(Grid(-10, 10, 101), 0.0), pot, -1.0), Error);

  // NaN from the potential propagates as an invalid-profile error.
  PotentialModel bad = pot;
  bad.eval = [](std::span<const double>) { return std::nan(""); };
  CHECK_THROWS_WITH_AS(energy(constant_profile(Grid(-10, 10, 101), 0.5), bad, 0.5),
                       doctest::Contains("invalid profile"), Error);

  // Left weights below the floor are clamped and flagged.
  Grid deep(-760, 1.0, 301);
  WeightedEnergyReport rep = energy(constant_profile(deep, 0.0), pot, 1.0);
  CHECK(rep.weight_floor_hit);
}
