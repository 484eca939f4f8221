#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fmwave/potential.hpp"
#include "test_helpers.hpp"

using namespace fmwave;

namespace {

// Central finite difference of the potential along each coordinate.
void fd_gradient(const PotentialModel& pot, std::span<const double> u, std::span<double> out,
                 double h = 1e-5) {
  std::vector<double> p(u.begin(), u.end());
  for (int d = 0; d < pot.dim; ++d) {
    double keep = p[d];
    p[d] = keep + h;
    double fp = pot.eval(p);
    p[d] = keep - h;
    double fm = pot.eval(p);
    p[d] = keep;
    out[d] = (fp - fm) / (2.0 * h);
  }
}

void check_gradient_consistency(const PotentialModel& pot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> g(pot.dim), fd(pot.dim);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    auto u = test::random_point(rng, pot.dim, 2.0 * pot.growth_radius);
    pot.grad(u, g);
    fd_gradient(pot, u, fd);
    for (int d = 0; d < pot.dim; ++d)
      worst = std::max(worst, std::abs(fd[d] - g[d]) / (1.0 + std::abs(g[d])));
  }
  CHECK(worst <= 1e-6);
}

void check_lower_bound(const PotentialModel& pot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 100000; ++i) {
    auto u = test::random_point(rng, pot.dim, 2.0 * pot.growth_radius);
    CHECK(pot.eval(u) >= pot.depth - 1e-9);
  }
}

void check_radial_growth(const PotentialModel& pot) {
  std::vector<double> g(pot.dim);
  for (double mult : {1.0, 2.0, 4.0}) {
    double r = pot.growth_radius * mult;
    int dirs = pot.dim == 1 ? 2 : 64;
    for (int i = 0; i < dirs; ++i) {
      std::vector<double> u(pot.dim, 0.0);
      if (pot.dim == 1) {
        u[0] = i == 0 ? r : -r;
      } else {
        double ang = 2.0 * M_PI * i / dirs;
        u[0] = r * std::cos(ang);
        u[1] = r * std::sin(ang);
      }
      pot.grad(u, g);
      CHECK(dot(g, u) >= pot.growth_coeff * r * r - 1e-9);
    }
  }
}

}  // namespace

TEST_CASE("tilted cubic: closed-form wells and depth") {
  PotentialModel pot = make_tilted_cubic(0.25);
  CHECK(pot.depth == doctest::Approx(-1.0 / 24.0).epsilon(1e-14));
  CHECK(pot.eval1(1.0) == doctest::Approx((2.0 * 0.25 - 1.0) / 12.0).epsilon(1e-14));
  CHECK(pot.eval1(0.0) == 0.0);
  CHECK(pot.grad1(0.5) == doctest::Approx(-0.0625).epsilon(1e-15));
  CHECK(pot.grad1(0.0) == 0.0);
  CHECK(pot.grad1(1.0) == 0.0);
}

TEST_CASE("tilted cubic: parameter domain") {
  CHECK_THROWS_AS(make_tilted_cubic(0.0), Error);
  CHECK_THROWS_AS(make_tilted_cubic(0.5), Error);
  CHECK_THROWS_AS(make_tilted_cubic(-0.1), Error);
  CHECK_THROWS_AS(make_tilted_cubic(0.7), Error);
  CHECK_NOTHROW(make_tilted_cubic(0.49));
}

TEST_CASE("built-in potentials: gradient matches finite differences") {
  check_gradient_consistency(make_tilted_cubic(0.25), 11);
  check_gradient_consistency(make_plateau_scalar(-2.0, -1.0, -0.05), 12);
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  check_gradient_consistency(make_planar_tilted({wm, 2}, {wp, 2}, 0.1), 13);
}

TEST_CASE("built-in potentials: global lower bound and radial growth") {
  for (const auto& pot :
       {make_tilted_cubic(0.25), make_plateau_scalar(-2.0, -1.0, -0.05)}) {
    check_lower_bound(pot, 21);
    check_radial_growth(pot);
  }
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  PotentialModel planar = make_planar_tilted({wm, 2}, {wp, 2}, 0.1);
  check_lower_bound(planar, 22);
  check_radial_growth(planar);
}

TEST_CASE("plateau: values on and around the flat stretch") {
  PotentialModel pot = make_plateau_scalar(-2.0, -1.0, -0.05);
  CHECK(pot.eval1(-1.5) == -0.05);
  CHECK(pot.grad1(-1.2) == 0.0);
  double u = -0.8;
  CHECK(pot.minima_minus.distance(std::span<const double>(&u, 1)) ==
        doctest::Approx(0.2).epsilon(1e-14));
  CHECK(pot.eval1(1.0) == 0.0);
  CHECK(pot.grad1(1.0) == 0.0);
  // Nondegenerate point well.
  CHECK(pot.hess_diag_bound(std::span<const double>(&u, 1)) >= 0.0);
  double one = 1.0;
  CHECK(pot.hess_diag_bound(std::span<const double>(&one, 1)) == doctest::Approx(0.5));
}

TEST_CASE("plateau: C3 joins have continuous low-order derivatives") {
  PotentialModel pot = make_plateau_scalar(-2.0, -1.0, -0.05);
  double ut = pot.params.at("barrier_pos");
  for (double joint : {-3.0, -2.0, -1.0, ut, 1.0}) {
    double eps = 1e-6;
    // First derivative continuity via the builder's own gradient.
    CHECK(std::abs(pot.grad1(joint + eps) - pot.grad1(joint - eps)) <= 1e-4);
    // Second derivative continuity via the curvature estimate.
    double l = pot.hess_diag_bound(std::span<const double>(&joint, 1));
    double r = l;
    double jm = joint - eps, jp = joint + eps;
    l = pot.hess_diag_bound(std::span<const double>(&jm, 1));
    r = pot.hess_diag_bound(std::span<const double>(&jp, 1));
    CHECK(std::abs(l - r) <= 1e-3);
  }
}

TEST_CASE("plateau: rejects bad geometry") {
  CHECK_THROWS_AS(make_plateau_scalar(-2.0, 0.5, -0.05), Error);   // plateau not left of well
  CHECK_THROWS_AS(make_plateau_scalar(-1.0, -2.0, -0.05), Error);  // empty interval
  CHECK_THROWS_AS(make_plateau_scalar(-2.0, -1.0, 0.05), Error);   // positive depth
  PlateauOptions opts;
  opts.barrier_height = -0.01;
  CHECK_THROWS_WITH_AS(make_plateau_scalar(-2.0, -1.0, -0.05, opts),
                       doctest::Contains("barrier"), Error);
}

TEST_CASE("planar tilted: well bookkeeping") {
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  CHECK_THROWS_WITH_AS(make_planar_tilted({wm, 2}, {wp, 2}, 0.0),
                       doctest::Contains("depth must be < 0"), Error);
  CHECK_THROWS_AS(make_planar_tilted({wm, 2}, {wp, 2}, 1.2), Error);  // well destroyed
  CHECK_THROWS_AS(make_planar_tilted({wm, 2}, {wm, 2}, 0.1), Error);  // identical wells

  PotentialModel pot = make_planar_tilted({wm, 2}, {wp, 2}, 0.1);
  CHECK(pot.depth < 0.0);
  CHECK(std::abs(pot.eval(pot.minima_plus.points[0])) <= 1e-12);
  CHECK(std::abs(pot.eval(pot.minima_minus.points[0]) - pot.depth) <= 1e-12);
  // The located minima stay near the nominal wells for a mild tilt.
  CHECK(dist2(pot.minima_minus.points[0], std::vector<double>{0.0, 0.0}) < 0.1);
  CHECK(dist2(pot.minima_plus.points[0], std::vector<double>{1.0, 0.0}) < 0.1);
}

TEST_CASE("minima sets: projection properties") {
  PotentialModel plateau = make_plateau_scalar(-2.0, -1.0, -0.05);
  const MinimaSet& seg = plateau.minima_minus;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    double x = u(rng);
    auto p = seg.project(std::span<const double>(&x, 1));
    CHECK(p[0] >= -2.0);
    CHECK(p[0] <= -1.0);
    double d = seg.distance(std::span<const double>(&x, 1));
    CHECK(std::abs(std::abs(x - p[0]) - d) <= 1e-10);
    // Projection restricted to the set is the identity.
    auto pp = seg.project(p);
    CHECK(pp[0] == p[0]);
  }
}

TEST_CASE("minima sets: coercivity bound with the fitted constant") {
  PotentialModel cubic = make_tilted_cubic(0.25);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (const auto* side : {&cubic.minima_minus, &cubic.minima_plus}) {
    double level = side == &cubic.minima_minus ? cubic.depth : 0.0;
    for (int i = 0; i < 5000; ++i) {
      double r = side->tube_radius * u01(rng);
      double x = side->points[0][0] + (u01(rng) < 0.5 ? -r : r);
      double gap = cubic.eval1(x) - level;
      CHECK(r * r <= side->coercivity_const * gap + 1e-12);
    }
  }
  // The plateau's flat edges make the ratio blow up as the distance shrinks;
  // the fitted constant is honest only away from the degenerate limit.
  PotentialModel plat = make_plateau_scalar(-2.0, -1.0, -0.05);
  for (int i = 0; i < 2000; ++i) {
    double r = plat.minima_minus.tube_radius * (0.05 + 0.95 * u01(rng));
    double x = (u01(rng) < 0.5 ? -2.0 - r : -1.0 + r);
    double gap = plat.eval1(x) - plat.depth;
    CHECK(r * r <= plat.minima_minus.coercivity_const * gap + 1e-12);
  }
}

TEST_CASE("tabulated potential: reproduces its source") {
  PotentialModel cubic = make_tilted_cubic(0.25);
  std::vector<double> us, ws, dws;
  for (int i = 0; i <= 400; ++i) {
    double x = -1.5 + 4.0 * i / 400.0;
    us.push_back(x);
    ws.push_back(cubic.eval1(x));
    dws.push_back(cubic.grad1(x));
  }
  PotentialModel tab = make_tabulated(us, ws, dws);
  CHECK(tab.depth == doctest::Approx(-1.0 / 24.0).epsilon(1e-4));
  CHECK(std::abs(tab.minima_minus.points[0][0] - 1.0) <= 1e-3);
  CHECK(std::abs(tab.minima_plus.points[0][0]) <= 1e-3);
  for (double x : {-0.5, 0.1, 0.3, 0.7, 1.2}) {
    CHECK(tab.eval1(x) == doctest::Approx(cubic.eval1(x)).epsilon(1e-4));
    CHECK(tab.grad1(x) == doctest::Approx(cubic.grad1(x)).epsilon(1e-4));
  }
  // Balanced tables are rejected.
  std::vector<double> wb;
  for (double x : us) wb.push_back((x * x - 0.25) * (x * x - 0.25));
  std::vector<double> dwb;
  for (double x : us) dwb.push_back(4.0 * x * (x * x - 0.25));
  CHECK_THROWS_AS(make_tabulated(us, wb, dwb), Error);
}

TEST_CASE("scaled potential: energy scale carries through") {
  PotentialModel base = make_tilted_cubic(0.25);
  PotentialModel scaled = make_scaled(base, 4.0);
  CHECK(scaled.depth == doctest::Approx(4.0 * base.depth).epsilon(1e-14));
  CHECK(scaled.eval1(0.6) == doctest::Approx(4.0 * base.eval1(0.6)).epsilon(1e-14));
  CHECK(scaled.grad1(0.6) == doctest::Approx(4.0 * base.grad1(0.6)).epsilon(1e-14));
  CHECK(scaled.growth_coeff == doctest::Approx(4.0 * base.growth_coeff));
  CHECK_THROWS_AS(make_scaled(base, -1.0), Error);
}
