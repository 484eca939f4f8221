#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fmwave/audit.hpp"
#include "fmwave/geometry.hpp"
#include "fmwave/speed.hpp"
#include "test_helpers.hpp"

using namespace fmwave;
using fmwave::test::kNagumoSpeed25;

namespace {

// Independent root bracketing for W(x) = level on [a, b].
double bisect_level(const PotentialModel& pot, double level, double a, double b) {
  double fa = pot.eval1(a) - level;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (a + b);
    double fm = pot.eval1(m) - level;
    if ((fa < 0) == (fm < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("sublevel projection: scalar component located by root bracketing") {
  PotentialModel pot = make_tilted_cubic(0.25);
  const double h = -1.0 / 48.0;
  SublevelSet set(pot, h, Branch::Minus);

  double left_oracle = bisect_level(pot, h, 0.3, 1.0);
  CHECK(left_oracle > 0.25);
  CHECK(left_oracle < 1.0);
  double u = 0.5;
  auto p = project_sublevel(set, std::span<const double>(&u, 1));
  CHECK(p[0] == doctest::Approx(left_oracle).epsilon(1e-10));

  // Members project to themselves.
  double inside = 0.95;
  CHECK(project_sublevel(set, std::span<const double>(&inside, 1))[0] == inside);

  // Positive-branch component around the shallow well.
  SublevelSet plus(pot, 5e-4, Branch::Plus);
  double far = 0.3;
  auto q = project_sublevel(plus, std::span<const double>(&far, 1));
  CHECK(pot.eval1(q[0]) <= 5e-4 + 1e-12);
  CHECK(q[0] < 0.3);
  CHECK_THROWS_AS(SublevelSet(pot, -1e-3, Branch::Plus), Error);  // empty at negative levels
}

TEST_CASE("sublevel projection: nonexpansive and idempotent (scalar)") {
  PotentialModel cubic = make_tilted_cubic(0.25);
  PotentialModel plat = make_plateau_scalar(-2.0, -1.0, -0.05);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> span(-3.0, 3.0);
  for (const auto& [pot, level] :
       std::vector<std::pair<const PotentialModel*, double>>{{&cubic, -1.0 / 48.0},
                                                             {&plat, -0.045}}) {
    SublevelSet set(*pot, level, Branch::Minus);
    for (int i = 0; i < 10000; ++i) {
      double x = span(rng), y = span(rng);
      auto px = project_sublevel(set, std::span<const double>(&x, 1));
      auto py = project_sublevel(set, std::span<const double>(&y, 1));
      CHECK(std::abs(px[0] - py[0]) <= std::abs(x - y) + 1e-12);
      auto ppx = project_sublevel(set, px);
      CHECK(std::abs(ppx[0] - px[0]) <= 1e-12);
    }
  }
}

TEST_CASE("sublevel projection: planar component via KKT iterations") {
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  PotentialModel pot = make_planar_tilted({wm, 2}, {wp, 2}, 0.1);
  AuditReport rep = audit(pot, 10000, 3);
  SublevelSet set(pot, rep.constants.h_minus, Branch::Minus);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> span(-0.8, 0.8);
  for (int i = 0; i < 400; ++i) {
    std::vector<double> x{span(rng), span(rng)}, y{span(rng), span(rng)};
    auto px = project_sublevel(set, x);
    auto py = project_sublevel(set, y);
    CHECK(pot.eval(px) <= set.level() + 1e-9);
    CHECK(dist2(px, py) <= dist2(x, y) + 1e-8);
    auto ppx = project_sublevel(set, px);
    CHECK(dist2(ppx, px) <= 1e-8);
    // No feasible point on the segment toward the anchor is closer.
    if (pot.eval(x) > set.level()) {
      auto anchor = pot.minima_minus.project(x);
      double best = dist2(x, px);
      for (int s = 1; s < 50; ++s) {
        double t = s / 50.0;
        std::vector<double> z{x[0] + t * (anchor[0] - x[0]), x[1] + t * (anchor[1] - x[1])};
        if (pot.eval(z) <= set.level()) CHECK(best <= dist2(x, z) + 1e-8);
      }
    }
  }
}

TEST_CASE("truncation map: radial retraction") {
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  PotentialModel pot = make_planar_tilted({wm, 2}, {wp, 2}, 0.1);
  pot.growth_radius = 2.0;
  std::vector<double> u{3.0, 4.0};
  auto t = truncation_map(pot, u);
  CHECK(t[0] == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(1.6).epsilon(1e-15));

  std::vector<double> inside{0.3, -0.4};
  auto ti = truncation_map(pot, inside);
  CHECK(ti[0] == 0.3);
  CHECK(ti[1] == -0.4);
}

TEST_CASE("truncation map: nonexpansive and potential-nonincreasing") {
  PotentialModel cubic = make_tilted_cubic(0.25);
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  PotentialModel planar = make_planar_tilted({wm, 2}, {wp, 2}, 0.1);
  std::mt19937_64 rng(7);
  for (const PotentialModel* pot : {&cubic, &planar}) {
    std::uniform_real_distribution<double> shell(pot->growth_radius, 4.0 * pot->growth_radius);
    std::uniform_real_distribution<double> box(-4.0 * pot->growth_radius,
                                               4.0 * pot->growth_radius);
    for (int i = 0; i < 10000; ++i) {
      auto x = test::random_point(rng, pot->dim, 4.0 * pot->growth_radius);
      auto y = test::random_point(rng, pot->dim, 4.0 * pot->growth_radius);
      CHECK(dist2(truncation_map(*pot, x), truncation_map(*pot, y)) <=
            dist2(x, y) * (1.0 + 1e-15) + 1e-15);
      // Radial sample in the outer shell: retraction lowers the potential.
      double r = shell(rng);
      std::vector<double> p(pot->dim, 0.0);
      if (pot->dim == 1) {
        p[0] = (i % 2 ? -r : r);
      } else {
        double ang = box(rng);
        p[0] = r * std::cos(ang);
        p[1] = r * std::sin(ang);
      }
      CHECK(pot->eval(truncation_map(*pot, p)) <= pot->eval(p) + 1e-12);
    }
    // Identity on both minima sets.
    for (const MinimaSet* set : {&pot->minima_minus, &pot->minima_plus}) {
      auto rep = set->representative();
      auto t = truncation_map(*pot, rep);
      CHECK(dist2(t, rep) == 0.0);
    }
  }
}

TEST_CASE("transition markers: exact front and rest states") {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditReport rep = audit(pot, 20000, 17);
  Grid g(-40, 40, 4001);

  TransitionMarkers mk = transition_markers(test::nagumo_profile(g), pot, rep.constants);
  REQUIRE(mk.t1_minus.has_value());
  REQUIRE(mk.t2_minus.has_value());
  REQUIRE(mk.t_plus.has_value());
  CHECK(*mk.t1_minus <= *mk.t2_minus);
  CHECK(*mk.t2_minus < *mk.t_plus);
  TransitionTimeBounds tb =
      transition_time_bounds(kNagumoSpeed25, rep.constants.R, rep.constants.omega, pot.depth,
                             rep.constants.alpha_ss);
  CHECK(*mk.t_plus - *mk.t1_minus <= tb.Tss);

  Profile rest_plus(g, 1);
  rest_plus.pin_left = {0.0};
  rest_plus.pin_right = {0.0};
  TransitionMarkers mkp = transition_markers(rest_plus, pot, rep.constants);
  CHECK(!mkp.t1_minus.has_value());
  CHECK(!mkp.t2_minus.has_value());

  Profile rest_minus(g, 1);
  for (int i = 0; i < g.n; ++i) rest_minus.node(i)[0] = 1.0;
  rest_minus.pin_left = {1.0};
  rest_minus.pin_right = {1.0};
  TransitionMarkers mkm = transition_markers(rest_minus, pot, rep.constants);
  CHECK(!mkm.t_plus.has_value());
}
