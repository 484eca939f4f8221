#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fmwave/audit.hpp"
#include "fmwave/speed.hpp"
#include "test_helpers.hpp"

using namespace fmwave;
using fmwave::test::kNagumoSpeed25;

TEST_CASE("transition time bounds: formula evaluation") {
  TransitionTimeBounds b = transition_time_bounds(0.35, 1.0, 0.5, -1.0 / 24.0, 0.01);
  double t1 = (2.0 * 0.35 + 2.0 * std::sqrt(0.35 * 0.35 + 1.0)) / 0.5;
  double t2 = std::log((1.0 / 24.0) / 0.01 + 1.0) / 0.35;
  CHECK(b.T1 == doctest::Approx(t1).epsilon(1e-14));
  CHECK(b.T1 == doctest::Approx(5.638).epsilon(1e-3));
  CHECK(b.T2 == doctest::Approx(t2).epsilon(1e-14));
  CHECK(b.Tss == doctest::Approx(t1 + t2).epsilon(1e-14));

  TransitionTimeBounds b2 = transition_time_bounds(0.353553, 1.0, 0.5, -1.0 / 24.0, 0.01);
  CHECK(b2.T2 == doctest::Approx(4.644).epsilon(2e-3));

  // Stiff-slope limit.
  CHECK(transition_time_bounds(0.35, 1.0, 1e12, -1.0, 0.01).T1 <= 1e-5);

  CHECK_THROWS_AS(transition_time_bounds(-0.1, 1, 1, -1, 0.1), Error);
  CHECK_THROWS_AS(transition_time_bounds(0.1, -1, 1, -1, 0.1), Error);
  CHECK_THROWS_AS(transition_time_bounds(0.1, 1, 0, -1, 0.1), Error);
  CHECK_THROWS_AS(transition_time_bounds(0.1, 1, 1, 1, 0.1), Error);
  CHECK_THROWS_AS(transition_time_bounds(0.1, 1, 1, -1, 0.0), Error);
}

TEST_CASE("bracket bound: scaling structure and dominance") {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditedConstants k;
  k.d_alpha0 = 1.0;
  CHECK(bracket_bound(pot, k) ==
        doctest::Approx(std::sqrt(2.0 / 24.0)).epsilon(1e-14));

  // Doubling the depth scales the bound by sqrt(2).
  PotentialModel doubled = make_scaled(pot, 2.0);
  CHECK(bracket_bound(doubled, k) ==
        doctest::Approx(std::sqrt(2.0) * bracket_bound(pot, k)).epsilon(1e-14));

  // Vanishing imbalance sends the bound to zero.
  AuditReport shallow = audit(make_tilted_cubic(0.499), 10000, 5);
  AuditReport ref = audit(pot, 10000, 5);
  CHECK(bracket_bound(make_tilted_cubic(0.499), shallow.constants) <
        0.2 * bracket_bound(pot, ref.constants));
  CHECK(bracket_bound(pot, ref.constants) >= kNagumoSpeed25);

  k.d_alpha0 = 0.0;
  CHECK_THROWS_AS(bracket_bound(pot, k), Error);
}

TEST_CASE("speed formula: exact front and degenerate input") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid fine(-40, 40, 16001);
  double formula = speed_formula(test::nagumo_profile(fine), pot);
  CHECK(std::abs(formula - kNagumoSpeed25) <= 1e-6);

  Profile rest(Grid(-10, 10, 101), 1);
  CHECK_THROWS_WITH_AS(speed_formula(rest, pot), doctest::Contains("degenerate"), Error);
}

TEST_CASE("decay fit: exact front matches the linearized rate") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, 4001);
  DecayFit fit = fit_decay_rate(test::nagumo_profile(g), pot, kNagumoSpeed25);
  const double exact = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(fit.fitted - exact) / exact <= 0.05);
  CHECK(fit.predicted == doctest::Approx(exact).epsilon(1e-3));
  CHECK(fit.fitted > 0.5 * kNagumoSpeed25);

  Profile rest(g, 1);
  CHECK_THROWS_AS(fit_decay_rate(rest, pot, kNagumoSpeed25), Error);
}

TEST_CASE("bisect speed: coarse run brackets the closed-form value") {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditReport rep = audit(pot, 20000, 7);
  Grid g(-40, 40, 2001);
  SpeedConfig sc;
  sc.c_tol = 1e-3;
  SpeedResult r = bisect_speed(pot, rep.constants, g, sc);
  CHECK(std::abs(r.c_star - kNagumoSpeed25) / kNagumoSpeed25 <= 0.01);
  CHECK(r.bracket_lo < r.c_star);
  CHECK(r.c_star <= r.bracket_hi);
  CHECK(r.bracket_hi - r.bracket_lo <= 1e-3);
  CHECK(std::abs(r.formula_speed - r.c_star) / r.c_star <= 1e-2);
  CHECK(r.decay_rate > r.c_star / 2.0);

  // The probes respect the predicate's one-sided structure.
  double T_eff = 10.0;
  for (const auto& [c, m] : r.probes) {
    double thr = 1e-6 * std::abs(pot.depth) * std::exp(-c * T_eff) / c;
    if (c <= r.bracket_lo) CHECK(m < -thr);
    if (c >= r.bracket_hi) CHECK(m >= -thr);
  }
}

TEST_CASE("bisect speed: balanced limit collapses toward zero") {
  PotentialModel pot = make_tilted_cubic(0.49);
  AuditReport rep = audit(pot, 20000, 7);
  // The shallow imbalance needs a long deep-side window before translation
  // can make the weighted energy negative at all.
  Grid g(-120, 40, 2001);
  SpeedConfig sc;
  sc.c_tol = 1e-3;
  SpeedResult r = bisect_speed(pot, rep.constants, g, sc);
  CHECK(r.c_star < 0.03);
}

TEST_CASE("bisect speed: energy-scale rescaling moves the speed linearly") {
  PotentialModel base = make_tilted_cubic(0.25);
  PotentialModel scaled = make_scaled(base, 4.0);
  AuditReport rep = audit(scaled, 20000, 7);
  Grid g(-20, 20, 2001);
  SpeedConfig sc;
  sc.c_tol = 1e-3;
  SpeedResult r = bisect_speed(scaled, rep.constants, g, sc);
  CHECK(std::abs(r.c_star - 2.0 * kNagumoSpeed25) / (2.0 * kNagumoSpeed25) <= 0.02);
}

TEST_CASE("energy scale tolerance: closed form") {
  PotentialModel pot = make_tilted_cubic(0.25);
  Grid g(-40, 40, 101);
  double tol = energy_scale_tolerance(pot, g, 0.35, 1e-6);
  double expect = 1e-6 * (1.0 / 24.0) * (std::exp(0.35 * 40.0) - std::exp(-0.35 * 40.0)) / 0.35;
  CHECK(tol == doctest::Approx(expect).epsilon(1e-14));
}
