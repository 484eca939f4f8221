#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fmwave/audit.hpp"
#include "test_helpers.hpp"

using namespace fmwave;

namespace {

AuditedConstants crafted_inputs(double c_minus) {
  AuditedConstants m;
  m.h0 = 0.01;
  m.h_minus = -0.02;
  m.sigma = 0.1;
  m.C_minus = c_minus;
  m.C_plus = 2.0;
  m.d_alpha0 = 0.5;
  m.R = 0.8;
  for (int i = 1; i <= 10; ++i) {
    double r = 0.05 * i;
    m.kappa_minus.emplace_back(r, -0.04 + 0.3 * r * r);
    m.kappa_plus.emplace_back(r, 0.3 * r * r);
  }
  return m;
}

}  // namespace

TEST_CASE("audit: tilted cubic passes every structural check") {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditReport rep = audit(pot, 20000, 7);
  CHECK(rep.passed);
  CHECK(!rep.inconclusive);
  for (const char* name :
       {"lower_bound", "minima_levels", "coercivity_minus", "coercivity_plus", "radial_growth",
        "barrier_positive", "level_split", "deep_level", "sublevel_convexity",
        "segment_monotonicity", "pointwise_monotonicity", "separation", "minima_bounded"}) {
    const AuditCheck* c = rep.find(name);
    REQUIRE(c != nullptr);
    CHECK(c->verdict == Verdict::Pass);
  }
  CHECK(rep.constants.h0 > 0.0);
  CHECK(rep.constants.h_minus > pot.depth);
  CHECK(rep.constants.h_minus < 0.0);
  CHECK(rep.constants.sigma > 0.0);
  CHECK(rep.constants.d_alpha0 > 0.0);
  CHECK(rep.constants.a_minus_singleton);
  // Singleton deep set settles the boundary-condition dichotomy.
  CHECK(rep.find("bc_singleton_or_gap")->verdict == Verdict::Pass);
}

TEST_CASE("audit: deterministic for a fixed seed") {
  PotentialModel pot = make_tilted_cubic(0.3);
  AuditReport a = audit(pot, 10000, 123);
  AuditReport b = audit(pot, 10000, 123);
  CHECK(a.constants.h0 == b.constants.h0);
  CHECK(a.constants.C_minus == b.constants.C_minus);
  CHECK(a.constants.sigma == b.constants.sigma);
  CHECK(a.constants.eps0_plus == b.constants.eps0_plus);
}

TEST_CASE("audit: input validation") {
  PotentialModel pot = make_tilted_cubic(0.25);
  CHECK_THROWS_AS(audit(pot, 5000, 1), Error);
}

TEST_CASE("audit: shell minima tables are monotone in the inner radius") {
  for (const auto& pot : {make_tilted_cubic(0.25), make_plateau_scalar(-2.0, -1.0, -0.05)}) {
    AuditReport rep = audit(pot, 10000, 9);
    for (const auto* tab : {&rep.constants.kappa_minus, &rep.constants.kappa_plus}) {
      REQUIRE(tab->size() == 10);
      for (std::size_t i = 1; i < tab->size(); ++i)
        CHECK((*tab)[i].second >= (*tab)[i - 1].second - 1e-12);
    }
  }
}

TEST_CASE("audit: flattened shallow well fails coercivity with a witness") {
  double wm[2] = {0, 0}, wp[2] = {1, 0};
  PotentialModel pot = make_planar_tilted({wm, 2}, {wp, 2}, 0.9);
  AuditReport rep = audit(pot, 20000, 11);
  const AuditCheck* c = rep.find("coercivity_plus");
  REQUIRE(c != nullptr);
  CHECK(c->verdict == Verdict::Fail);
  CHECK(!c->witness.empty());
  CHECK(!rep.passed);
}

TEST_CASE("audit: tube reaching past the zero crossing is detected") {
  PotentialModel pot = make_tilted_cubic(0.25);
  pot.minima_plus.tube_radius = 0.6;  // crosses into the negative valley
  AuditReport rep = audit(pot, 20000, 13);
  const AuditCheck* c = rep.find("coercivity_plus");
  REQUIRE(c != nullptr);
  CHECK(c->verdict == Verdict::Fail);
  CHECK(!c->witness.empty());
}

TEST_CASE("audit: inflated growth certificate is rejected") {
  PotentialModel pot = make_tilted_cubic(0.25);
  pot.growth_coeff = 10.0;
  AuditReport rep = audit(pot, 20000, 15);
  CHECK(rep.find("radial_growth")->verdict == Verdict::Fail);
}

TEST_CASE("derive_constants: closed-form combinations") {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditedConstants k = derive_constants(pot, crafted_inputs(1.0));
  // With C- = 1 the mixed constant is 2.5 and the contraction rate 1/3.5.
  CHECK(k.Cmix_minus == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(k.gamma_minus == doctest::Approx(1.0 / 3.5).epsilon(1e-14));
  CHECK(k.bc_eta == doctest::Approx(1.0 / 3.5).epsilon(1e-14));
  CHECK(k.bc_gap == doctest::Approx(0.5 * (0.5 / 3.5) * (0.5 / 3.5)).epsilon(1e-12));
  CHECK(k.alpha_ss == doctest::Approx(std::min(k.h0, k.eps0_plus)));
  CHECK(k.omega == k.sigma);
  CHECK(k.gamma_plus ==
        doctest::Approx(1.0 / (std::exp(1.0) * (k.C_plus + k.Cmix_plus))).epsilon(1e-14));
}

TEST_CASE("derive_constants: entry scales mirror under the level shift") {
  // With matching shell margins and radii the two entry scales coincide.
  PotentialModel pot = make_tilted_cubic(0.25);
  pot.minima_minus.tube_radius = 0.3;
  pot.minima_plus.tube_radius = 0.3;
  AuditedConstants m = crafted_inputs(2.0);
  m.kappa_minus.clear();
  m.kappa_plus.clear();
  for (int i = 1; i <= 10; ++i) {
    double r = 0.03 * i;
    m.kappa_plus.emplace_back(r, 0.2 * r * r);
    m.kappa_minus.emplace_back(r, pot.depth + 0.2 * r * r);
  }
  AuditedConstants k = derive_constants(pot, m);
  CHECK(k.eta0_minus == doctest::Approx(k.eta0_plus).epsilon(1e-12));
  CHECK(k.eps0_minus == doctest::Approx(k.eps0_plus).epsilon(1e-12));
}

TEST_CASE("derive_constants: missing inputs are named") {
  PotentialModel pot = make_tilted_cubic(0.25);
  AuditedConstants m = crafted_inputs(1.0);
  m.h0 = 0.0;
  CHECK_THROWS_WITH_AS(derive_constants(pot, m), doctest::Contains("h0"), Error);
  m = crafted_inputs(1.0);
  m.d_alpha0 = 0.0;
  CHECK_THROWS_WITH_AS(derive_constants(pot, m), doctest::Contains("d_alpha0"), Error);
  m = crafted_inputs(1.0);
  m.kappa_plus.clear();
  CHECK_THROWS_WITH_AS(derive_constants(pot, m), doctest::Contains("kappa_plus"), Error);
}

TEST_CASE("audit: plateau potential is certified with the expected caveats") {
  PotentialModel pot = make_plateau_scalar(-2.0, -1.0, -0.05);
  AuditReport rep = audit(pot, 20000, 19);
  // Structural failures would be genuine bugs; degenerate edges may at most
  // downgrade the coercivity fit to inconclusive.
  for (const auto& c : rep.checks) CHECK(c.verdict != Verdict::Fail);
  CHECK(!rep.constants.a_minus_singleton);
  const AuditCheck* bc = rep.find("bc_singleton_or_gap");
  REQUIRE(bc != nullptr);
  CHECK(bc->verdict == Verdict::Inconclusive);
  CHECK(rep.constants.h_minus > pot.depth);
  CHECK(rep.constants.sigma > 0.0);
}
