#include "fmwave/audit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fmwave/geometry.hpp"

namespace fmwave {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const AuditCheck* AuditReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double AuditedConstants::kappa_at(bool minus_side, double r, double base_level) const {
  const auto& tab = minus_side ? kappa_minus : kappa_plus;
  if (tab.empty()) throw Error("kappa table is empty");
  if (r <= tab.front().first) {
    double scale = (r / tab.front().first) * (r / tab.front().first);
    return base_level + (tab.front().second - base_level) * scale;
  }
  if (r >= tab.back().first) return tab.back().second;
  for (std::size_t i = 1; i < tab.size(); ++i) {
    if (r <= tab[i].first) {
      double t = (r - tab[i - 1].first) / (tab[i].first - tab[i - 1].first);
      return tab[i - 1].second + t * (tab[i].second - tab[i - 1].second);
    }
  }
  return tab.back().second;
}

namespace {

struct Sampler {
  const PotentialModel& pot;
  std::mt19937_64& rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  double u01() { return unit(rng); }
  double uni(double lo, double hi) { return lo + (hi - lo) * u01(); }

  std::vector<double> box_point(std::span<const double> center, double radius) {
    std::vector<double> p(pot.dim);
    for (int d = 0; d < pot.dim; ++d) p[d] = center[d] + radius * (2.0 * u01() - 1.0);
    return p;
  }

  // Point at prescribed distance from a minima set.
  std::vector<double> tube_point(const MinimaSet& set, double dist) {
    if (pot.dim == 1) {
      double lo = set.kind == MinimaSet::Kind::Segment1D ? set.seg_lo : set.points[0][0];
      double hi = set.kind == MinimaSet::Kind::Segment1D ? set.seg_hi : set.points[0][0];
      return {u01() < 0.5 ? lo - dist : hi + dist};
    }
    double ang = 2.0 * M_PI * u01();
    const auto& p = set.points[0];
    return {p[0] + dist * std::cos(ang), p[1] + dist * std::sin(ang)};
  }
};

struct Regions {
  // k = 1: exact component intervals; k >= 2: sampling boxes.
  bool one_d = false;
  double minus_lo = 0, minus_hi = 0;  // minima set hull
  double plus_lo = 0, plus_hi = 0;
};

Regions region_hulls(const PotentialModel& pot) {
  Regions r;
  r.one_d = pot.dim == 1;
  if (r.one_d) {
    const auto& ms = pot.minima_minus;
    const auto& ps = pot.minima_plus;
    r.minus_lo = ms.kind == MinimaSet::Kind::Segment1D ? ms.seg_lo : ms.points[0][0];
    r.minus_hi = ms.kind == MinimaSet::Kind::Segment1D ? ms.seg_hi : ms.points[0][0];
    r.plus_lo = ps.kind == MinimaSet::Kind::Segment1D ? ps.seg_lo : ps.points[0][0];
    r.plus_hi = ps.kind == MinimaSet::Kind::Segment1D ? ps.seg_hi : ps.points[0][0];
  }
  return r;
}

bool intervals_disjoint(double a_lo, double a_hi, double b_lo, double b_hi) {
  return std::max(a_lo, b_lo) > std::min(a_hi, b_hi);
}

// Membership in the deep branch of {W <= h} via the nearest-set heuristic.
bool minus_branch_member(const PotentialModel& pot, std::span<const double> u, double h) {
  if (pot.eval(u) > h) return false;
  return pot.minima_minus.distance(u) <= pot.minima_plus.distance(u);
}

double barrier_max_on_segment(const PotentialModel& pot, std::span<const double> a,
                              std::span<const double> b, int probes = 4000) {
  std::vector<double> x(pot.dim);
  double best = -1e300;
  for (int i = 0; i <= probes; ++i) {
    double t = static_cast<double>(i) / probes;
    for (int d = 0; d < pot.dim; ++d) x[d] = a[d] + t * (b[d] - a[d]);
    best = std::max(best, pot.eval(x));
  }
  return best;
}

}  // namespace

AuditReport audit(const PotentialModel& pot, int samples, std::uint64_t seed) {
  if (samples < 10000) throw Error("audit needs at least 10^4 samples");
  AuditReport rep;
  rep.samples = samples;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  Sampler smp{pot, rng};
  const int k = pot.dim;
  AuditedConstants kc;

  auto push = [&rep](AuditCheck c) { rep.checks.push_back(std::move(c)); };

  // -- global lower bound --------------------------------------------------
  {
    AuditCheck c;
    c.name = "lower_bound";
    std::vector<double> center(k, 0.0);
    double worst = 1e300;
    std::vector<double> wp;
    for (int i = 0; i < samples; ++i) {
      auto p = smp.box_point(center, 2.0 * pot.growth_radius);
      double margin = pot.eval(p) - pot.depth;
      if (margin < worst) {
        worst = margin;
        wp = p;
      }
    }
    c.measured = worst;
    c.witness = wp;
    c.verdict = worst >= -1e-9 ? Verdict::Pass : Verdict::Fail;
    push(std::move(c));
  }

  // -- minima level values ---------------------------------------------------
  {
    AuditCheck c;
    c.name = "minima_levels";
    double worst = 0.0;
    std::vector<double> wp;
    auto probe_set = [&](const MinimaSet& set, double level) {
      if (set.kind == MinimaSet::Kind::Segment1D) {
        for (int i = 0; i <= 100; ++i) {
          std::vector<double> p{set.seg_lo + (set.seg_hi - set.seg_lo) * i / 100.0};
          double err = std::abs(pot.eval(p) - level);
          if (err > worst) {
            worst = err;
            wp = p;
          }
        }
      } else {
        for (const auto& p : set.points) {
          double err = std::abs(pot.eval(p) - level);
          if (err > worst) {
            worst = err;
            wp = p;
          }
        }
      }
    };
    probe_set(pot.minima_minus, pot.depth);
    probe_set(pot.minima_plus, 0.0);
    c.measured = worst;
    c.witness = wp;
    c.verdict = worst <= 1e-12 ? Verdict::Pass : Verdict::Fail;
    push(std::move(c));
  }

  // -- coercivity around each minima set ------------------------------------
  auto coercivity_check = [&](const MinimaSet& set, double level, const char* name,
                              double& fitted_out) {
    AuditCheck c;
    c.name = name;
    auto fit = [&](int count, bool& negative_gap, std::vector<double>& neg_witness) {
      double cmax = 0.0;
      for (int i = 0; i < count; ++i) {
        double r = set.tube_radius * (1.0 - smp.u01());
        auto p = smp.tube_point(set, r);
        double gap = pot.eval(p) - level;
        if (gap < -1e-10) {
          negative_gap = true;
          neg_witness = p;
          return cmax;
        }
        if (gap > 1e-300 && r > 1e-12) cmax = std::max(cmax, r * r / gap);
      }
      return cmax;
    };
    bool neg = false;
    std::vector<double> negw;
    double c1 = fit(samples / 2, neg, negw);
    if (neg) {
      c.verdict = Verdict::Fail;
      c.witness = negw;
      c.note = "potential dips below its minima level inside the tube";
      push(std::move(c));
      fitted_out = 0.0;
      return;
    }
    double c2 = std::max(c1, fit(samples, neg, negw));
    if (neg) {
      c.verdict = Verdict::Fail;
      c.witness = negw;
      c.note = "potential dips below its minima level inside the tube";
      push(std::move(c));
      fitted_out = 0.0;
      return;
    }
    double cfit = c2;
    double rel = (c2 - c1) / std::max(c1, 1e-300);
    c.measured = cfit;
    if (rel <= 0.10) {
      c.verdict = Verdict::Pass;
    } else {
      c.verdict = Verdict::Inconclusive;
      std::ostringstream os;
      os << "fitted constant unstable under sample doubling (" << c1 << " -> " << c2 << ")";
      c.note = os.str();
    }
    fitted_out = cfit;
    push(std::move(c));
  };
  coercivity_check(pot.minima_minus, pot.depth, "coercivity_minus", kc.C_minus);
  coercivity_check(pot.minima_plus, 0.0, "coercivity_plus", kc.C_plus);

  // -- radial growth ---------------------------------------------------------
  {
    AuditCheck c;
    c.name = "radial_growth";
    double worst = 1e300;
    std::vector<double> wp, g(k);
    for (double mult : {1.0, 2.0, 4.0}) {
      double radius = pot.growth_radius * mult;
      int dirs = k == 1 ? 2 : 256;
      for (int i = 0; i < dirs; ++i) {
        std::vector<double> u(k, 0.0);
        if (k == 1) {
          u[0] = i == 0 ? radius : -radius;
        } else {
          double ang = 2.0 * M_PI * (i + 0.5) / dirs;
          u[0] = radius * std::cos(ang);
          u[1] = radius * std::sin(ang);
        }
        pot.grad(u, g);
        double ratio = dot(g, u) / (radius * radius);
        if (ratio < worst) {
          worst = ratio;
          wp = u;
        }
      }
    }
    c.measured = worst;
    c.witness = wp;
    c.verdict = worst >= pot.growth_coeff - 1e-9 ? Verdict::Pass : Verdict::Fail;
    push(std::move(c));
  }

  // -- level split and deep level --------------------------------------------
  Regions hull = region_hulls(pot);
  std::vector<double> minus_rep = pot.minima_minus.representative();
  std::vector<double> plus_rep = pot.minima_plus.representative();
  std::vector<double> facing = pot.minima_minus.project(plus_rep);
  double barrier = barrier_max_on_segment(pot, facing, plus_rep);
  {
    AuditCheck c;
    c.name = "barrier_positive";
    c.measured = barrier;
    c.verdict = barrier > 0.0 ? Verdict::Pass : Verdict::Fail;
    push(std::move(c));
    if (barrier <= 0.0) {
      rep.passed = false;
      rep.inconclusive = true;
      rep.constants = kc;
      return rep;
    }
  }

  const double rho_m = pot.minima_minus.tube_radius;
  const double rho_p = pot.minima_plus.tube_radius;

  auto plus_split_feasible = [&](double h) -> bool {
    if (h >= barrier) return false;
    if (hull.one_d) {
      SublevelSet plus_set(pot, h, Branch::Plus);
      if (plus_set.lo() < hull.plus_lo - 0.5 * rho_p || plus_set.hi() > hull.plus_hi + 0.5 * rho_p)
        return false;
      SublevelSet minus_set(pot, h, Branch::Minus);
      return intervals_disjoint(minus_set.lo(), minus_set.hi(), plus_set.lo(), plus_set.hi());
    }
    // Sampled feasibility: every shallow-branch sublevel point near the plus
    // set must stay inside the half tube.
    for (int i = 0; i < samples / 8; ++i) {
      auto p = smp.box_point(plus_rep, 1.5 * rho_p);
      if (pot.eval(p) > h) continue;
      if (pot.minima_plus.distance(p) > pot.minima_minus.distance(p)) continue;
      if (pot.minima_plus.distance(p) > 0.5 * rho_p) return false;
    }
    return true;
  };

  {
    AuditCheck c;
    c.name = "level_split";
    double lo = 0.0, hi = barrier;
    if (!plus_split_feasible(barrier * 1e-6)) {
      c.verdict = Verdict::Inconclusive;
      c.note = "no positive split level found";
      push(std::move(c));
    } else {
      for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        if (plus_split_feasible(mid))
          lo = mid;
        else
          hi = mid;
      }
      kc.h0 = 0.9 * lo;
      c.measured = kc.h0;
      c.verdict = kc.h0 > 0.0 ? Verdict::Pass : Verdict::Fail;
      push(std::move(c));
    }
  }

  auto deep_level_feasible = [&](double h) -> bool {
    if (hull.one_d) {
      SublevelSet ms(pot, h, Branch::Minus);
      return ms.lo() >= hull.minus_lo - 0.5 * rho_m && ms.hi() <= hull.minus_hi + 0.5 * rho_m;
    }
    for (int i = 0; i < samples / 8; ++i) {
      auto p = smp.box_point(minus_rep, 1.5 * rho_m);
      if (pot.eval(p) > h) continue;
      if (pot.minima_minus.distance(p) > pot.minima_plus.distance(p)) continue;
      if (pot.minima_minus.distance(p) > 0.5 * rho_m) return false;
    }
    return true;
  };

  {
    AuditCheck c;
    c.name = "deep_level";
    double lo = pot.depth, hi = 0.0;
    if (!deep_level_feasible(pot.depth + 1e-6 * std::abs(pot.depth))) {
      c.verdict = Verdict::Inconclusive;
      c.note = "no valid deep level found";
      push(std::move(c));
    } else {
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (deep_level_feasible(mid))
          lo = mid;
        else
          hi = mid;
      }
      kc.h_minus = pot.depth + 0.75 * (lo - pot.depth);
      c.measured = kc.h_minus;
      c.verdict = (kc.h_minus > pot.depth && kc.h_minus < 0.0) ? Verdict::Pass : Verdict::Fail;
      push(std::move(c));
    }
  }

  const bool levels_ok = kc.h0 > 0.0 && kc.h_minus > pot.depth && kc.h_minus < 0.0;

  // Draws a point of the deep sublevel component at level h.
  auto sample_minus_component = [&](double h) -> std::vector<double> {
    if (hull.one_d) {
      SublevelSet ms(pot, h, Branch::Minus);
      return {smp.uni(ms.lo(), ms.hi())};
    }
    for (int tries = 0; tries < 4000; ++tries) {
      auto p = smp.box_point(minus_rep, 0.75 * dist2(minus_rep, plus_rep));
      if (minus_branch_member(pot, p, h)) return p;
    }
    throw Error("failed to sample the deep sublevel component");
  };

  // -- convexity of the deep sublevel components ----------------------------
  if (levels_ok) {
    AuditCheck c;
    c.name = "sublevel_convexity";
    c.verdict = Verdict::Pass;
    std::vector<double> levels{0.5 * (pot.depth + kc.h_minus), kc.h_minus, 0.5 * kc.h_minus,
                               0.5 * kc.h0, kc.h0};
    std::vector<double> mid(k);
    for (double h : levels) {
      for (int i = 0; i < samples / 16 && c.verdict == Verdict::Pass; ++i) {
        auto a = sample_minus_component(h);
        auto b = sample_minus_component(h);
        for (int d = 0; d < k; ++d) mid[d] = 0.5 * (a[d] + b[d]);
        double wm = pot.eval(mid);
        if (wm > h + 1e-8) {
          c.verdict = Verdict::Fail;
          c.witness = mid;
          c.measured = wm - h;
          std::ostringstream os;
          os << "midpoint left the sublevel set at level " << h;
          c.note = os.str();
        }
      }
    }
    push(std::move(c));
  }

  // -- uniform segment monotonicity (sigma) ----------------------------------
  if (levels_ok) {
    AuditCheck c;
    c.name = "segment_monotonicity";
    double sigma = 1e300;
    std::vector<double> wp;
    double gate = 0.5 * (pot.depth + kc.h_minus);
    std::vector<double> x(k), g(k), dirv(k);
    for (int i = 0; i < samples / 8; ++i) {
      auto u = sample_minus_component(kc.h0);
      std::vector<double> amin;
      if (pot.minima_minus.kind == MinimaSet::Kind::Segment1D)
        amin = std::vector<double>{smp.uni(pot.minima_minus.seg_lo, pot.minima_minus.seg_hi)};
      else
        amin = pot.minima_minus.points[0];
      double seg = 0.0;
      for (int d = 0; d < k; ++d) {
        dirv[d] = u[d] - amin[d];
        seg += dirv[d] * dirv[d];
      }
      if (seg < 1e-20) continue;
      for (int j = 1; j <= 48; ++j) {
        double lam = 1.35 * j / 48.0;
        for (int d = 0; d < k; ++d) x[d] = amin[d] + lam * dirv[d];
        if (!minus_branch_member(pot, x, kc.h0)) break;
        if (pot.eval(x) <= gate) continue;
        pot.grad(x, g);
        double slope = dot(g, dirv);
        if (slope < sigma) {
          sigma = slope;
          wp = x;
        }
      }
    }
    if (sigma == 1e300) {
      c.verdict = Verdict::Inconclusive;
      c.note = "no admissible segment points sampled";
    } else {
      kc.sigma = sigma;
      c.measured = sigma;
      c.witness = wp;
      c.verdict = sigma > 0.0 ? Verdict::Pass : Verdict::Fail;
    }
    push(std::move(c));
  }

  // -- pointwise monotonicity near the set (sigma(h) map) --------------------
  if (levels_ok) {
    AuditCheck c;
    c.name = "pointwise_monotonicity";
    c.verdict = Verdict::Pass;
    std::vector<double> x(k), g(k), dirv(k), proj(k);
    for (int ih = 1; ih <= 10 && c.verdict == Verdict::Pass; ++ih) {
      double h = pot.depth + (kc.h_minus - pot.depth) * ih / 10.0;
      double smin = 1e300;
      for (int i = 0; i < samples / 32; ++i) {
        auto u = sample_minus_component(kc.h_minus);
        if (pot.eval(u) < h) continue;
        pot.minima_minus.project(u, proj);
        double seg = 0.0;
        for (int d = 0; d < k; ++d) {
          dirv[d] = u[d] - proj[d];
          seg += dirv[d] * dirv[d];
        }
        if (seg < 1e-20) continue;
        for (int j = -2; j <= 2; ++j) {
          double theta = 1.0 + 1e-3 * j / 2.0;
          for (int d = 0; d < k; ++d) x[d] = proj[d] + theta * dirv[d];
          pot.grad(x, g);
          double slope = dot(g, dirv);
          if (slope < smin) {
            smin = slope;
            if (slope <= 0.0) c.witness = x;
          }
        }
      }
      if (smin == 1e300) continue;  // level slice had no samples
      kc.sigma_of_h.emplace_back(h, smin);
      if (smin <= 0.0) {
        c.verdict = Verdict::Fail;
        c.measured = smin;
      }
    }
    push(std::move(c));
  }

  // -- shell minima tables ----------------------------------------------------
  auto kappa_table = [&](const MinimaSet& set, std::vector<std::pair<double, double>>& out) {
    static const double grid[10] = {0.01, 0.025, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 1.0};
    for (double frac : grid) {
      double r = frac * set.tube_radius;
      double kmin = 1e300;
      int rings = 48;
      for (int ir = 0; ir < rings; ++ir) {
        double rr = r + (set.tube_radius - r) * ir / std::max(rings - 1, 1);
        if (k == 1) {
          for (double side : {-1.0, 1.0}) {
            auto base = set.kind == MinimaSet::Kind::Segment1D
                            ? std::vector<double>{side < 0 ? set.seg_lo : set.seg_hi}
                            : set.points[0];
            std::vector<double> p{base[0] + side * rr};
            kmin = std::min(kmin, pot.eval(p));
          }
        } else {
          for (int ia = 0; ia < 48; ++ia) {
            double ang = 2.0 * M_PI * ia / 48.0;
            std::vector<double> p{set.points[0][0] + rr * std::cos(ang),
                                  set.points[0][1] + rr * std::sin(ang)};
            kmin = std::min(kmin, pot.eval(p));
          }
        }
      }
      out.emplace_back(r, kmin);
    }
  };
  kappa_table(pot.minima_minus, kc.kappa_minus);
  kappa_table(pot.minima_plus, kc.kappa_plus);

  // -- separation distances and the sublevel reach ---------------------------
  if (levels_ok) {
    if (hull.one_d) {
      SublevelSet ms(pot, kc.h0, Branch::Minus);
      double minus_tube_lo = hull.minus_lo - 0.5 * rho_m;
      double minus_tube_hi = hull.minus_hi + 0.5 * rho_m;
      double plus_tube_lo = hull.plus_lo - 0.5 * rho_p;
      double plus_tube_hi = hull.plus_hi + 0.5 * rho_p;
      kc.d0 = std::max(0.0, std::max(plus_tube_lo - minus_tube_hi, minus_tube_lo - plus_tube_hi));
      kc.d_alpha0 =
          std::max(0.0, std::max(plus_tube_lo - ms.hi(), ms.lo() - plus_tube_hi));
      kc.R = 1.1 * std::max(std::abs(ms.lo() - hull.minus_lo), std::abs(ms.hi() - hull.minus_hi));
    } else {
      double d0 = dist2(minus_rep, plus_rep) - 0.5 * (rho_m + rho_p);
      kc.d0 = std::max(0.0, d0);
      double dmin = 1e300, reach = 0.0;
      for (int i = 0; i < samples / 4; ++i) {
        auto p = sample_minus_component(kc.h0);
        dmin = std::min(dmin, pot.minima_plus.distance(p) - 0.5 * rho_p);
        reach = std::max(reach, pot.minima_minus.distance(p));
      }
      kc.d_alpha0 = std::max(0.0, dmin);
      kc.R = 1.1 * reach;
    }
    AuditCheck c;
    c.name = "separation";
    c.measured = kc.d_alpha0;
    c.verdict = kc.d_alpha0 > 0.0 ? Verdict::Pass : Verdict::Fail;
    push(std::move(c));
  }

  // -- bounded minima sets -----------------------------------------------------
  {
    AuditCheck c;
    c.name = "minima_bounded";
    c.verdict = Verdict::Pass;  // all representable kinds are bounded
    push(std::move(c));
  }

  const bool can_derive = kc.h0 > 0.0 && kc.h_minus > pot.depth && kc.h_minus < 0.0 &&
                          kc.C_minus > 0.0 && kc.C_plus > 0.0 && kc.d_alpha0 > 0.0 &&
                          !kc.kappa_minus.empty() && !kc.kappa_plus.empty();
  rep.constants = can_derive ? derive_constants(pot, kc) : kc;

  // -- boundary-condition inequality (reported, never gating) ------------------
  {
    AuditCheck c;
    c.name = "bc_singleton_or_gap";
    c.measured = rep.constants.bc_gap;
    if (!can_derive) {
      c.verdict = Verdict::Inconclusive;
      c.note = "derived constants unavailable";
    } else if (rep.constants.a_minus_singleton || rep.constants.bc_item2_ok) {
      c.verdict = Verdict::Pass;
    } else {
      c.verdict = Verdict::Inconclusive;
      c.note = "convergence at -infinity not certified; left-tail distance is reported only";
    }
    push(std::move(c));
  }

  rep.passed = true;
  rep.inconclusive = false;
  for (const auto& c : rep.checks) {
    if (c.name == "bc_singleton_or_gap") continue;
    if (c.verdict == Verdict::Fail) rep.passed = false;
    if (c.verdict == Verdict::Inconclusive) rep.inconclusive = true;
  }
  return rep;
}

AuditedConstants derive_constants(const PotentialModel& pot, AuditedConstants kc) {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw Error(std::string("derive_constants: missing audited input '") + field + "'");
  };
  require(std::isfinite(kc.h0) && kc.h0 > 0.0, "h0");
  require(std::isfinite(kc.h_minus) && kc.h_minus > pot.depth && kc.h_minus < 0.0, "h_minus");
  require(kc.C_minus > 0.0, "C_minus");
  require(kc.C_plus > 0.0, "C_plus");
  require(!kc.kappa_minus.empty(), "kappa_minus");
  require(!kc.kappa_plus.empty(), "kappa_plus");
  require(kc.d_alpha0 > 0.0, "d_alpha0");

  const double rho_m = pot.minima_minus.tube_radius;
  const double rho_p = pot.minima_plus.tube_radius;
  const double a = pot.depth;

  kc.Cmix_minus = 0.5 * kc.C_minus * kc.C_minus *
                  (kc.C_minus * kc.C_minus + (kc.C_minus + 1.0) * (kc.C_minus + 1.0));
  kc.Cmix_plus = 0.5 * kc.C_plus * kc.C_plus *
                 (kc.C_plus * kc.C_plus + (kc.C_plus + 1.0) * (kc.C_plus + 1.0));
  kc.gamma_minus = 1.0 / (kc.C_minus + kc.Cmix_minus);
  kc.gamma_plus = 1.0 / (std::exp(1.0) * (kc.C_plus + kc.Cmix_plus));

  double km_quarter = kc.kappa_at(true, rho_m / 4.0, a);
  double kp_quarter = kc.kappa_at(false, rho_p / 4.0, 0.0);
  kc.eta0_minus = std::min(
      std::sqrt(std::exp(-1.0) * (rho_m / 4.0) * std::sqrt(2.0 * (km_quarter - a))), rho_m / 4.0);
  kc.eta0_plus = std::min(
      std::sqrt(std::exp(-1.0) * (rho_p / 4.0) * std::sqrt(2.0 * kp_quarter)), rho_p / 4.0);

  double rhat_m = rho_m / (kc.C_minus + 1.0);
  double rhat_p = rho_p / (kc.C_plus + 1.0);
  auto beta_minus = [&](double r) { return kc.kappa_at(true, r, a) - a; };
  auto beta_plus = [&](double r) { return kc.kappa_at(false, r, 0.0); };

  kc.eps0_minus = std::min(std::min(kc.eta0_minus * kc.eta0_minus / 4.0,
                                    beta_minus(kc.eta0_minus)),
                           std::min(beta_minus(rhat_m), beta_minus(kc.eta0_minus))) /
                  (kc.C_minus * kc.C_minus * (kc.C_minus + 1.0));
  kc.eps0_plus = std::min(std::min(kc.eta0_plus * kc.eta0_plus / 4.0,
                                   beta_plus(kc.eta0_plus)),
                          std::min(beta_plus(rhat_p), beta_plus(kc.eta0_plus))) /
                 (kc.C_plus * kc.C_plus * (kc.C_plus + 1.0));

  kc.omega = kc.sigma;
  kc.alpha_ss = std::min(kc.h0, kc.eps0_plus);

  kc.a_minus_singleton = pot.minima_minus.kind == MinimaSet::Kind::Point ||
                         (pot.minima_minus.kind == MinimaSet::Kind::PointList &&
                          pot.minima_minus.points.size() == 1);
  kc.bc_eta = 1.0 / (kc.Cmix_minus + kc.C_minus);
  kc.bc_gap = 0.5 * (kc.d_alpha0 * kc.bc_eta) * (kc.d_alpha0 * kc.bc_eta);
  kc.bc_item2_ok = -a < kc.bc_gap;
  return kc;
}

}  // namespace fmwave
