#include "fmwave/shooting.hpp"

#include <cmath>

namespace fmwave {

namespace {

struct Shot {
  const PotentialModel& pot;
  double c;

  // Backward-time dynamics of the profile system (u, u').
  void rhs(double u, double v, double& du, double& dv) const {
    du = -v;
    dv = c * v - pot.grad1(u);
  }

  void rk4(double& u, double& v, double h) const {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    rhs(u, v, k1u, k1v);
    rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
    rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
    rhs(u + h * k3u, v + h * k3v, k4u, k4v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
};

double second_derivative(const PotentialModel& pot, double x) {
  const double h = 1e-6;
  return (pot.grad1(x + h) - pot.grad1(x - h)) / (2.0 * h);
}

}  // namespace

ShotFate classify_shot(const PotentialModel& potential, const ShootingConfig& config, double c) {
  if (potential.dim != 1) throw Error("shooting oracle supports k = 1 only");
  const double a_plus = potential.minima_plus.points.at(0).at(0);
  const double a_minus = potential.minima_minus.project(std::vector<double>{a_plus})[0];
  const double wpp = second_derivative(potential, a_plus);
  if (!(wpp > 0.0)) throw Error("shooting needs a hyperbolic rest point at the shallow well");
  if (!(config.start_offset > 1e-10 && config.start_offset < 0.5 * potential.minima_plus.tube_radius))
    throw Error("start offset must lie in (1e-10, half tube radius)");

  const double sgn = a_minus > a_plus ? 1.0 : -1.0;
  const double mu_stable = 0.5 * (-c - std::sqrt(c * c + 4.0 * wpp));
  const double sep = std::abs(a_minus - a_plus);
  const double enter_r = potential.minima_minus.tube_radius / 4.0;
  const double escape_r = 2.0 * potential.growth_radius;

  Shot shot{potential, c};
  double u = a_plus + sgn * config.start_offset;
  double v = mu_stable * sgn * config.start_offset;

  const int steps = static_cast<int>(config.span_max / config.dt_ode);
  bool was_inside = false;
  for (int i = 0; i < steps; ++i) {
    shot.rk4(u, v, config.dt_ode);
    double xi = sgn * (u - a_plus);          // progress toward the deep well
    double fwd = -v * sgn;                   // backward-time progress rate
    if (std::abs(u) > escape_r || xi > sep + 0.5 * potential.minima_minus.tube_radius)
      return ShotFate::Overshoot;
    bool inside = std::abs(u - a_minus) <= enter_r;
    was_inside = was_inside || inside;
    if (!inside && fwd <= 0.0) {
      if (xi < sep - enter_r) return ShotFate::Undershoot;
    }
    if (was_inside && !inside) {
      // Left the deep tube again: direction of exit decides the class.
      return xi > sep ? ShotFate::Overshoot : ShotFate::Undershoot;
    }
  }
  if (was_inside) return ShotFate::Entered;
  return ShotFate::Undershoot;
}

std::pair<double, double> integrate_profile_ode(const PotentialModel& potential,
                                                const ShootingConfig& config, double c,
                                                double span) {
  if (potential.dim != 1) throw Error("shooting oracle supports k = 1 only");
  const double a_plus = potential.minima_plus.points.at(0).at(0);
  const double a_minus = potential.minima_minus.project(std::vector<double>{a_plus})[0];
  const double wpp = second_derivative(potential, a_plus);
  const double sgn = a_minus > a_plus ? 1.0 : -1.0;
  const double mu_stable = 0.5 * (-c - std::sqrt(c * c + 4.0 * wpp));
  Shot shot{potential, c};
  double u = a_plus + sgn * config.start_offset;
  double v = mu_stable * sgn * config.start_offset;
  const int steps = static_cast<int>(std::round(span / config.dt_ode));
  for (int i = 0; i < steps; ++i) shot.rk4(u, v, config.dt_ode);
  return {u, v};
}

double shoot_speed(const PotentialModel& potential, const ShootingConfig& config, double c_tol,
                   double c_lo, double c_hi) {
  if (!(c_tol > 0.0 && c_lo > 0.0 && c_hi > c_lo)) throw Error("shooting bracket is invalid");
  auto over = [&](double c) { return classify_shot(potential, config, c) == ShotFate::Overshoot; };
  if (over(c_lo) || !over(c_hi))
    throw Error("no heteroclinic detected: trajectory class does not flip across the bracket");
  while (c_hi - c_lo > c_tol) {
    double mid = 0.5 * (c_lo + c_hi);
    if (over(mid))
      c_hi = mid;
    else
      c_lo = mid;
  }
  return 0.5 * (c_lo + c_hi);
}

}  // namespace fmwave
