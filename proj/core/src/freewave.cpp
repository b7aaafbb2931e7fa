#include "probwave/freewave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "probwave/derivative.hpp"
#include "probwave/errors.hpp"
#include "probwave/quadrature.hpp"

namespace probwave {
namespace {

double branch_sign(Branch b) { return b == Branch::Incoming ? 1.0 : -1.0; }

// d(ln psi)/dx and d(ln psi)/dt inside the region.
Complex log_dx(const FreeWaveParams& p) {
  return {-branch_sign(p.branch) * p.rate / (2.0 * p.speed), p.k};
}
Complex log_dt(const FreeWaveParams& p) {
  return {branch_sign(p.branch) * p.rate / 2.0, -p.omega};
}

void check_params(const FreeWaveParams& p) {
  p.constants.validate();
  require_finite(p.k, "k");
  require_finite(p.omega, "omega");
  require_finite(p.rate, "rate");
  require_finite(p.speed, "speed");
  if (p.speed <= 0.0) throw InvalidInput("speed must be positive");
}

}  // namespace

void Grid1D::validate() const {
  require_finite(x_min, "grid x_min");
  require_finite(x_max, "grid x_max");
  require_finite(t, "grid time");
  if (!(x_min < x_max)) throw InvalidInput("grid requires x_min < x_max");
  if (n < 3) throw InvalidInput("grid requires at least 3 points");
}

std::vector<double> Grid1D::points() const {
  validate();
  std::vector<double> xs(n);
  const double dx = spacing();
  for (std::size_t i = 0; i < n; ++i) xs[i] = x_min + dx * static_cast<double>(i);
  xs.back() = x_max;
  return xs;
}

double dispersion_omega(double k, double rate, double speed, const PhysicalConstants& c) {
  c.validate();
  require_finite(k, "k");
  require_finite(rate, "rate");
  require_finite(speed, "speed");
  if (speed <= 0.0) throw InvalidInput("speed must be positive");
  const double energy = c.hbar * c.hbar * k * k / (2.0 * c.mass) -
                        c.hbar * c.hbar * rate * rate / (8.0 * c.mass * speed * speed);
  return energy / c.hbar;
}

MomentumPair min_momentum(double rate, double speed, const PhysicalConstants& c) {
  c.validate();
  require_finite(rate, "rate");
  require_finite(speed, "speed");
  if (speed <= 0.0) throw InvalidInput("speed must be positive");
  const double p = c.hbar * rate / (2.0 * speed);
  return {p, -p};
}

bool in_branch_region(const FreeWaveParams& p, double x, double t) {
  const double front = p.speed * t;
  const double slack = 1e-12 * std::max({1.0, std::abs(x), std::abs(front)});
  return p.branch == Branch::Incoming ? x >= front - slack : x <= front + slack;
}

Complex psi_free(const FreeWaveParams& p, double x, double t) {
  check_params(p);
  require_finite(x, "x");
  require_finite(t, "t");
  if (!in_branch_region(p, x, t)) {
    throw RegionError(std::string(to_string(p.branch)) + " branch evaluated at x = " +
                      std::to_string(x) + ", t = " + std::to_string(t) +
                      " on the wrong side of the measurement point");
  }
  const double envelope = 0.5 * p.rate * branch_sign(p.branch) * (t - x / p.speed);
  return std::exp(Complex(envelope, p.k * x - p.omega * t));
}

double prob_density_free(const FreeWaveParams& p, double x, double t) {
  return std::norm(psi_free(p, x, t));
}

double total_probability(const FreeWaveParams& p) {
  check_params(p);
  if (p.rate < 0.0) throw InvalidInput("envelope rate must be non-negative");
  if (p.rate == 0.0) {
    throw DivergenceError("total probability diverges for R = 0 (plane-wave regime)");
  }
  return p.speed / p.rate;
}

double total_probability_quadrature(const FreeWaveParams& p, double t) {
  total_probability(p);  // same preconditions
  const double front = p.speed * t;
  const double length = 40.0 * p.speed / p.rate;
  const double a = p.branch == Branch::Incoming ? front : front - length;
  const double b = p.branch == Branch::Incoming ? front + length : front;
  quad::AdaptiveOptions opt;
  opt.abs_tol = 1e-14 * std::max(1.0, p.speed / p.rate);
  return quad::integrate([&](double x) { return prob_density_free(p, x, t); }, a, b, opt);
}

FreeWaveParams normalize_state(const FreeWaveParams& p) {
  check_params(p);
  FreeWaveParams out = p;
  out.rate = p.speed;
  out.omega = dispersion_omega(p.k, out.rate, p.speed, p.constants);
  return out;
}

double schrodinger_residual(const FreeWaveParams& p, const Grid1D& grid,
                            const ResidualOptions& opt) {
  check_params(p);
  grid.validate();
  if (!(opt.h > 0.0)) throw InvalidInput("finite-difference step must be positive");

  const double hbar = p.constants.hbar;
  const double kinetic = hbar * hbar / (2.0 * p.constants.mass);
  const Complex lx = log_dx(p);
  const Complex lt = log_dt(p);
  const double h = opt.h;

  const double front = p.speed * grid.t;
  const double guard = 3.0 * std::max({grid.spacing(), h, p.speed * h});
  const bool inside = p.branch == Branch::Incoming ? grid.x_min - front >= guard
                                                   : front - grid.x_max >= guard;
  if (!inside) {
    throw RegionError("residual grid must stay inside the " + std::string(to_string(p.branch)) +
                      " region with a guard band of " + std::to_string(guard) +
                      " from the measurement point x = " + std::to_string(front));
  }

  const Complex i(0.0, 1.0);
  double worst = 0.0;
  for (double x : grid.points()) {
    Complex psi_t;
    Complex psi_xx;
    if (opt.method == DerivativeMethod::Analytic) {
      const Complex psi = psi_free(p, x, grid.t);
      psi_t = lt * psi;
      psi_xx = lx * lx * psi;
    } else {
      psi_t = diff::central([&](double tt) { return psi_free(p, x, tt); }, grid.t, h, 1,
                            opt.richardson_levels);
      psi_xx = diff::central([&](double xx) { return psi_free(p, xx, grid.t); }, x, h, 2,
                             opt.richardson_levels);
    }
    worst = std::max(worst, std::abs(i * hbar * psi_t + kinetic * psi_xx));
  }
  return worst;
}

}  // namespace probwave
