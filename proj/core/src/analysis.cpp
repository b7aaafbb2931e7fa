#include "probwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "probwave/derivative.hpp"
#include "probwave/errors.hpp"
#include "probwave/quadrature.hpp"

namespace probwave {
namespace {

// Envelope exp[+-R (t - x / v)] evaluated without the branch restriction.
double envelope(const FreeWaveParams& p, double x, double t) {
  const double s = p.branch == Branch::Incoming ? 1.0 : -1.0;
  return std::exp(s * p.rate * (t - x / p.speed));
}

void check_state(const FreeWaveParams& p) {
  p.constants.validate();
  require_finite(p.rate, "rate");
  require_finite(p.speed, "speed");
  if (p.speed <= 0.0) throw InvalidInput("speed must be positive");
}

}  // namespace

UncertaintyReport uncertainty_decompose(std::span<const Complex> samples) {
  if (samples.size() < 2) throw InvalidInput("uncertainty needs at least two samples");
  const double n = static_cast<double>(samples.size());
  Complex mean{};
  for (const Complex& z : samples) {
    require_finite(z.real(), "sample");
    require_finite(z.imag(), "sample");
    mean += z;
  }
  mean /= n;

  UncertaintyReport r;
  Complex second{};
  for (const Complex& z : samples) {
    const Complex d = z - mean;
    r.var_real += d.real() * d.real();
    r.var_imag += d.imag() * d.imag();
    r.covariance += d.real() * d.imag();
    second += d * d;
  }
  r.var_real /= n;
  r.var_imag /= n;
  r.covariance /= n;
  r.var_complex = second / n;
  r.identity_gap = r.var_complex - Complex(r.var_real - r.var_imag, 0.0);
  return r;
}

bool heisenberg_check(double dx_imag, double dp_imag, double hbar) {
  require_finite(dx_imag, "dx");
  require_finite(dp_imag, "dp");
  require_finite(hbar, "hbar");
  if (dx_imag < 0.0 || dp_imag < 0.0 || hbar < 0.0) {
    throw InvalidInput("uncertainties and hbar must be non-negative");
  }
  return dx_imag * dp_imag >= 0.5 * hbar;
}

bool heisenberg_check(double dx_imag, double dp_imag, const PhysicalConstants& constants) {
  constants.validate();
  return heisenberg_check(dx_imag, dp_imag, constants.hbar);
}

void Contour::validate() const {
  if (vertices.size() < 2) throw InvalidInput("contour needs at least two vertices");
  for (const Complex& v : vertices) {
    require_finite(v.real(), "contour vertex");
    require_finite(v.imag(), "contour vertex");
  }
  require_finite(t_c.real(), "t_c");
  require_finite(t_c.imag(), "t_c");
  if (closed != (vertices.front() == vertices.back())) {
    throw InvalidInput("contour closed flag disagrees with its end points");
  }
}

Contour Contour::subdivided(std::size_t parts) const {
  validate();
  if (parts == 0) throw InvalidInput("subdivision count must be positive");
  Contour out{{}, t_c, closed};
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const Complex a = vertices[i];
    const Complex b = vertices[i + 1];
    for (std::size_t j = 0; j < parts; ++j) {
      out.vertices.push_back(a + (b - a) * (static_cast<double>(j) / static_cast<double>(parts)));
    }
  }
  out.vertices.push_back(vertices.back());
  return out;
}

Contour read_contour_csv(std::istream& in, Complex t_c) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("contour CSV is empty");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "re_x,im_x") throw InvalidInput("contour CSV header must be re_x,im_x");

  Contour c;
  c.t_c = t_c;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double re = 0.0;
    double im = 0.0;
    std::string rest;
    if (!(row >> re >> im) || (row >> rest)) {
      throw InvalidInput("contour CSV line " + std::to_string(line_no) +
                         ": expected two numbers");
    }
    c.vertices.emplace_back(re, im);
  }
  c.closed = c.vertices.size() >= 2 && c.vertices.front() == c.vertices.back();
  c.validate();
  return c;
}

Complex contour_integral(ContourDensity density, const FreeWaveParams& params,
                         const Contour& contour) {
  check_state(params);
  contour.validate();
  const double rate = params.rate;
  const double v = params.speed;
  const Complex tc = contour.t_c;
  auto p1 = [&](Complex xc) -> Complex {
    return density == ContourDensity::IncomingP1 ? std::exp(rate * (tc - xc / v))
                                                 : std::exp(rate * (xc / v - tc));
  };

  quad::AdaptiveOptions opt;
  opt.order = 16;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-13;
  Complex total{};
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < contour.vertices.size(); ++i) {
    const Complex a = contour.vertices[i];
    const Complex b = contour.vertices[i + 1];
    if (a == b) continue;
    length += std::abs(b - a);
    total += quad::integrate_segment(p1, a, b, opt);
  }
  if (length == 0.0) throw InvalidInput("contour has zero length");
  return total;
}

double negative_density_slope(const FreeWaveParams& params, double x, double t) {
  check_state(params);
  require_finite(x, "x");
  require_finite(t, "t");
  if (!(x > params.speed * t)) {
    throw RegionError("density slope needs x > v t (got x = " + std::to_string(x) +
                      ", v t = " + std::to_string(params.speed * t) + ")");
  }
  return -(params.rate / params.speed) * std::exp(params.rate * (t - x / params.speed));
}

Distribution Distribution::incoming(const FreeWaveParams& params, double t) {
  check_state(params);
  require_finite(t, "t");
  if (!(params.rate > 0.0)) {
    throw InvalidInput("distribution function is constant for R = 0 and cannot be normalized");
  }
  const double r = params.rate;
  const double v = params.speed;
  Distribution d;
  d.pi = [r, v, t](double x) { return std::exp(r * (t - x / v)); };
  d.density = [r, v, t](double x) { return (r / v) * std::exp(r * (t - x / v)); };
  d.x_start = v * t;
  d.x_end = v * t + 40.0 * v / r;
  return d;
}

NormalizationReport distribution_normalize(const Distribution& d) {
  if (!d.pi || !d.density) throw InvalidInput("distribution needs pi and its density");
  require_finite(d.x_start, "x_start");
  require_finite(d.x_end, "x_end");
  if (!(d.x_start < d.x_end)) throw InvalidInput("distribution domain must be increasing");

  const double first = d.pi(d.x_start);
  const double last = d.pi(d.x_end);
  if (std::abs(first - 1.0) > 1e-12) {
    throw InvalidInput("distribution function must start at 1 (got " + std::to_string(first) +
                       ")");
  }
  if (!(last >= 0.0 && last <= 1e-8)) {
    throw InvalidInput("distribution function must fall to 0 (got " + std::to_string(last) +
                       ")");
  }
  constexpr int kSamples = 257;
  double prev = first;
  for (int i = 1; i < kSamples; ++i) {
    const double x = d.x_start + (d.x_end - d.x_start) * i / (kSamples - 1.0);
    const double now = d.pi(x);
    if (now > prev) {
      throw InvalidInput("distribution function is not monotone near x = " + std::to_string(x));
    }
    prev = now;
  }

  quad::AdaptiveOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 1e-13;
  NormalizationReport r;
  r.value = first - last;
  r.quadrature = quad::integrate(d.density, d.x_start, d.x_end, opt);
  return r;
}

double quantum_potential(const FreeWaveParams& params, double x, double t) {
  check_state(params);
  require_finite(x, "x");
  require_finite(t, "t");
  const double hbar = params.constants.hbar;
  const double m = params.constants.mass;
  const double step = 0.4 * params.speed / std::max(params.rate, params.speed);
  const auto p = [&](double xx) { return envelope(params, xx, t); };
  const double p0 = p(x);
  const double d1 = diff::central(p, x, step, 1, 3);
  const double d2 = diff::central(p, x, step, 2, 3);
  return -(hbar * hbar) / (4.0 * m * p0) * (d2 - d1 * d1 / (2.0 * p0));
}

ClassicalPointReport classical_point_check(const FreeWaveParams& params,
                                           const MeasurementEvent& event) {
  check_state(params);
  if (!event.satisfies_arrival() ||
      std::abs(event.speed - params.speed) > 1e-12 * std::max(1.0, params.speed)) {
    throw InvalidInput("classical point check needs an event at this state's MP");
  }
  const double hbar = params.constants.hbar;
  FreeWaveParams at_mp = params;
  at_mp.rate = 0.0;

  ClassicalPointReport r;
  r.quantum_potential = quantum_potential(at_mp, event.x, event.t);
  r.hbar_k = hbar * params.k;
  r.hbar_omega = hbar * params.omega;
  const auto s = [&](double x) { return r.hbar_k * x - r.hbar_omega * event.t; };
  r.principal_value = s(event.x);
  r.second_derivative = diff::central(s, event.x, 1.0, 2, 0);
  return r;
}

}  // namespace probwave
