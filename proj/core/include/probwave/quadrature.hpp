#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "probwave/errors.hpp"

namespace probwave::quad {

/// Nodes and weights of a Gaussian rule.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Results are cached per n.
const GaussRule& gauss_legendre(std::size_t n);

/// n-point Gauss-Laguerre rule for int_0^inf f(u) e^{-u} du. Cached per n.
const GaussRule& gauss_laguerre(std::size_t n);

/// Fixed-order Gauss-Legendre on [a, b]. F may return double or complex.
template <class F>
auto integrate_fixed(F&& f, double a, double b, const GaussRule& rule) {
  using R = decltype(f(a));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  R sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

struct AdaptiveOptions {
  std::size_t order = 16;
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_depth = 40;
};

namespace detail {

template <class F, class R>
R adaptive_step(F& f, double a, double b, R whole, const GaussRule& rule,
                const AdaptiveOptions& opt, int depth) {
  const double mid = 0.5 * (a + b);
  const R left = integrate_fixed(f, a, mid, rule);
  const R right = integrate_fixed(f, mid, b, rule);
  const R both = left + right;
  using std::abs;
  const double err = abs(both - whole);
  if (err <= std::max(opt.abs_tol, opt.rel_tol * abs(both))) return both;
  if (depth >= opt.max_depth) {
    throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) +
                               ", " + std::to_string(b) + "]",
                           static_cast<std::size_t>(depth));
  }
  AdaptiveOptions child = opt;
  child.abs_tol = 0.5 * opt.abs_tol;
  return adaptive_step(f, a, mid, left, rule, child, depth + 1) +
         adaptive_step(f, mid, b, right, rule, child, depth + 1);
}

}  // namespace detail

/// Adaptive Gauss-Legendre: bisects until the whole-interval estimate and
/// the sum over both halves agree to the requested tolerance.
template <class F>
auto integrate(F&& f, double a, double b, const AdaptiveOptions& opt = {}) {
  using R = decltype(f(a));
  if (a == b) return R{};
  const GaussRule& rule = gauss_legendre(opt.order);
  const R whole = integrate_fixed(f, a, b, rule);
  return detail::adaptive_step(f, a, b, whole, rule, opt, 0);
}

/// int f(z) dz along the straight segment z0 -> z1.
template <class F>
std::complex<double> integrate_segment(F&& f, std::complex<double> z0, std::complex<double> z1,
                                       const AdaptiveOptions& opt = {}) {
  const std::complex<double> dz = z1 - z0;
  auto along = [&](double s) -> std::complex<double> { return f(z0 + s * dz); };
  return integrate(along, 0.0, 1.0, opt) * dz;
}

}  // namespace probwave::quad
