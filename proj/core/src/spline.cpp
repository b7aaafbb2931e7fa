#include "probwave/spline.hpp"

#include <algorithm>
#include <string>

#include "probwave/core.hpp"
#include "probwave/errors.hpp"

namespace probwave {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw InvalidInput("spline needs >= 2 matching samples");
  for (std::size_t i = 0; i < n; ++i) {
    require_finite(x_[i], "spline knot");
    require_finite(y_[i], "spline sample");
    if (i > 0 && !(x_[i] > x_[i - 1])) throw InvalidInput("spline knots must be strictly increasing");
  }

  // Tridiagonal system for interior second derivatives, natural ends.
  m_.assign(n, 0.0);
  if (n > 2) {
    std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      diag[i - 1] = 2.0 * (h0 + h1);
      upper[i - 1] = h1;
      rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Thomas algorithm; the sub-diagonal of row r equals upper[r-1].
    for (std::size_t r = 1; r < diag.size(); ++r) {
      const double w = upper[r - 1] / diag[r - 1];
      diag[r] -= w * upper[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    for (std::size_t r = diag.size(); r-- > 0;) {
      double v = rhs[r];
      if (r + 1 < diag.size()) v -= upper[r] * m_[r + 2];
      m_[r + 1] = v / diag[r];
    }
  }

  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    cumulative_[i + 1] = cumulative_[i] + segment_integral(i, x_[i + 1]);
  }
}

std::size_t CubicSpline::segment(double x) const {
  if (x_.empty()) throw InvalidInput("spline is empty");
  const double span = x_.back() - x_.front();
  const double slack = 1e-12 * std::max(1.0, span);
  if (!(x >= x_.front() - slack && x <= x_.back() + slack)) {
    throw InvalidInput("spline evaluated outside its sample range at x = " + std::to_string(x));
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::value(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
         (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
}

double CubicSpline::segment_integral(std::size_t i, double to) const {
  const double h = x_[i + 1] - x_[i];
  // Antiderivative in terms of b = (x - x_i)/h, a = 1 - b.
  auto prim = [&](double x) {
    const double b = (x - x_[i]) / h;
    const double a = 1.0 - b;
    return h * (-0.5 * a * a * y_[i] + 0.5 * b * b * y_[i + 1] +
                h * h / 6.0 *
                    (-(0.25 * a * a * a * a - 0.5 * a * a) * m_[i] +
                     (0.25 * b * b * b * b - 0.5 * b * b) * m_[i + 1]));
  };
  return prim(to) - prim(x_[i]);
}

double CubicSpline::integral(double x) const {
  const std::size_t i = segment(x);
  return cumulative_[i] + segment_integral(i, x);
}

}  // namespace probwave
