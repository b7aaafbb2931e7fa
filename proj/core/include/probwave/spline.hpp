#pragma once

#include <span>
#include <vector>

namespace probwave {

/// Natural cubic spline through tabulated samples. Reproduces linear data
/// exactly. Evaluation outside [front, back] of the knots throws.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double derivative(double x) const;
  /// Exact integral of the interpolant from the first knot to x.
  double integral(double x) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> samples() const { return y_; }

 private:
  std::size_t segment(double x) const;
  double segment_integral(std::size_t i, double to) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;          // second derivatives at knots
  std::vector<double> cumulative_;  // integral from x_[0] to x_[i]
};

}  // namespace probwave
