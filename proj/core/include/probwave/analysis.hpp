#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "probwave/core.hpp"

namespace probwave {

/// Population statistics of complex samples z = a + i b.
struct UncertaintyReport {
  double var_real = 0.0;
  double var_imag = 0.0;
  /// <z^2> - <z>^2.
  Complex var_complex{};
  /// Population covariance of (a, b).
  double covariance = 0.0;
  /// var_complex - (var_real - var_imag); equals 2 i covariance.
  Complex identity_gap{};
};

/// Throws InvalidInput for fewer than two samples or non-finite entries.
UncertaintyReport uncertainty_decompose(std::span<const Complex> samples);

/// dx * dp >= hbar / 2. Inputs must be non-negative; hbar = 0 is allowed.
bool heisenberg_check(double dx_imag, double dp_imag, double hbar);
bool heisenberg_check(double dx_imag, double dp_imag, const PhysicalConstants& constants);

/// Polyline in the complex x plane at a fixed complex time.
struct Contour {
  std::vector<Complex> vertices;
  Complex t_c{};
  bool closed = false;

  /// Throws InvalidInput with fewer than two vertices, non-finite vertices
  /// or a closed flag that disagrees with first == last.
  void validate() const;
  /// Same path with every edge split into `parts` equal pieces.
  Contour subdivided(std::size_t parts) const;
};

/// Reads "re_x,im_x" rows (header required). The contour is closed when
/// its first and last vertices coincide.
Contour read_contour_csv(std::istream& in, Complex t_c = {});

enum class ContourDensity {
  /// exp[R (t_c - x_c / v)].
  IncomingP1,
  /// exp[R (x_c / v - t_c)].
  OutgoingP1,
};

/// Integral of the density's analytic continuation along the contour,
/// adaptive 16-point Gauss-Legendre on each edge.
/// Throws InvalidInput when every edge has zero length.
Complex contour_integral(ContourDensity density, const FreeWaveParams& params,
                         const Contour& contour);

/// d pi / dx = -(R / v) exp[R (t - x / v)] for the incoming distribution
/// function pi = exp[R (t - x / v)]. Throws RegionError unless x > v t.
double negative_density_slope(const FreeWaveParams& params, double x, double t);

/// Distribution function pi on [x_start, x_end] and its density -dpi/dx.
struct Distribution {
  std::function<double(double)> pi;
  std::function<double(double)> density;
  double x_start = 0.0;
  double x_end = 1.0;

  /// Incoming family at time t over [v t, v t + 40 v / R].
  static Distribution incoming(const FreeWaveParams& params, double t = 0.0);
};

struct NormalizationReport {
  /// pi(x_start) - pi(x_end): the change-of-variables value.
  double value = 0.0;
  /// int density dx over the domain.
  double quadrature = 0.0;
};

/// Total probability as -int_{pi=1}^{pi=0} d pi, cross-checked by quadrature.
/// Throws InvalidInput unless pi starts at 1, ends below 1e-8 and is
/// non-increasing on a 257-point sample of the domain.
NormalizationReport distribution_normalize(const Distribution& d);

/// -(hbar^2 / 4 m P) [P'' - P'^2 / (2 P)] for the envelope P of the state,
/// derivatives by central differences. Equals -hbar^2 R^2 / (8 m v^2).
double quantum_potential(const FreeWaveParams& params, double x, double t);

struct ClassicalPointReport {
  double quantum_potential = 0.0;
  /// Coefficients of s(x, t) = hbar k x - hbar omega t.
  double hbar_k = 0.0;
  double hbar_omega = 0.0;
  /// s at the event.
  double principal_value = 0.0;
  /// d^2 s / dx^2 at the event.
  double second_derivative = 0.0;
};

/// Evaluates the classical point at the MP, where R = 0.
/// Throws InvalidInput unless the event is this state's arrival.
ClassicalPointReport classical_point_check(const FreeWaveParams& params,
                                           const MeasurementEvent& event);

}  // namespace probwave
