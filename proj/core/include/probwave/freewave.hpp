#pragma once

#include <vector>

#include "probwave/core.hpp"

namespace probwave {

/// Uniform spatial grid at a fixed time.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 3;
  double t = 0.0;

  /// Throws InvalidInput unless x_min < x_max and n >= 3.
  void validate() const;
  double spacing() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  std::vector<double> points() const;
};

/// omega from hbar*omega = hbar^2 k^2/(2m) - hbar^2 R^2/(8 m v^2).
double dispersion_omega(double k, double rate, double speed, const PhysicalConstants& c = {});

struct MomentumPair {
  double positive = 0.0;
  double negative = 0.0;
};

/// Least momentum of a zero-energy state, +-hbar R / (2 v).
MomentumPair min_momentum(double rate, double speed, const PhysicalConstants& c = {});

/// True when (x, t) lies in the region where the branch is defined
/// (x >= v t for Incoming, x <= v t for Outgoing), up to rounding.
bool in_branch_region(const FreeWaveParams& p, double x, double t);

/// Wave function of the free family. Throws RegionError when (x, t) is on
/// the wrong side of the measurement point for the branch.
Complex psi_free(const FreeWaveParams& p, double x, double t);

/// |psi_free|^2; equals 1 at x = v t and lies in (0, 1] inside the region.
double prob_density_free(const FreeWaveParams& p, double x, double t);

/// Closed-form total probability v / R of the region ahead of (or behind)
/// the particle. Throws DivergenceError for R = 0.
double total_probability(const FreeWaveParams& p);

/// Same integral by adaptive quadrature over [v t, v t + 40 v / R].
double total_probability_quadrature(const FreeWaveParams& p, double t = 0.0);

/// Sets R = v and recomputes omega, so that total_probability is 1.
FreeWaveParams normalize_state(const FreeWaveParams& p);

enum class DerivativeMethod { Analytic, FiniteDifference };

struct ResidualOptions {
  DerivativeMethod method = DerivativeMethod::Analytic;
  /// Step in both x and t.
  double h = 1e-3;
  /// Richardson rounds on top of the central differences; 0 keeps O(h^2).
  int richardson_levels = 2;
};

/// max over the grid of |i hbar psi_t + (hbar^2/2m) psi_xx|.
///
/// The grid must lie inside the branch region and keep a guard band of
/// three grid steps (or stencil widths, whichever is larger) from the
/// measurement point, where psi has a kink. Throws RegionError otherwise.
double schrodinger_residual(const FreeWaveParams& p, const Grid1D& grid,
                            const ResidualOptions& opt = {});

}  // namespace probwave
