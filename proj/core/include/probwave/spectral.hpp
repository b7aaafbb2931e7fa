#pragma once

#include <array>
#include <optional>
#include <span>

#include "probwave/core.hpp"

namespace probwave {

/// Eigenvalue A psi / psi of an observable on a family state at `at`.
///
/// H -> hbar omega + s i hbar R/2, Hdagger -> its conjugate,
/// P -> hbar k + s i hbar R/(2v), S -> t0 P / m, where s = +1 for Incoming
/// and -1 for Outgoing waves. S needs t0 < x/v. When `at` lies on the
/// arrival line x = v t the hermitized (real) value is returned.
///
/// Throws InvalidInput for Xc/Tc (they have no eigenvalue on the family)
/// or a missing/invalid t0.
EigenRecord apply_observable(Observable obs, const FreeWaveParams& state, SpaceTimePoint at,
                             std::optional<double> t0 = std::nullopt);

/// Drops the imaginary part and marks the record as taken at the MP.
/// Throws InvalidInput unless the event satisfies x = v t.
EigenRecord hermitize_at_mp(const EigenRecord& record, const MeasurementEvent& event);

/// Point of complex space-time.
struct ComplexCoordinate {
  Complex x_c{};
  Complex t_c{};
  /// Canonical points satisfy im(x_c) = re(x_c) and im(t_c) = re(t_c).
  bool canonical = false;

  /// x_c = x(1 + i), t_c = t(1 + i).
  static ComplexCoordinate on_canonical_line(double x, double t);
  static ComplexCoordinate free(Complex x_c, Complex t_c);
};

/// exp(i k x_c - i omega t_c). Throws InvalidInput if a coordinate flagged
/// canonical is not on the canonical line.
Complex psi_complex(const FreeWaveParams& state, const ComplexCoordinate& coord);

enum class CommutatorPair {
  /// [x_c, p_c] with p_c = -i hbar d/dx_c.
  XcPc,
  /// [t, H] with the symmetrized time operator t = (m/2)(x_c p_c^-1 + p_c^-1 x_c)
  /// and H = p_c^2 / 2m.
  TcHc,
};

/// Mean over the probe points of ([A, B] psi) / psi, with derivatives taken
/// by Richardson-extrapolated central differences along (1 + i)/sqrt(2).
/// Expected value i hbar for both pairs. Requires k > 0 for TcHc.
/// Throws InvalidInput on an empty grid or where |psi| < 1e-300.
Complex commutator_check(CommutatorPair pair, const FreeWaveParams& state,
                         std::span<const ComplexCoordinate> probe_grid);

struct ComplexResidual {
  double max_abs = 0.0;
  /// max of residual / |psi|.
  double max_relative = 0.0;
};

/// Residual of -(hbar^2/2m) psi_{x_c x_c} = i hbar psi_{t_c} for psi_complex.
ComplexResidual complex_schrodinger_residual(const FreeWaveParams& state,
                                             std::span<const ComplexCoordinate> probe_grid);

/// Phase f(x, t) = k x - omega t that keeps the Schroedinger equation
/// invariant under a Galilean boost with speed v.
struct GalileanPhase {
  double k = 0.0;
  double omega = 0.0;

  double operator()(double x, double t) const { return k * x - omega * t; }
};

/// k = m v / hbar, omega = k v / 2. Throws InvalidInput unless v > 0.
GalileanPhase galilean_phase(double speed, const PhysicalConstants& constants = {});

/// The three invariance conditions
///   (hbar/m) f_x - v,  f_xx,  (hbar/2m) f_x^2 - v f_x - f_t
/// at (x, t), derivatives of f taken numerically.
std::array<double, 3> galilean_conditions(const GalileanPhase& phase, double speed,
                                          const PhysicalConstants& constants, double x,
                                          double t);

/// Probability of finding a normalized particle at distance s from it:
/// exp(-s). Throws InvalidInput for s < 0 or R != v.
double probability_field(double s, const FreeWaveParams& params);

}  // namespace probwave
