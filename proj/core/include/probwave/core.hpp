#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace probwave {

using Complex = std::complex<double>;

/// Physical constants. Natural units (all 1) by default.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double k_boltzmann = 1.0;

  /// Throws InvalidInput unless every constant is finite and strictly positive.
  void validate() const;

  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

/// Which side of the measurement point a free wave lives on.
///
/// Incoming waves are defined for x >= v t (the particle has not reached x
/// yet and the density tail decays ahead of it). Outgoing waves are defined
/// for x <= v t and mirror the incoming tail behind the particle.
enum class Branch { Incoming, Outgoing };

std::string_view to_string(Branch b);

/// Parameters of one member of the free-particle wave family
///
///   psi = exp[+-(R/2)(t - x/v)] exp[i(k x - omega t)]
///
/// make_free_state() is the validated constructor; the struct is a plain
/// aggregate so that deliberately inconsistent parameters can be built by
/// verification code.
struct FreeWaveParams {
  double k = 0.0;
  double omega = 0.0;
  double rate = 0.0;  // envelope rate R
  double speed = 0.0;
  Branch branch = Branch::Incoming;
  PhysicalConstants constants{};

  /// hbar*omega + hbar^2 R^2/(8 m v^2) - hbar^2 k^2/(2m); zero for a valid state.
  double dispersion_defect() const;

  friend bool operator==(const FreeWaveParams&, const FreeWaveParams&) = default;
};

/// Builds the state moving along +x with speed v and envelope rate R.
/// k = m v / hbar and omega follows the quantum-potential-corrected dispersion.
FreeWaveParams make_free_state(double speed, double rate,
                               const PhysicalConstants& constants = {},
                               Branch branch = Branch::Incoming);

/// Observables whose eigenvalue records the library produces.
enum class Observable { H, Hdagger, P, S, Xc, Tc };

std::string_view to_string(Observable o);

/// Result of applying an observable to a family state: A psi / psi.
struct EigenRecord {
  Observable observable = Observable::H;
  Complex value{};
  bool at_mp = false;

  friend bool operator==(const EigenRecord&, const EigenRecord&) = default;
};

struct SpaceTimePoint {
  double x = 0.0;
  double t = 0.0;
};

/// One component of a superposition: amplitude times a family wave.
///
/// Potential-bound components are carried through their measurement-point
/// equivalent free wave (same omega, R and k at the measurement point).
struct WaveComponent {
  Complex amplitude{};
  FreeWaveParams wave{};

  friend bool operator==(const WaveComponent&, const WaveComponent&) = default;
};

/// Normalized superposition sum_i a_i |psi_i>.
class SuperposedState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Throws InvalidInput when the components are empty or sum |a_i|^2 != 1.
  explicit SuperposedState(std::vector<WaveComponent> components);

  std::size_t size() const noexcept { return components_.size(); }
  std::span<const WaveComponent> components() const noexcept { return components_; }
  const WaveComponent& operator[](std::size_t i) const { return components_.at(i); }

  std::vector<Complex> amplitudes() const;
  /// |a_i|^2 for every component.
  std::vector<double> weights() const;

  friend bool operator==(const SuperposedState&, const SuperposedState&) = default;

 private:
  std::vector<WaveComponent> components_;
};

/// Space-time locus at which a wave peak meets the device particle.
struct MeasurementEvent {
  double x = 0.0;
  double t = 0.0;
  /// Speed of the component whose peak arrived (x = speed * t).
  double speed = 0.0;
  double tolerance = 1e-9;
  std::optional<std::size_t> outcome_index;
  std::optional<SuperposedState> pre_state;
  std::optional<SuperposedState> post_state;

  /// |x - v t| <= tolerance * max(1, |x|).
  bool satisfies_arrival() const;
};

/// Throws InvalidInput naming `what` unless `value` is finite.
void require_finite(double value, std::string_view what);

}  // namespace probwave
