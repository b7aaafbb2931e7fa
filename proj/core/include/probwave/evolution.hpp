#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "probwave/core.hpp"

namespace probwave {

/// Superposition after non-unitary evolution. Amplitudes are not
/// renormalized; norm_squared = sum |a_i(t)|^2.
struct EvolvedState {
  std::vector<WaveComponent> components;
  double norm_squared = 0.0;
};

/// a_i(t) = a_i exp(-i omega_i t + R_i t / 2).
EvolvedState evolve_state(const SuperposedState& state, double t);

/// Square complex matrix in the component basis.
class DensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kPsdTolerance = 1e-10;

  /// Throws InvalidInput unless the matrix is square, non-empty, finite,
  /// Hermitian and positive semi-definite within tolerance.
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix diagonal(std::span<const double> weights);
  /// |psi><psi| for the amplitude vector psi.
  static DensityMatrix pure(std::span<const Complex> amplitudes);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Complex trace() const { return m_.trace(); }
  /// Eigenvalues in increasing order.
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXcd m_;
};

/// Per-component energies hbar omega_i + i hbar R_i / 2 driving the evolution.
std::vector<Complex> energy_eigenvalues(const SuperposedState& state);

/// rho_ij exp[-i(omega_i - omega_j) t + (R_i + R_j) t / 2], with omega_i and
/// R_i read off the H eigenvalues.
DensityMatrix evolve_density(const DensityMatrix& rho0, std::span<const Complex> eigenvalues,
                             double t, const PhysicalConstants& constants = {});

/// diag(|a_1|^2, ..., |a_n|^2): the state after coherence between
/// components is lost at the measurement point.
DensityMatrix reduce_to_mixture(const SuperposedState& state);

/// When the components' reductions take effect.
enum class ReductionTiming {
  /// Every component is reduced when the first peak reaches the MP.
  FirstArrival,
  /// Each component at its own arrival. Not defined; rejected.
  Staggered,
};

/// Time at which reduce_to_mixture applies for an MP at x.
/// Throws InvalidInput for Staggered or x <= 0.
double reduction_time(const SuperposedState& state, double x,
                      ReductionTiming timing = ReductionTiming::FirstArrival);

/// trace(rho^2). Throws InvalidInput unless trace(rho) = 1 within 1e-10.
double purity(const DensityMatrix& rho);

struct EntropyTrajectory {
  std::vector<double> times;
  /// S(t) in units of k_B times the supplied constant.
  std::vector<double> entropy;
  std::vector<bool> measured;
  /// S right after each time: 0 where a measurement happened, S(t) otherwise.
  std::vector<double> entropy_after;
};

/// S(t) = -k_B (2 omega') t (v / R) with 2 omega' = R from the imaginary part
/// of the dominant component's energy, i.e. -k_B v t.
///
/// The dominant (largest-weight) component must be normalized (R = v);
/// throws InvalidInput otherwise. `measured_at` tags times at which a
/// measurement event resets the entropy to zero.
EntropyTrajectory entropy_trajectory(const SuperposedState& state, std::span<const double> times,
                                     const PhysicalConstants& constants = {},
                                     std::span<const double> measured_at = {});

/// Row-major [[ [re, im], ... ], ...].
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace probwave
