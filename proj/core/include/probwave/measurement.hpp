#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <vector>

#include "probwave/core.hpp"
#include "probwave/evolution.hpp"
#include "probwave/freewave.hpp"
#include "probwave/rng.hpp"

namespace probwave {

class PotentialSpec;

/// Event iff |x - v t| <= tol. The event carries the state's speed.
std::optional<MeasurementEvent> detect_mp(const FreeWaveParams& state, double x, double t,
                                          double tol);

/// Event iff |t - arrival_time(x)| <= tol. The event's speed is the mean
/// speed x / t so that it satisfies the arrival relation.
std::optional<MeasurementEvent> detect_mp(const PotentialSpec& spec, double x, double t,
                                          double tol);

/// Index i drawn with probability |a_i|^2.
std::size_t sample_outcome(const SuperposedState& state, RandomStream& rng);

/// Component indices ordered by arrival time x / v_i at an MP at x > 0.
std::vector<std::size_t> arrival_order(const SuperposedState& state, double x);

/// The component's wave once its peak sits at the MP: R = 0 plane wave,
/// continuing as the outgoing branch.
FreeWaveParams mp_plane_wave(const FreeWaveParams& wave);

/// Reduction onto `outcome`: amplitude 1 there and 0 elsewhere, the
/// surviving component replaced by its MP plane wave. Idempotent.
///
/// Throws InvalidInput if the outcome is out of range or the event is not
/// the arrival of that component (x != v t or a different speed).
SuperposedState dirac_project(const SuperposedState& state, std::size_t outcome,
                              const MeasurementEvent& event);

/// What happens to the particle after the MP.
struct AfterMeasurement {
  bool recorded = false;
  double speed = 0.0;
  double rate = 0.0;
  /// Re-emitted outgoing wave when the particle is released.
  std::optional<FreeWaveParams> outgoing;
};

/// record = true absorbs the particle (R = v = 0); otherwise the outgoing
/// branch of the same wave carries on.
AfterMeasurement settle(const FreeWaveParams& wave, bool record);

/// Pointer of the measuring device: a wave plus the reading it indicates.
/// Pointer states with different readings are orthogonal.
struct PointerState {
  FreeWaveParams wave{};
  std::size_t reading = 0;

  friend bool operator==(const PointerState&, const PointerState&) = default;
};

/// a_i psi_i (x) phi_i (q).
struct ProductTerm {
  Complex amplitude{};
  FreeWaveParams system{};
  PointerState pointer{};

  friend bool operator==(const ProductTerm&, const ProductTerm&) = default;
};

/// Entangled system-pointer state sum_i a_i theta_i, theta_i = psi_i (x) phi_i.
class CompositeState {
 public:
  /// Throws InvalidInput on an empty list, sum |a_i|^2 != 1 (1e-12), or two
  /// terms sharing a pointer reading.
  explicit CompositeState(std::vector<ProductTerm> terms, bool projected = false);

  std::size_t size() const { return terms_.size(); }
  std::span<const ProductTerm> terms() const { return terms_; }
  const ProductTerm& operator[](std::size_t i) const { return terms_.at(i); }
  /// Set once a von Neumann projection has happened; no operation clears it.
  bool projected() const { return projected_; }

  /// <theta_i | theta_j> over the pointer readings: 1 if i == j else 0.
  double overlap(std::size_t i, std::size_t j) const;

  friend bool operator==(const CompositeState&, const CompositeState&) = default;

 private:
  std::vector<ProductTerm> terms_;
  bool projected_ = false;
};

/// Throws InvalidInput on count mismatch or repeated pointer readings.
CompositeState tensor_compose(std::span<const FreeWaveParams> systems,
                              std::span<const PointerState> pointers,
                              std::span<const Complex> amplitudes);

/// theta(x, q, t) = psi(x, t) phi(q, t) for one term.
Complex product_wave(const ProductTerm& term, double x, double q, double t);

/// Eigenvalue of A (x) B on a product term: (A psi / psi)(B phi / phi).
Complex product_eigenvalue(Observable a, Observable b, const ProductTerm& term,
                           SpaceTimePoint system_at, SpaceTimePoint pointer_at);

/// max over the x and q grids (both at x_grid.t) of
///   |i hbar theta_t + (hbar^2/2m1) theta_xx + (hbar^2/2m2) theta_qq - (V1 + V2) theta|
/// with Richardson-extrapolated central differences. The waves' frequencies
/// must include their constant potentials V1, V2 for a zero residual.
double composite_residual(const ProductTerm& term, const Grid1D& x_grid, const Grid1D& q_grid,
                          double v1 = 0.0, double v2 = 0.0);

/// Composite reduction onto term `outcome`: amplitude 1 there, 0 elsewhere,
/// both factors replaced by MP plane waves, projected flag set.
/// Throws InvalidInput if the event is not that system component's arrival.
CompositeState von_neumann_project(const CompositeState& state, std::size_t outcome,
                                   const MeasurementEvent& event);

/// sum_k w_k |state_k><state_k| in the product basis labelled by pointer
/// reading (dimension max reading + 1). Throws InvalidInput unless the
/// weights sum to 1 and the states agree on the system wave of each reading.
DensityMatrix mixture_density(std::span<const CompositeState> states,
                              std::span<const double> weights);

struct AverageComparison {
  Complex entangled_avg{};
  double reduced_avg = 0.0;
};

/// entangled = sum |a_i|^2 b_i, reduced = sum |a_i|^2 re(b_i) for
/// per-term system eigenvalues b_i.
AverageComparison compare_averages(const CompositeState& state,
                                   std::span<const Complex> eigenvalues);

struct EnsembleReport {
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::vector<std::uint64_t> counts;
  std::vector<double> frequencies;
  std::vector<double> expected;
  /// (count - N p) / sqrt(N p (1 - p)); 0 where p is 0 or 1.
  std::vector<double> z_scores;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;

  nlohmann::ordered_json to_json() const;
  /// Columns outcome,count,frequency,expected,z_score.
  void write_csv(std::ostream& out) const;
};

/// n_trials categorical draws split over `workers` streams seeded from
/// (seed, stream index). Counts are merged by summation, so the report
/// depends only on (state, n_trials, seed, workers).
EnsembleReport run_ensemble(const SuperposedState& state, std::uint64_t n_trials,
                            std::uint64_t seed, std::size_t workers = 1);

}  // namespace probwave
