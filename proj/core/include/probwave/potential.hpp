#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "probwave/core.hpp"
#include "probwave/freewave.hpp"
#include "probwave/spline.hpp"

namespace probwave {

/// Two columns read from a whitespace-separated text table.
struct Table2 {
  std::vector<double> x;
  std::vector<double> y;
};

/// Reads "x y" rows; blank lines and '#' comments are skipped.
/// Throws InvalidInput on malformed rows.
Table2 read_table(std::istream& in);

/// Sampled description of a particle in a time-independent potential.
///
/// k(x) and V(x) are independent inputs (natural cubic splines through the
/// samples). The local velocity is v(x) = hbar k(x) / m, and travel time is
/// measured from the first sample. The measurement point fixes the constant
/// D = |k(x_mp)| of the amplitude prefactor.
class PotentialSpec {
 public:
  static constexpr std::size_t kMinSamples = 8;

  PotentialSpec(std::vector<double> x, std::vector<double> potential, std::vector<double> kx,
                double rate, double omega, const PhysicalConstants& constants = {},
                std::optional<double> measurement_point = std::nullopt);

  /// Builds a spec from an (x, V) table and an (x, k) table. The k table
  /// defines the sample positions; V is interpolated onto them.
  static PotentialSpec from_tables(std::istream& potential_table, std::istream& k_table,
                                   double rate, double omega,
                                   const PhysicalConstants& constants = {},
                                   std::optional<double> measurement_point = std::nullopt);

  /// Copy with the measurement point moved to x.
  PotentialSpec with_measurement_point(double x) const;
  /// Copy with a different envelope rate.
  PotentialSpec with_rate(double rate) const;

  double x_start() const { return x_.front(); }
  double x_end() const { return x_.back(); }
  double measurement_point() const { return x_mp_; }
  double k_mp() const { return k_at(x_mp_); }
  double rate() const { return rate_; }
  double omega() const { return omega_; }
  const PhysicalConstants& constants() const { return constants_; }
  std::span<const double> x_samples() const { return x_; }
  /// Travel time from x_start to each sample.
  std::span<const double> sample_travel_times() const { return travel_; }

  double k_at(double x) const { return k_(x); }
  double potential_at(double x) const { return v_pot_(x); }
  double speed_at(double x) const { return constants_.hbar * k_(x) / constants_.mass; }
  /// int_{x_start}^{x} k dx'.
  double phase_integral(double x) const { return k_.integral(x); }

 private:
  void build_travel_times();

  std::vector<double> x_;
  CubicSpline v_pot_;
  CubicSpline k_;
  double rate_ = 0.0;
  double omega_ = 0.0;
  PhysicalConstants constants_{};
  double x_mp_ = 0.0;
  std::vector<double> travel_;  // travel time to each sample
};

/// int_{x_start}^{x} dx'/v(x') by adaptive quadrature on the interpolated v.
/// Throws InvalidInput if x is outside the sampled domain or v <= 0 on the path.
double arrival_time(const PotentialSpec& spec, double x);

/// True when t is on the branch's side of the arrival time at x.
bool in_branch_region(const PotentialSpec& spec, Branch branch, double x, double t);

/// |k_mp / k(x)|^(1/2) exp[+-(R/2)(t - T(x))] exp[i Phi(x) - i omega t]
/// with T the arrival time and Phi the phase integral.
Complex psi_potential(const PotentialSpec& spec, Branch branch, double x, double t);

/// |psi_potential|^2.
double prob_density_potential(const PotentialSpec& spec, Branch branch, double x, double t);

struct ContinuityOptions {
  double h = 1e-3;
  int richardson_levels = 0;
};

/// max over the grid of |dP/dt + d(P v)/dx| with central differences.
/// Throws RegionError if the grid (with a three-step guard band) is not
/// entirely on the branch's side of the measurement point.
double continuity_residual(const PotentialSpec& spec, Branch branch, const Grid1D& grid,
                           const ContinuityOptions& opt = {});

struct MpLimitReport {
  bool D_equals_k_mp = false;
  bool R_zero_consistent = false;
  double plane_wave_residual = 0.0;
  double density_at_mp = 0.0;
  double prefactor_at_mp = 0.0;
};

/// Places the measurement point at x and checks the arrival limit at
/// t = arrival_time(x): density 1, unit prefactor, and psi equal to a unit
/// plane wave exp[i(Phi(x) - omega t)] within 1e-10. `mp_rate` is the
/// envelope rate assumed to act at the measurement point; only 0 keeps the
/// density stationary there.
MpLimitReport mp_limit_check(const PotentialSpec& spec, double x, double mp_rate = 0.0);

}  // namespace probwave
