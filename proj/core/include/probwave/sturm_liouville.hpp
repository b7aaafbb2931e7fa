#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "probwave/core.hpp"

namespace probwave {

class PotentialSpec;

/// Eigenproblem for the radial amplitude of a bound wave,
///
///   -(hbar^2/2m) R'' + [hbar^2 k(x)^2/2m + V(x)] R = E R,
///   R'(x0) = 0,  R(x_end) = 0,
///
/// with E = hbar*omega. k and V are independent inputs.
struct SLProblem {
  double x0 = 0.0;
  double x_end = 1.0;
  std::function<double(double)> kx;
  std::function<double(double)> potential;
  std::size_t n_eigen = 1;
  /// Grid nodes including both ends.
  std::size_t n_points = 2001;
  PhysicalConstants constants{};

  /// Throws InvalidInput unless x0 < x_end, n_eigen >= 1, n_points >= 16
  /// and both fields are set.
  void validate() const;

  /// k and V taken from a sampled potential over its whole domain.
  static SLProblem from_spec(const PotentialSpec& spec, std::size_t n_eigen,
                             std::size_t n_points = 2001);
};

enum class SlBackend {
  /// Numerov shooting with node-count bracketing. O(h^4).
  Shooting,
  /// Cell-centred finite-difference matrix, Richardson-extrapolated
  /// eigenvalues. Used as the independent cross-check.
  DenseMatrix,
};

struct SLSolution {
  double x0 = 0.0;
  double x_end = 0.0;
  PhysicalConstants constants{};
  SlBackend backend = SlBackend::Shooting;
  /// hbar*omega_n, strictly increasing.
  std::vector<double> eigenvalues;
  /// Sample positions of the eigenfunctions.
  std::vector<double> grid;
  /// R_n on `grid`, normalized to int R_n^2 dx = 1 with R_n(x0) > 0.
  std::vector<std::vector<double>> eigenfunctions;
};

/// Lowest n_eigen eigenpairs.
///
/// Throws ConvergenceError when the root search does not settle, or when
/// fewer than n_eigen eigenvalues lie below the resolution ceiling of the
/// grid (eight points per local wavelength).
SLSolution solve_sturm_liouville(const SLProblem& problem,
                                 SlBackend backend = SlBackend::Shooting);

/// int R_a R_b dx with the quadrature used to normalize the solution.
double eigenfunction_overlap(const SLSolution& solution, std::size_t a, std::size_t b);

/// Times of arrival t_n = (x - x0) / v_n with hbar k_n = sqrt(2 m E_n)
/// and v_n = hbar k_n / m. Requires every E_n > 0 and x > x0.
std::vector<double> discrete_arrival_times(const SLSolution& solution, double x);

}  // namespace probwave
