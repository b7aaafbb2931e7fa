#include "probwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "probwave/errors.hpp"

namespace probwave {

EvolvedState evolve_state(const SuperposedState& state, double t) {
  require_finite(t, "t");
  EvolvedState out;
  for (const auto& c : state.components()) {
    const Complex factor = std::exp(Complex(0.5 * c.wave.rate * t, -c.wave.omega * t));
    out.components.push_back({c.amplitude * factor, c.wave});
    out.norm_squared += std::norm(c.amplitude * factor);
  }
  return out;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw InvalidInput("density matrix must be square and non-empty");
  }
  if (!m_.allFinite()) throw InvalidInput("density matrix has non-finite entries");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance * scale) {
    throw InvalidInput("density matrix is not Hermitian (deviation " + std::to_string(asym) +
                       ")");
  }
  const double lowest = eigenvalues()(0);
  if (lowest < -kPsdTolerance * scale) {
    throw InvalidInput("density matrix is not positive semi-definite (eigenvalue " +
                       std::to_string(lowest) + ")");
  }
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> weights) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(weights.size()),
                                              static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = weights[i];
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> amplitudes) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amplitudes.size()));
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = amplitudes[i];
  }
  return DensityMatrix(v * v.adjoint());
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  // Symmetrize so the solver sees an exactly Hermitian input.
  const Eigen::MatrixXcd h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

std::vector<Complex> energy_eigenvalues(const SuperposedState& state) {
  std::vector<Complex> out;
  for (const auto& c : state.components()) {
    const double hbar = c.wave.constants.hbar;
    out.emplace_back(hbar * c.wave.omega, 0.5 * hbar * c.wave.rate);
  }
  return out;
}

DensityMatrix evolve_density(const DensityMatrix& rho0, std::span<const Complex> eigenvalues,
                             double t, const PhysicalConstants& constants) {
  constants.validate();
  require_finite(t, "t");
  if (eigenvalues.size() != rho0.size()) {
    throw InvalidInput("need one energy eigenvalue per density-matrix row");
  }
  const double hbar = constants.hbar;
  Eigen::MatrixXcd m = rho0.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex ei = eigenvalues[static_cast<std::size_t>(i)];
      const Complex ej = eigenvalues[static_cast<std::size_t>(j)];
      const double dw = (ei.real() - ej.real()) / hbar;
      const double rsum = 2.0 * (ei.imag() + ej.imag()) / hbar;
      m(i, j) *= std::exp(Complex(0.5 * rsum * t, -dw * t));
    }
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix reduce_to_mixture(const SuperposedState& state) {
  const std::vector<double> w = state.weights();
  return DensityMatrix::diagonal(w);
}

double reduction_time(const SuperposedState& state, double x, ReductionTiming timing) {
  require_finite(x, "x");
  if (timing == ReductionTiming::Staggered) {
    throw InvalidInput("staggered reduction is not defined; use first-arrival");
  }
  if (!(x > 0.0)) throw InvalidInput("measurement point must lie at x > 0");
  double first = INFINITY;
  for (const auto& c : state.components()) first = std::min(first, x / c.wave.speed);
  return first;
}

double purity(const DensityMatrix& rho) {
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw InvalidInput("purity needs trace 1 (got " + std::to_string(tr.real()) + ")");
  }
  return (rho.matrix() * rho.matrix()).trace().real();
}

EntropyTrajectory entropy_trajectory(const SuperposedState& state, std::span<const double> times,
                                     const PhysicalConstants& constants,
                                     std::span<const double> measured_at) {
  constants.validate();
  const auto weights = state.weights();
  const std::size_t dominant = static_cast<std::size_t>(
      std::max_element(weights.begin(), weights.end()) - weights.begin());
  const FreeWaveParams& wave = state[dominant].wave;
  if (!(wave.rate > 0.0) ||
      std::abs(wave.rate - wave.speed) > 1e-12 * std::max(1.0, wave.speed)) {
    throw InvalidInput("entropy trajectory needs a normalized dominant component (R = v)");
  }
  // Imaginary part of the energy is hbar omega' = hbar R / 2.
  const double omega_prime = 0.5 * wave.rate;
  const double two_omega_prime = 2.0 * omega_prime;

  EntropyTrajectory out;
  for (double t : times) {
    require_finite(t, "time");
    const double s = -constants.k_boltzmann * two_omega_prime * t * (wave.speed / wave.rate);
    const bool hit = std::find(measured_at.begin(), measured_at.end(), t) != measured_at.end();
    out.times.push_back(t);
    out.entropy.push_back(s);
    out.measured.push_back(hit);
    out.entropy_after.push_back(hit ? 0.0 : s);
  }
  return out;
}

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < rho.size(); ++j) {
      row.push_back({rho(i, j).real(), rho(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("density JSON must be a non-empty array");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw InvalidInput("density JSON rows must all have length " + std::to_string(n));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2) throw InvalidInput("density entry must be [re, im]");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return DensityMatrix(std::move(m));
}

}  // namespace probwave
