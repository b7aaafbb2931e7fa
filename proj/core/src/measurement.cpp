#include "probwave/measurement.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "probwave/derivative.hpp"
#include "probwave/errors.hpp"
#include "probwave/format.hpp"
#include "probwave/potential.hpp"
#include "probwave/spectral.hpp"

namespace probwave {
namespace {

void require_arrival_of(const FreeWaveParams& wave, const MeasurementEvent& event) {
  if (!event.satisfies_arrival()) {
    throw InvalidInput("event at x = " + std::to_string(event.x) + ", t = " +
                       std::to_string(event.t) + " does not satisfy x = v t");
  }
  if (std::abs(event.speed - wave.speed) > 1e-12 * std::max(1.0, wave.speed)) {
    throw InvalidInput("event speed " + std::to_string(event.speed) +
                       " belongs to a different component (speed " +
                       std::to_string(wave.speed) + ")");
  }
}

double log_derivative_scale(const FreeWaveParams& p, bool spatial) {
  const double s = p.branch == Branch::Incoming ? 1.0 : -1.0;
  const Complex l = spatial ? Complex(-s * p.rate / (2.0 * p.speed), p.k)
                            : Complex(s * p.rate / 2.0, -p.omega);
  return std::abs(l);
}

}  // namespace

std::optional<MeasurementEvent> detect_mp(const FreeWaveParams& state, double x, double t,
                                          double tol) {
  if (!(tol > 0.0)) throw InvalidInput("detection tolerance must be positive");
  require_finite(x, "x");
  require_finite(t, "t");
  if (std::abs(x - state.speed * t) > tol) return std::nullopt;
  MeasurementEvent e;
  e.x = x;
  e.t = t;
  e.speed = state.speed;
  e.tolerance = std::max(tol, e.tolerance);
  return e;
}

std::optional<MeasurementEvent> detect_mp(const PotentialSpec& spec, double x, double t,
                                          double tol) {
  if (!(tol > 0.0)) throw InvalidInput("detection tolerance must be positive");
  require_finite(t, "t");
  const double arrival = arrival_time(spec, x);
  if (std::abs(t - arrival) > tol) return std::nullopt;
  MeasurementEvent e;
  e.x = x;
  e.t = t;
  e.speed = t != 0.0 ? x / t : spec.speed_at(x);
  return e;
}

std::size_t sample_outcome(const SuperposedState& state, RandomStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double w = std::norm(state[i].amplitude);
    if (w == 0.0) continue;
    cumulative += w;
    last_nonzero = i;
    if (u < cumulative) return i;
  }
  return last_nonzero;
}

std::vector<std::size_t> arrival_order(const SuperposedState& state, double x) {
  require_finite(x, "x");
  if (!(x > 0.0)) throw InvalidInput("measurement point must lie at x > 0");
  std::vector<std::size_t> order(state.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x / state[a].wave.speed < x / state[b].wave.speed;
  });
  return order;
}

FreeWaveParams mp_plane_wave(const FreeWaveParams& wave) {
  FreeWaveParams out = wave;
  out.rate = 0.0;
  out.omega = dispersion_omega(wave.k, 0.0, wave.speed, wave.constants);
  out.branch = Branch::Outgoing;
  return out;
}

SuperposedState dirac_project(const SuperposedState& state, std::size_t outcome,
                              const MeasurementEvent& event) {
  if (outcome >= state.size()) {
    throw InvalidInput("outcome " + std::to_string(outcome) + " out of range");
  }
  require_arrival_of(state[outcome].wave, event);
  std::vector<WaveComponent> post(state.components().begin(), state.components().end());
  for (std::size_t i = 0; i < post.size(); ++i) post[i].amplitude = i == outcome ? 1.0 : 0.0;
  post[outcome].wave = mp_plane_wave(post[outcome].wave);
  return SuperposedState(std::move(post));
}

AfterMeasurement settle(const FreeWaveParams& wave, bool record) {
  AfterMeasurement out;
  out.recorded = record;
  if (record) return out;
  FreeWaveParams emitted = wave;
  emitted.branch = Branch::Outgoing;
  out.speed = wave.speed;
  out.rate = wave.rate;
  out.outgoing = emitted;
  return out;
}

CompositeState::CompositeState(std::vector<ProductTerm> terms, bool projected)
    : terms_(std::move(terms)), projected_(projected) {
  if (terms_.empty()) throw InvalidInput("composite state needs at least one term");
  double norm = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    norm += std::norm(terms_[i].amplitude);
    for (std::size_t j = 0; j < i; ++j) {
      if (terms_[i].pointer.reading == terms_[j].pointer.reading) {
        throw InvalidInput("pointer states " + std::to_string(j) + " and " + std::to_string(i) +
                           " share reading " + std::to_string(terms_[i].pointer.reading) +
                           " and are not orthogonal");
      }
    }
  }
  if (std::abs(norm - 1.0) > SuperposedState::kNormTolerance) {
    throw InvalidInput("composite amplitudes are not normalized (sum |a|^2 = " +
                       std::to_string(norm) + ")");
  }
}

double CompositeState::overlap(std::size_t i, std::size_t j) const {
  return terms_.at(i).pointer.reading == terms_.at(j).pointer.reading ? 1.0 : 0.0;
}

CompositeState tensor_compose(std::span<const FreeWaveParams> systems,
                              std::span<const PointerState> pointers,
                              std::span<const Complex> amplitudes) {
  if (systems.size() != pointers.size() || systems.size() != amplitudes.size()) {
    throw InvalidInput("tensor_compose needs equal numbers of systems, pointers and amplitudes");
  }
  std::vector<ProductTerm> terms;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    terms.push_back({amplitudes[i], systems[i], pointers[i]});
  }
  return CompositeState(std::move(terms));
}

Complex product_wave(const ProductTerm& term, double x, double q, double t) {
  return psi_free(term.system, x, t) * psi_free(term.pointer.wave, q, t);
}

Complex product_eigenvalue(Observable a, Observable b, const ProductTerm& term,
                           SpaceTimePoint system_at, SpaceTimePoint pointer_at) {
  const Complex lambda = apply_observable(a, term.system, system_at).value;
  const Complex eta = apply_observable(b, term.pointer.wave, pointer_at).value;
  return lambda * eta;
}

double composite_residual(const ProductTerm& term, const Grid1D& x_grid, const Grid1D& q_grid,
                          double v1, double v2) {
  const FreeWaveParams& sys = term.system;
  const FreeWaveParams& ptr = term.pointer.wave;
  if (sys.constants.hbar != ptr.constants.hbar) {
    throw InvalidInput("system and pointer must share hbar");
  }
  require_finite(v1, "V1");
  require_finite(v2, "V2");
  const double hbar = sys.constants.hbar;
  const double k1 = hbar * hbar / (2.0 * sys.constants.mass);
  const double k2 = hbar * hbar / (2.0 * ptr.constants.mass);
  const double base = 1e-3;
  const double hx = base / std::max(1.0, log_derivative_scale(sys, true));
  const double hq = base / std::max(1.0, log_derivative_scale(ptr, true));
  const double ht =
      base / std::max(1.0, log_derivative_scale(sys, false) + log_derivative_scale(ptr, false));
  const double t = x_grid.t;
  const int levels = 2;
  const Complex i(0.0, 1.0);

  double worst = 0.0;
  for (double x : x_grid.points()) {
    for (double q : q_grid.points()) {
      const Complex theta = product_wave(term, x, q, t);
      const Complex d_t =
          diff::central([&](double tt) { return product_wave(term, x, q, tt); }, t, ht, 1, levels);
      const Complex d_xx =
          diff::central([&](double xx) { return product_wave(term, xx, q, t); }, x, hx, 2, levels);
      const Complex d_qq =
          diff::central([&](double qq) { return product_wave(term, x, qq, t); }, q, hq, 2, levels);
      const Complex r = i * hbar * d_t + k1 * d_xx + k2 * d_qq - (v1 + v2) * theta;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

CompositeState von_neumann_project(const CompositeState& state, std::size_t outcome,
                                   const MeasurementEvent& event) {
  if (outcome >= state.size()) {
    throw InvalidInput("outcome " + std::to_string(outcome) + " out of range");
  }
  require_arrival_of(state[outcome].system, event);
  std::vector<ProductTerm> post(state.terms().begin(), state.terms().end());
  for (std::size_t i = 0; i < post.size(); ++i) post[i].amplitude = i == outcome ? 1.0 : 0.0;
  post[outcome].system = mp_plane_wave(post[outcome].system);
  post[outcome].pointer.wave = mp_plane_wave(post[outcome].pointer.wave);
  return CompositeState(std::move(post), true);
}

DensityMatrix mixture_density(std::span<const CompositeState> states,
                              std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw InvalidInput("mixture needs one weight per state");
  }
  double total = 0.0;
  for (double w : weights) {
    require_finite(w, "weight");
    if (w < 0.0) throw InvalidInput("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("mixture weights sum to " + std::to_string(total) + ", not 1");
  }

  std::size_t dim = 0;
  for (const auto& s : states) {
    for (const auto& term : s.terms()) dim = std::max(dim, term.pointer.reading + 1);
  }
  std::vector<std::optional<FreeWaveParams>> system_of(dim);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(n);
    for (const auto& term : states[k].terms()) {
      auto& known = system_of[term.pointer.reading];
      if (known && !(*known == term.system)) {
        throw InvalidInput("states disagree on the system wave paired with reading " +
                           std::to_string(term.pointer.reading));
      }
      known = term.system;
      ket(static_cast<Eigen::Index>(term.pointer.reading)) = term.amplitude;
    }
    rho += weights[k] * (ket * ket.adjoint());
  }
  return DensityMatrix(std::move(rho));
}

AverageComparison compare_averages(const CompositeState& state,
                                   std::span<const Complex> eigenvalues) {
  if (eigenvalues.size() != state.size()) {
    throw InvalidInput("need one eigenvalue per composite term");
  }
  AverageComparison out;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double w = std::norm(state[i].amplitude);
    out.entangled_avg += w * eigenvalues[i];
    out.reduced_avg += w * eigenvalues[i].real();
  }
  return out;
}

nlohmann::ordered_json EnsembleReport::to_json() const {
  nlohmann::ordered_json j;
  j["n_trials"] = n_trials;
  j["seed"] = seed;
  j["workers"] = workers;
  j["counts"] = counts;
  j["frequencies"] = frequencies;
  j["expected"] = expected;
  j["z_scores"] = z_scores;
  j["chi_square"] = chi_square;
  j["degrees_of_freedom"] = degrees_of_freedom;
  j["p_value"] = p_value;
  return j;
}

void EnsembleReport::write_csv(std::ostream& out) const {
  out << "outcome,count,frequency,expected,z_score\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out << i << ',' << counts[i] << ',' << format_number(frequencies[i]) << ','
        << format_number(expected[i]) << ',' << format_number(z_scores[i]) << '\n';
  }
}

EnsembleReport run_ensemble(const SuperposedState& state, std::uint64_t n_trials,
                            std::uint64_t seed, std::size_t workers) {
  if (n_trials == 0) throw InvalidInput("ensemble needs at least one trial");
  if (workers == 0) throw InvalidInput("ensemble needs at least one worker");
  const std::size_t n = state.size();

  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n, 0));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::uint64_t share =
          n_trials / workers + (w < n_trials % workers ? std::uint64_t{1} : std::uint64_t{0});
      pool.emplace_back([&state, &partial, seed, w, share] {
        RandomStream rng(seed, w);
        auto& counts = partial[w];
        for (std::uint64_t trial = 0; trial < share; ++trial) ++counts[sample_outcome(state, rng)];
      });
    }
  }

  EnsembleReport r;
  r.n_trials = n_trials;
  r.seed = seed;
  r.workers = workers;
  r.counts.assign(n, 0);
  for (const auto& c : partial) {
    for (std::size_t i = 0; i < n; ++i) r.counts[i] += c[i];
  }

  const double total = static_cast<double>(n_trials);
  std::size_t populated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::norm(state[i].amplitude);
    const double count = static_cast<double>(r.counts[i]);
    r.expected.push_back(p);
    r.frequencies.push_back(count / total);
    const double var = total * p * (1.0 - p);
    r.z_scores.push_back(var > 0.0 ? (count - total * p) / std::sqrt(var) : 0.0);
    if (p > 0.0) {
      r.chi_square += (count - total * p) * (count - total * p) / (total * p);
      ++populated;
    }
  }
  r.degrees_of_freedom = populated > 0 ? populated - 1 : 0;
  r.p_value = r.degrees_of_freedom > 0
                  ? boost::math::gamma_q(0.5 * static_cast<double>(r.degrees_of_freedom),
                                         0.5 * r.chi_square)
                  : 1.0;
  return r;
}

}  // namespace probwave
