#include "probwave/spectral.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "probwave/derivative.hpp"
#include "probwave/errors.hpp"
#include "probwave/quadrature.hpp"

namespace probwave {
namespace {

constexpr double kMpTolerance = 1e-9;
constexpr std::size_t kLaguerreOrder = 24;

const Complex kI(0.0, 1.0);
const Complex kDiagonal = Complex(1.0, 1.0) / std::numbers::sqrt2;

void check_state(const FreeWaveParams& s) {
  s.constants.validate();
  require_finite(s.k, "k");
  require_finite(s.omega, "omega");
  require_finite(s.rate, "rate");
  require_finite(s.speed, "speed");
  if (s.speed <= 0.0) throw InvalidInput("speed must be positive");
}

bool on_arrival_line(const FreeWaveParams& s, SpaceTimePoint at) {
  return std::abs(at.x - s.speed * at.t) <= kMpTolerance * std::max(1.0, std::abs(at.x));
}

using Fn = std::function<Complex(Complex)>;

// Derivatives along the canonical direction with a step scaled to the wave number.
Complex d1(const Fn& f, Complex z, double scale) {
  return diff::central(f, z, 0.02 / scale * kDiagonal, 1, 3);
}
Complex d2(const Fn& f, Complex z, double scale) {
  return diff::central(f, z, 0.05 / scale * kDiagonal, 2, 3);
}

// p^-1 g (z) = (1/hbar) int_0^inf g(z + i s) ds, which decays for waves with
// k > 0. With s = u/k the integrand becomes g(z + i u/k) e^u against e^-u.
Complex inverse_momentum(const Fn& g, Complex z, double k, double hbar) {
  const auto& rule = quad::gauss_laguerre(kLaguerreOrder);
  Complex sum{};
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double u = rule.nodes[j];
    sum += rule.weights[j] * std::exp(u) * g(z + kI * (u / k));
  }
  return sum / (hbar * k);
}

}  // namespace

EigenRecord apply_observable(Observable obs, const FreeWaveParams& state, SpaceTimePoint at,
                             std::optional<double> t0) {
  check_state(state);
  require_finite(at.x, "x");
  require_finite(at.t, "t");
  const double hbar = state.constants.hbar;
  const double s = state.branch == Branch::Incoming ? 1.0 : -1.0;

  EigenRecord rec;
  rec.observable = obs;
  switch (obs) {
    case Observable::H:
      rec.value = {hbar * state.omega, s * hbar * state.rate / 2.0};
      break;
    case Observable::Hdagger:
      rec.value = {hbar * state.omega, -s * hbar * state.rate / 2.0};
      break;
    case Observable::P:
      rec.value = {hbar * state.k, s * hbar * state.rate / (2.0 * state.speed)};
      break;
    case Observable::S: {
      if (!t0) throw InvalidInput("S needs a time t0");
      require_finite(*t0, "t0");
      if (!on_arrival_line(state, at) && !(*t0 < at.x / state.speed)) {
        throw InvalidInput("S needs t0 < x / v");
      }
      const Complex p(hbar * state.k, s * hbar * state.rate / (2.0 * state.speed));
      rec.value = *t0 * p / state.constants.mass;
      break;
    }
    case Observable::Xc:
    case Observable::Tc:
      throw InvalidInput("observable " + std::string(to_string(obs)) +
                         " has no eigenvalue on the wave family");
    default:
      throw InvalidInput("unknown observable tag");
  }
  if (on_arrival_line(state, at)) {
    rec.value = {rec.value.real(), 0.0};
    rec.at_mp = true;
  }
  return rec;
}

EigenRecord hermitize_at_mp(const EigenRecord& record, const MeasurementEvent& event) {
  if (!event.satisfies_arrival()) {
    throw InvalidInput("event at x = " + std::to_string(event.x) + ", t = " +
                       std::to_string(event.t) + " is not at the measurement point");
  }
  EigenRecord out = record;
  out.value = {record.value.real(), 0.0};
  out.at_mp = true;
  return out;
}

ComplexCoordinate ComplexCoordinate::on_canonical_line(double x, double t) {
  require_finite(x, "x");
  require_finite(t, "t");
  return {Complex(x, x), Complex(t, t), true};
}

ComplexCoordinate ComplexCoordinate::free(Complex x_c, Complex t_c) {
  return {x_c, t_c, false};
}

Complex psi_complex(const FreeWaveParams& state, const ComplexCoordinate& coord) {
  if (coord.canonical) {
    const double tol = 1e-12;
    const bool x_ok = std::abs(coord.x_c.imag() - coord.x_c.real()) <=
                      tol * std::max(1.0, std::abs(coord.x_c.real()));
    const bool t_ok = std::abs(coord.t_c.imag() - coord.t_c.real()) <=
                      tol * std::max(1.0, std::abs(coord.t_c.real()));
    if (!x_ok || !t_ok) {
      throw InvalidInput("coordinate flagged canonical is off the line im = re");
    }
  }
  return std::exp(kI * state.k * coord.x_c - kI * state.omega * coord.t_c);
}

Complex commutator_check(CommutatorPair pair, const FreeWaveParams& state,
                         std::span<const ComplexCoordinate> probe_grid) {
  check_state(state);
  if (probe_grid.empty()) throw InvalidInput("commutator probe grid is empty");
  const double hbar = state.constants.hbar;
  const double m = state.constants.mass;
  const double scale = std::max(1.0, std::abs(state.k));
  if (pair == CommutatorPair::TcHc && !(state.k > 0.0)) {
    throw InvalidInput("the time operator needs k > 0");
  }

  Complex total{};
  for (const auto& probe : probe_grid) {
    const Complex tc = probe.t_c;
    const Fn psi = [&](Complex z) { return psi_complex(state, ComplexCoordinate::free(z, tc)); };
    const Complex here = psi(probe.x_c);
    if (std::abs(here) < 1e-300) {
      throw InvalidInput("probe point where |psi| underflows");
    }

    const Fn momentum = [&](Complex z) { return -kI * hbar * d1(psi, z, scale); };
    Complex commutator;
    if (pair == CommutatorPair::XcPc) {
      const Fn x_psi = [&](Complex z) { return z * psi(z); };
      commutator = probe.x_c * momentum(probe.x_c) - (-kI * hbar * d1(x_psi, probe.x_c, scale));
    } else {
      const double kinetic = hbar * hbar / (2.0 * m);
      auto hamiltonian = [&](const Fn& g) -> Fn {
        return [g, kinetic, scale](Complex z) { return -kinetic * d2(g, z, scale); };
      };
      auto time_op = [&](const Fn& g) -> Fn {
        return [g, k = state.k, hbar, m](Complex z) {
          const Fn zg = [&g](Complex w) { return w * g(w); };
          return 0.5 * m * (z * inverse_momentum(g, z, k, hbar) + inverse_momentum(zg, z, k, hbar));
        };
      };
      const Fn t_of_h = time_op(hamiltonian(psi));
      const Fn h_of_t = hamiltonian(time_op(psi));
      commutator = t_of_h(probe.x_c) - h_of_t(probe.x_c);
    }
    total += commutator / here;
  }
  return total / static_cast<double>(probe_grid.size());
}

ComplexResidual complex_schrodinger_residual(const FreeWaveParams& state,
                                             std::span<const ComplexCoordinate> probe_grid) {
  check_state(state);
  const double hbar = state.constants.hbar;
  const double kinetic = hbar * hbar / (2.0 * state.constants.mass);
  const double xs = std::max(1.0, std::abs(state.k));
  const double ts = std::max(1.0, std::abs(state.omega));
  ComplexResidual out;
  for (const auto& probe : probe_grid) {
    const Fn in_x = [&](Complex z) {
      return psi_complex(state, ComplexCoordinate::free(z, probe.t_c));
    };
    const Fn in_t = [&](Complex w) {
      return psi_complex(state, ComplexCoordinate::free(probe.x_c, w));
    };
    const Complex lhs = -kinetic * d2(in_x, probe.x_c, xs);
    const Complex rhs = kI * hbar * d1(in_t, probe.t_c, ts);
    const double r = std::abs(lhs - rhs);
    out.max_abs = std::max(out.max_abs, r);
    out.max_relative = std::max(out.max_relative, r / std::abs(in_x(probe.x_c)));
  }
  return out;
}

GalileanPhase galilean_phase(double speed, const PhysicalConstants& constants) {
  constants.validate();
  require_finite(speed, "speed");
  if (speed <= 0.0) throw InvalidInput("speed must be positive");
  const double k = constants.mass * speed / constants.hbar;
  return {k, 0.5 * k * speed};
}

std::array<double, 3> galilean_conditions(const GalileanPhase& phase, double speed,
                                          const PhysicalConstants& constants, double x,
                                          double t) {
  const auto fx_of = [&](double xx) { return phase(xx, t); };
  const auto ft_of = [&](double tt) { return phase(x, tt); };
  const double fx = diff::central(fx_of, x, 1e-2, 1, 2);
  const double fxx = diff::central(fx_of, x, 1e-2, 2, 2);
  const double ft = diff::central(ft_of, t, 1e-2, 1, 2);
  const double hbar = constants.hbar;
  const double m = constants.mass;
  return {hbar / m * fx - speed, fxx, hbar / (2.0 * m) * fx * fx - speed * fx - ft};
}

double probability_field(double s, const FreeWaveParams& params) {
  require_finite(s, "separation");
  if (s < 0.0) throw InvalidInput("separation must be non-negative");
  if (std::abs(params.rate - params.speed) > 1e-12 * std::max(1.0, params.speed)) {
    throw InvalidInput("probability field needs a normalized state (R = v)");
  }
  return std::exp(-s);
}

}  // namespace probwave
