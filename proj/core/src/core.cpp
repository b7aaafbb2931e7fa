#include "probwave/core.hpp"

#include <cmath>
#include <string>

#include "probwave/errors.hpp"
#include "probwave/freewave.hpp"

namespace probwave {

void require_finite(double value, std::string_view what) {
  if (!std::isfinite(value)) {
    throw InvalidInput(std::string(what) + " must be finite");
  }
}

void PhysicalConstants::validate() const {
  require_finite(hbar, "hbar");
  require_finite(mass, "mass");
  require_finite(k_boltzmann, "k_boltzmann");
  if (hbar <= 0.0 || mass <= 0.0 || k_boltzmann <= 0.0) {
    throw InvalidInput("physical constants must be strictly positive");
  }
}

std::string_view to_string(Branch b) {
  return b == Branch::Incoming ? "incoming" : "outgoing";
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::H: return "H";
    case Observable::Hdagger: return "Hdagger";
    case Observable::P: return "P";
    case Observable::S: return "S";
    case Observable::Xc: return "Xc";
    case Observable::Tc: return "Tc";
  }
  return "?";
}

double FreeWaveParams::dispersion_defect() const {
  const double hb = constants.hbar;
  const double m = constants.mass;
  return hb * omega + hb * hb * rate * rate / (8.0 * m * speed * speed) -
         hb * hb * k * k / (2.0 * m);
}

FreeWaveParams make_free_state(double speed, double rate,
                               const PhysicalConstants& constants, Branch branch) {
  constants.validate();
  require_finite(speed, "speed");
  require_finite(rate, "rate");
  if (speed <= 0.0) throw InvalidInput("speed must be positive");
  if (rate < 0.0) throw InvalidInput("envelope rate must be non-negative");

  FreeWaveParams p;
  p.k = constants.mass * speed / constants.hbar;
  p.rate = rate;
  p.speed = speed;
  p.branch = branch;
  p.constants = constants;
  p.omega = dispersion_omega(p.k, rate, speed, constants);
  return p;
}

SuperposedState::SuperposedState(std::vector<WaveComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidInput("superposition needs at least one component");
  double norm = 0.0;
  for (const auto& c : components_) {
    require_finite(c.amplitude.real(), "amplitude");
    require_finite(c.amplitude.imag(), "amplitude");
    norm += std::norm(c.amplitude);
  }
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvalidInput("superposition amplitudes are not normalized (sum |a|^2 = " +
                       std::to_string(norm) + ")");
  }
}

std::vector<Complex> SuperposedState::amplitudes() const {
  std::vector<Complex> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.amplitude);
  return out;
}

std::vector<double> SuperposedState::weights() const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(std::norm(c.amplitude));
  return out;
}

bool MeasurementEvent::satisfies_arrival() const {
  return std::abs(x - speed * t) <= tolerance * std::max(1.0, std::abs(x));
}

}  // namespace probwave
