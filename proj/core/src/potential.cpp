#include "probwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "probwave/derivative.hpp"
#include "probwave/errors.hpp"
#include "probwave/quadrature.hpp"

namespace probwave {
namespace {

double branch_sign(Branch b) { return b == Branch::Incoming ? 1.0 : -1.0; }

double inverse_speed_integral(const PotentialSpec& spec, double a, double b) {
  quad::AdaptiveOptions opt;
  opt.abs_tol = 1e-15;
  opt.rel_tol = 1e-13;
  return quad::integrate(
      [&](double x) {
        const double v = spec.speed_at(x);
        if (!(v > 0.0)) {
          throw InvalidInput("local speed v(x) must be positive; v(" + std::to_string(x) +
                             ") = " + std::to_string(v));
        }
        return 1.0 / v;
      },
      a, b, opt);
}

}  // namespace

Table2 read_table(std::istream& in) {
  Table2 table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x = 0.0;
    double y = 0.0;
    if (!(row >> x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InvalidInput("table line " + std::to_string(line_no) + ": expected a number");
    }
    if (!(row >> y)) {
      throw InvalidInput("table line " + std::to_string(line_no) + ": expected two columns");
    }
    std::string rest;
    if (row >> rest) {
      throw InvalidInput("table line " + std::to_string(line_no) + ": more than two columns");
    }
    table.x.push_back(x);
    table.y.push_back(y);
  }
  return table;
}

PotentialSpec::PotentialSpec(std::vector<double> x, std::vector<double> potential,
                             std::vector<double> kx, double rate, double omega,
                             const PhysicalConstants& constants,
                             std::optional<double> measurement_point)
    : x_(std::move(x)), rate_(rate), omega_(omega), constants_(constants) {
  constants_.validate();
  require_finite(rate_, "rate");
  require_finite(omega_, "omega");
  if (rate_ < 0.0) throw InvalidInput("envelope rate must be non-negative");
  if (x_.size() < kMinSamples) {
    throw InvalidInput("potential spec needs at least " + std::to_string(kMinSamples) +
                       " samples");
  }
  if (potential.size() != x_.size() || kx.size() != x_.size()) {
    throw InvalidInput("x, V and k sample counts differ");
  }
  for (double k : kx) {
    require_finite(k, "k sample");
    if (k <= 0.0) throw InvalidInput("k(x) samples must be positive so that v(x) > 0");
  }
  v_pot_ = CubicSpline(x_, potential);
  k_ = CubicSpline(x_, kx);
  x_mp_ = measurement_point.value_or(x_.front());
  require_finite(x_mp_, "measurement point");
  if (x_mp_ < x_.front() || x_mp_ > x_.back()) {
    throw InvalidInput("measurement point lies outside the sampled domain");
  }
  build_travel_times();
}

void PotentialSpec::build_travel_times() {
  travel_.assign(x_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    travel_[i + 1] = travel_[i] + inverse_speed_integral(*this, x_[i], x_[i + 1]);
  }
}

PotentialSpec PotentialSpec::from_tables(std::istream& potential_table, std::istream& k_table,
                                         double rate, double omega,
                                         const PhysicalConstants& constants,
                                         std::optional<double> measurement_point) {
  const Table2 vt = read_table(potential_table);
  const Table2 kt = read_table(k_table);
  if (vt.x.size() < 2) throw InvalidInput("potential table needs at least two rows");
  const CubicSpline v_interp(vt.x, vt.y);
  std::vector<double> v_on_k;
  v_on_k.reserve(kt.x.size());
  for (double x : kt.x) v_on_k.push_back(v_interp(x));
  return PotentialSpec(kt.x, std::move(v_on_k), kt.y, rate, omega, constants,
                       measurement_point);
}

PotentialSpec PotentialSpec::with_measurement_point(double x) const {
  require_finite(x, "measurement point");
  if (x < x_.front() || x > x_.back()) {
    throw InvalidInput("measurement point lies outside the sampled domain");
  }
  PotentialSpec copy = *this;
  copy.x_mp_ = x;
  return copy;
}

PotentialSpec PotentialSpec::with_rate(double rate) const {
  require_finite(rate, "rate");
  if (rate < 0.0) throw InvalidInput("envelope rate must be non-negative");
  PotentialSpec copy = *this;
  copy.rate_ = rate;
  return copy;
}

double arrival_time(const PotentialSpec& spec, double x) {
  require_finite(x, "x");
  const auto xs = spec.x_samples();
  const double slack = 1e-12 * std::max(1.0, xs.back() - xs.front());
  if (x < xs.front() - slack || x > xs.back() + slack) {
    throw InvalidInput("x = " + std::to_string(x) + " is outside the sampled domain");
  }
  x = std::clamp(x, xs.front(), xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = std::min<std::size_t>(
      it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1, xs.size() - 2);
  return spec.sample_travel_times()[i] + inverse_speed_integral(spec, xs[i], x);
}

bool in_branch_region(const PotentialSpec& spec, Branch branch, double x, double t) {
  const double arrival = arrival_time(spec, x);
  const double slack = 1e-12 * std::max({1.0, std::abs(t), std::abs(arrival)});
  return branch == Branch::Incoming ? t <= arrival + slack : t >= arrival - slack;
}

namespace {

struct PotentialEval {
  double arrival;
  double prefactor_sq;  // k_mp / |k(x)|
};

PotentialEval evaluate(const PotentialSpec& spec, Branch branch, double x, double t) {
  require_finite(t, "t");
  const double arrival = arrival_time(spec, x);
  const double slack = 1e-12 * std::max({1.0, std::abs(t), std::abs(arrival)});
  const bool ok = branch == Branch::Incoming ? t <= arrival + slack : t >= arrival - slack;
  if (!ok) {
    throw RegionError(std::string(to_string(branch)) + " potential wave evaluated at x = " +
                      std::to_string(x) + ", t = " + std::to_string(t) +
                      " on the wrong side of its arrival time " + std::to_string(arrival));
  }
  return {arrival, spec.k_mp() / std::abs(spec.k_at(x))};
}

}  // namespace

Complex psi_potential(const PotentialSpec& spec, Branch branch, double x, double t) {
  const PotentialEval e = evaluate(spec, branch, x, t);
  const double envelope = 0.5 * spec.rate() * branch_sign(branch) * (t - e.arrival);
  const double phase = spec.phase_integral(x) - spec.omega() * t;
  return std::sqrt(e.prefactor_sq) * std::exp(Complex(envelope, phase));
}

double prob_density_potential(const PotentialSpec& spec, Branch branch, double x, double t) {
  const PotentialEval e = evaluate(spec, branch, x, t);
  return e.prefactor_sq * std::exp(spec.rate() * branch_sign(branch) * (t - e.arrival));
}

double continuity_residual(const PotentialSpec& spec, Branch branch, const Grid1D& grid,
                           const ContinuityOptions& opt) {
  grid.validate();
  if (!(opt.h > 0.0)) throw InvalidInput("finite-difference step must be positive");
  const double h = opt.h;
  if (grid.x_min - h < spec.x_start() || grid.x_max + h > spec.x_end()) {
    throw InvalidInput("continuity grid and stencil must lie inside the sampled domain");
  }

  const auto xs = grid.points();
  for (double x : xs) {
    const double margin = branch_sign(branch) * (arrival_time(spec, x) - grid.t);
    const double guard = 3.0 * std::max(h, (grid.spacing() + h) / spec.speed_at(x));
    if (margin < guard) {
      throw RegionError("continuity grid crosses (or comes within the guard band of) the "
                        "measurement point at x = " + std::to_string(x));
    }
  }

  double worst = 0.0;
  for (double x : xs) {
    const double dpdt = diff::central(
        [&](double tt) { return prob_density_potential(spec, branch, x, tt); }, grid.t, h, 1,
        opt.richardson_levels);
    const double dflux = diff::central(
        [&](double xx) { return prob_density_potential(spec, branch, xx, grid.t) * spec.speed_at(xx); },
        x, h, 1, opt.richardson_levels);
    worst = std::max(worst, std::abs(dpdt + dflux));
  }
  return worst;
}

MpLimitReport mp_limit_check(const PotentialSpec& spec, double x, double mp_rate) {
  require_finite(mp_rate, "mp_rate");
  const PotentialSpec at = spec.with_measurement_point(x);
  const double t = arrival_time(at, x);

  MpLimitReport report;
  report.prefactor_at_mp = std::sqrt(at.k_mp() / std::abs(at.k_at(x)));
  report.density_at_mp = prob_density_potential(at, Branch::Incoming, x, t);
  const Complex psi = psi_potential(at, Branch::Incoming, x, t);
  const Complex plane = std::exp(Complex(0.0, at.phase_integral(x) - at.omega() * t));
  report.plane_wave_residual = std::abs(psi - plane);
  report.D_equals_k_mp = std::abs(report.prefactor_at_mp - 1.0) <= 1e-10 &&
                         std::abs(report.density_at_mp - 1.0) <= 1e-10 &&
                         report.plane_wave_residual <= 1e-10;

  // Density at the measurement point must stay at 1 while the particle
  // is there; with the rate forced to mp_rate it moves as exp(mp_rate (t - T)).
  const PotentialSpec forced = at.with_rate(mp_rate);
  const double dt = 1e-3;
  const double before = prob_density_potential(forced, Branch::Incoming, x, t - dt);
  report.R_zero_consistent = std::abs(before - report.density_at_mp) <= 1e-10;
  return report;
}

}  // namespace probwave
