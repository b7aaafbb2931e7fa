#include "probwave/cli/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <string>

#include "probwave/analysis.hpp"
#include "probwave/errors.hpp"
#include "probwave/evolution.hpp"
#include "probwave/freewave.hpp"
#include "probwave/measurement.hpp"
#include "probwave/potential.hpp"
#include "probwave/rng.hpp"
#include "probwave/spectral.hpp"
#include "probwave/sturm_liouville.hpp"

namespace probwave::cli {
namespace {

constexpr std::array<std::string_view, 10> kNames = {
    "free-wave",       "potential-wave", "ensemble",    "decoherence", "entropy",
    "sturm-liouville", "uncertainty",    "contour",     "composite",   "field"};

std::int64_t as_int(std::size_t i) { return static_cast<std::int64_t>(i); }

std::size_t positive_count(Params& p, const std::string& key, std::int64_t fallback,
                           std::int64_t minimum = 1) {
  const std::int64_t v = p.integer(key, fallback);
  if (v < minimum) {
    throw ConfigError("key '" + key + "' must be at least " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + static_cast<double>(i) * (b - a) / static_cast<double>(n - 1);
  }
  return out;
}

Table density_table(const std::string& name, const DensityMatrix& rho) {
  Table t(name, {"i", "j", "rho_re", "rho_im"});
  for (std::size_t i = 0; i < rho.size(); ++i) {
    for (std::size_t j = 0; j < rho.size(); ++j) {
      std::vector<Cell> row{as_int(i), as_int(j)};
      push_complex(row, rho(i, j));
      t.add(std::move(row));
    }
  }
  return t;
}

// Components sqrt(w_i) e^{i phi_i} on free waves with the given speeds and rates.
SuperposedState weighted_state(const std::vector<double>& weights, const std::vector<double>& phases,
                               const std::vector<double>& speeds, const std::vector<double>& rates,
                               const PhysicalConstants& c) {
  const std::size_t n = weights.size();
  if (phases.size() != n || speeds.size() != n || rates.size() != n) {
    throw ConfigError("weights, phases, speeds and rates need one entry per component");
  }
  std::vector<WaveComponent> comps;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw ConfigError("weights must be non-negative");
    comps.push_back({std::polar(std::sqrt(weights[i]), phases[i]),
                     make_free_state(speeds[i], rates[i], c)});
  }
  return SuperposedState(std::move(comps));
}

std::vector<double> filled(std::size_t n, double value) { return std::vector<double>(n, value); }

std::vector<double> default_speeds(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i);
  return v;
}

std::string stage_of(double peak, double mp) {
  const double tol = 1e-9 * std::max(1.0, std::abs(mp));
  if (std::abs(peak - mp) <= tol) return "at-arrival";
  return peak < mp ? "pre-arrival" : "post-crossing";
}

// ---------------------------------------------------------------- free-wave

ScenarioResult free_wave(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const double speed = p.number("speed", 1.0);
  const double rate = p.number("rate", 1.0);
  const bool normalize = p.flag("normalize", false);
  const double mp = p.number("mp", 2.0);
  const auto times = p.list("times", {1.0, 2.0, 3.0});
  const double x_min = p.number("x_min", -2.0);
  const double x_max = p.number("x_max", 6.0);
  const std::size_t points = positive_count(p, "points", 161, 3);
  p.finish("free-wave");

  FreeWaveParams in = make_free_state(speed, rate, cfg.constants);
  if (normalize) in = normalize_state(in);
  FreeWaveParams out = in;
  out.branch = Branch::Outgoing;

  ScenarioResult r;
  bool tails_monotone = true;
  double worst_peak = 0.0;
  auto snapshots = nlohmann::ordered_json::array();
  const auto xs = linspace(x_min, x_max, points);
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double t = times[s];
    const double peak = in.speed * t;
    Table table("snapshot_" + std::to_string(s), {"x", "t", "P", "psi_re", "psi_im"});
    double prev_ahead = 2.0;
    std::vector<double> behind;
    for (double x : xs) {
      const FreeWaveParams& w = x >= peak ? in : out;
      const double density = prob_density_free(w, x, t);
      std::vector<Cell> row{x, t, density};
      push_complex(row, psi_free(w, x, t));
      table.add(std::move(row));
      if (x >= peak) {
        tails_monotone = tails_monotone && density <= prev_ahead;
        prev_ahead = density;
      } else {
        behind.push_back(density);
      }
    }
    for (std::size_t i = 1; i < behind.size(); ++i) {
      tails_monotone = tails_monotone && behind[i] >= behind[i - 1];
    }
    worst_peak = std::max(worst_peak, std::abs(prob_density_free(in, peak, t) - 1.0));
    snapshots.push_back({{"t", t}, {"peak_x", peak}, {"stage", stage_of(peak, mp)},
                         {"file", table.name}});
    r.tables.push_back(std::move(table));
  }
  r.summary["k"] = in.k;
  r.summary["omega"] = in.omega;
  r.summary["rate"] = in.rate;
  r.summary["snapshots"] = snapshots;

  const double t0 = times.empty() ? 0.0 : times.front();
  const double front = in.speed * t0;
  const double span = std::max(1.0, in.speed);
  const Grid1D ahead{front + span, front + 3.0 * span, 21, t0};
  const Grid1D behind_grid{front - 3.0 * span, front - span, 21, t0};
  ResidualOptions fd;
  fd.method = DerivativeMethod::FiniteDifference;
  r.checks.push_back(check_below("schrodinger_residual_analytic", schrodinger_residual(in, ahead), 1e-12));
  r.checks.push_back(check_below("schrodinger_residual_fd", schrodinger_residual(in, ahead, fd), 1e-6));
  r.checks.push_back(check_below("schrodinger_residual_outgoing",
                                 schrodinger_residual(out, behind_grid), 1e-12));
  r.checks.push_back(check_below("density_at_peak", worst_peak, 1e-12));
  r.checks.push_back(check_true("tails_decay_away_from_peak", tails_monotone));
  if (in.rate > 0.0) {
    const double closed = total_probability(in);
    const double quad = total_probability_quadrature(in, t0);
    r.summary["total_probability"] = closed;
    r.checks.push_back(check_below("total_probability_quadrature", (quad - closed) / closed, 1e-8));
  }
  return r;
}

// ----------------------------------------------------------- potential-wave

PotentialSpec load_potential(Params& p, const PhysicalConstants& c, double& mp_out) {
  const std::string k_table = p.text("k_table", "");
  const std::string v_table = p.text("potential_table", "");
  const double rate = p.number("rate", 1.0);
  std::optional<double> omega;
  if (p.contains("omega")) omega = p.number("omega", 0.0);

  std::optional<PotentialSpec> spec;
  if (!k_table.empty()) {
    if (v_table.empty()) throw ConfigError("k_table needs a potential_table");
    std::ifstream kin(k_table);
    std::ifstream vin(v_table);
    if (!kin) throw ConfigError("cannot read " + k_table);
    if (!vin) throw ConfigError("cannot read " + v_table);
    spec.emplace(PotentialSpec::from_tables(vin, kin, rate, 0.0, c));
  } else {
    const double k0 = p.number("k0", 1.0);
    const double k1 = p.number("k1", 0.0);
    const double x_start = p.number("x_start", 0.0);
    const double x_end = p.number("x_end", 4.0);
    const std::size_t samples = positive_count(p, "samples", 81, PotentialSpec::kMinSamples);
    const auto xs = linspace(x_start, x_end, samples);
    std::vector<double> k(samples);
    for (std::size_t i = 0; i < samples; ++i) k[i] = k0 + k1 * xs[i];
    spec.emplace(xs, std::vector<double>(samples, 0.0), k, rate, 0.0, c);
  }
  const double mp = p.number("mp", 0.5 * (spec->x_start() + spec->x_end()));
  PotentialSpec at = spec->with_measurement_point(mp);
  if (!omega) omega = dispersion_omega(at.k_mp(), rate, at.speed_at(mp), c);
  mp_out = mp;
  const auto x = at.x_samples();
  std::vector<double> v(x.size());
  std::vector<double> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = at.potential_at(x[i]);
    k[i] = at.k_at(x[i]);
  }
  return PotentialSpec({x.begin(), x.end()}, v, k, rate, *omega, c, mp);
}

ScenarioResult potential_wave(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  double mp = 0.0;
  const PotentialSpec spec = load_potential(p, cfg.constants, mp);
  const double t_mp = arrival_time(spec, mp);
  const auto times = p.list("times", {0.5 * t_mp, t_mp, 1.5 * t_mp});
  const std::size_t points = positive_count(p, "points", 161, 3);
  p.finish("potential-wave");

  ScenarioResult r;
  const auto xs = linspace(spec.x_start(), spec.x_end(), points);
  Table profile("profile", {"x", "k", "v", "V", "arrival_time"});
  for (double x : xs) {
    profile.add({x, spec.k_at(x), spec.speed_at(x), spec.potential_at(x), arrival_time(spec, x)});
  }
  r.tables.push_back(std::move(profile));

  auto snapshots = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double t = times[s];
    Table table("snapshot_" + std::to_string(s), {"x", "t", "P", "psi_re", "psi_im"});
    for (double x : xs) {
      const Branch b = t <= arrival_time(spec, x) ? Branch::Incoming : Branch::Outgoing;
      std::vector<Cell> row{x, t, prob_density_potential(spec, b, x, t)};
      push_complex(row, psi_potential(spec, b, x, t));
      table.add(std::move(row));
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(t_mp));
    const std::string stage = std::abs(t - t_mp) <= tol ? "at-arrival"
                              : t < t_mp                ? "pre-arrival"
                                                        : "post-crossing";
    snapshots.push_back({{"t", t}, {"stage", stage}, {"file", table.name}});
    r.tables.push_back(std::move(table));
  }
  r.summary["measurement_point"] = mp;
  r.summary["arrival_time_at_mp"] = t_mp;
  r.summary["omega"] = spec.omega();
  r.summary["snapshots"] = snapshots;

  const double a = spec.x_start();
  const double len = spec.x_end() - a;
  const Grid1D ahead{a + 0.4 * len, a + 0.9 * len, 26, arrival_time(spec, a + 0.2 * len)};
  const Grid1D behind{a + 0.1 * len, a + 0.6 * len, 26, arrival_time(spec, a + 0.8 * len)};
  r.checks.push_back(check_below("continuity_incoming",
                                 continuity_residual(spec, Branch::Incoming, ahead), 1e-6));
  r.checks.push_back(check_below("continuity_outgoing",
                                 continuity_residual(spec, Branch::Outgoing, behind), 1e-6));
  const auto limit = mp_limit_check(spec, mp);
  r.checks.push_back(check_true("mp_prefactor_is_one", limit.D_equals_k_mp, limit.prefactor_at_mp));
  r.checks.push_back(check_true("mp_rate_zero_consistent", limit.R_zero_consistent));
  r.checks.push_back(check_below("mp_plane_wave_residual", limit.plane_wave_residual, 1e-10));
  r.checks.push_back(check_below("density_at_mp", limit.density_at_mp - 1.0, 1e-10));
  return r;
}

// ----------------------------------------------------------------- ensemble

ScenarioResult ensemble(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const auto weights = p.list("weights", {0.5, 0.3, 0.2});
  const auto phases = p.list("phases", filled(weights.size(), 0.0));
  const auto speeds = p.list("speeds", default_speeds(weights.size()));
  const auto rates = p.list("rates", filled(weights.size(), 1.0));
  const std::size_t trials = positive_count(p, "trials", 100000);
  const std::size_t workers = positive_count(p, "workers", 4);
  p.finish("ensemble");

  const auto state = weighted_state(weights, phases, speeds, rates, cfg.constants);
  const auto report = run_ensemble(state, trials, cfg.seed, workers);

  ScenarioResult r;
  Table t("ensemble", {"outcome", "count", "frequency", "expected", "z_score"});
  double worst_z = 0.0;
  for (std::size_t i = 0; i < report.counts.size(); ++i) {
    t.add({as_int(i), static_cast<std::int64_t>(report.counts[i]), report.frequencies[i],
           report.expected[i], report.z_scores[i]});
    worst_z = std::max(worst_z, std::abs(report.z_scores[i]));
  }
  r.tables.push_back(std::move(t));
  r.summary = report.to_json();
  r.summary["arrival_order_at_x1"] = arrival_order(state, 1.0);
  r.checks.push_back(check_true("chi_square_p_value", report.p_value > 1e-3, report.p_value));
  r.checks.push_back(check_below("max_abs_z_score", worst_z, 3.0));
  return r;
}

// -------------------------------------------------------------- decoherence

ScenarioResult decoherence(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const auto weights = p.list("weights", {0.5, 0.3, 0.2});
  const auto phases = p.list("phases", filled(weights.size(), 0.0));
  const auto speeds = p.list("speeds", default_speeds(weights.size()));
  const auto rates = p.list("rates", filled(weights.size(), 1.0));
  const double mp = p.number("mp", 6.0);
  p.finish("decoherence");

  const auto state = weighted_state(weights, phases, speeds, rates, cfg.constants);
  const double t_red = reduction_time(state, mp);
  const auto amplitudes = state.amplitudes();
  const auto eigs = energy_eigenvalues(state);
  const auto grown = evolve_density(DensityMatrix::pure(amplitudes), eigs, t_red, cfg.constants);
  const DensityMatrix pure_now(Eigen::MatrixXcd(grown.matrix() / grown.trace().real()));
  const auto mixed = reduce_to_mixture(state);

  RandomStream rng(cfg.seed, 0);
  const std::size_t outcome = sample_outcome(state, rng);
  const double v_out = state[outcome].wave.speed;
  const MeasurementEvent event{mp, mp / v_out, v_out};
  const auto post = dirac_project(state, outcome, event);

  ScenarioResult r;
  r.tables.push_back(density_table("density_pure", pure_now));
  r.tables.push_back(density_table("density_mixed", mixed));
  Table post_table("post_state", {"component", "amplitude_re", "amplitude_im", "speed", "rate"});
  for (std::size_t i = 0; i < post.size(); ++i) {
    std::vector<Cell> row{as_int(i)};
    push_complex(row, post[i].amplitude);
    row.emplace_back(post[i].wave.speed);
    row.emplace_back(post[i].wave.rate);
    post_table.add(std::move(row));
  }
  r.tables.push_back(std::move(post_table));

  double fourth = 0.0;
  double expected_norm = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double w = std::norm(amplitudes[i]);
    fourth += w * w;
    expected_norm += w * std::exp(state[i].wave.rate * t_red);
  }
  double off_diagonal = 0.0;
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    for (std::size_t j = 0; j < mixed.size(); ++j) {
      if (i != j) off_diagonal = std::max(off_diagonal, std::abs(mixed(i, j)));
    }
  }
  const double purity_pure = purity(pure_now);
  const double purity_mixed = purity(mixed);
  r.summary["reduction_time"] = t_red;
  r.summary["purity_before"] = purity_pure;
  r.summary["purity_after"] = purity_mixed;
  r.summary["outcome"] = outcome;
  r.summary["trace_growth"] = grown.trace().real();

  r.checks.push_back(check_below("purity_before_is_one", purity_pure - 1.0, 1e-12));
  r.checks.push_back(check_below("purity_after_is_sum_of_fourth_powers", purity_mixed - fourth, 1e-12));
  r.checks.push_back(check_true("purity_after_below_one_when_mixed",
                                fourth == 1.0 || purity_mixed < 1.0, purity_mixed));
  r.checks.push_back(check_below("coherences_removed", off_diagonal, 1e-300));
  r.checks.push_back(check_below("reduction_preserves_trace", std::abs(mixed.trace() - 1.0), 1e-12));
  r.checks.push_back(check_below("norm_growth",
                                 (evolve_state(state, t_red).norm_squared - expected_norm) / expected_norm,
                                 1e-10));
  r.checks.push_back(check_true("projection_idempotent", dirac_project(post, outcome, event) == post));
  r.checks.push_back(check_below("post_state_density_at_mp",
                                 prob_density_free(post[outcome].wave, event.x, event.t) - 1.0, 1e-12));
  return r;
}

// ------------------------------------------------------------------ entropy

ScenarioResult entropy(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const double speed = p.number("speed", 1.0);
  const double t_max = p.number("t_max", 2.0);
  const std::size_t steps = positive_count(p, "steps", 20);
  const auto measured = p.list("measure_at", {t_max});
  p.finish("entropy");

  const SuperposedState state(
      {{Complex(1.0, 0.0), normalize_state(make_free_state(speed, speed, cfg.constants))}});
  const auto times = linspace(0.0, t_max, steps + 1);
  const auto e = entropy_trajectory(state, times, cfg.constants, measured);

  ScenarioResult r;
  Table t("entropy", {"t", "S", "measured", "S_after"});
  double worst_slope = 0.0;
  double after_measurement = 0.0;
  const double kv = cfg.constants.k_boltzmann * speed;
  for (std::size_t i = 0; i < times.size(); ++i) {
    t.add({times[i], e.entropy[i], std::int64_t{e.measured[i] ? 1 : 0}, e.entropy_after[i]});
    if (i > 0) {
      const double slope = (e.entropy[i] - e.entropy[i - 1]) / (times[i] - times[i - 1]);
      worst_slope = std::max(worst_slope, std::abs(slope + kv));
    }
    if (e.measured[i]) after_measurement = std::max(after_measurement, std::abs(e.entropy_after[i]));
  }
  r.tables.push_back(std::move(t));
  r.summary["slope"] = -kv;
  r.summary["entropy_at_t_max"] = e.entropy.back();
  r.checks.push_back(check_below("entropy_slope", worst_slope, 1e-10));
  r.checks.push_back(check_below("entropy_at_zero", e.entropy.front(), 1e-300));
  r.checks.push_back(check_below("entropy_at_t_max", e.entropy.back() + kv * t_max, 1e-10));
  r.checks.push_back(check_below("entropy_after_measurement", after_measurement, 1e-300));
  return r;
}

// ---------------------------------------------------------- sturm-liouville

ScenarioResult sturm_liouville(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  SLProblem problem;
  problem.x0 = p.number("x0", 0.0);
  problem.x_end = p.number("x_end", 1.0);
  const double k0 = p.number("k0", 0.0);
  const double k1 = p.number("k1", 0.0);
  const double v0 = p.number("v0", 0.0);
  const double v1 = p.number("v1", 0.0);
  const double v2 = p.number("v2", 0.0);
  problem.n_eigen = positive_count(p, "n_eigen", 4);
  problem.n_points = positive_count(p, "n_points", 2001, 16);
  const std::string backend_name = p.text("backend", "shooting");
  const bool cross_check = p.flag("cross_check", true);
  const double probe = p.number("probe_x", 0.5 * (problem.x0 + problem.x_end));
  p.finish("sturm-liouville");

  if (backend_name != "shooting" && backend_name != "dense") {
    throw ConfigError("backend must be shooting or dense");
  }
  const SlBackend backend = backend_name == "shooting" ? SlBackend::Shooting : SlBackend::DenseMatrix;
  problem.constants = cfg.constants;
  problem.kx = [k0, k1](double x) { return k0 + k1 * x; };
  problem.potential = [v0, v1, v2](double x) { return v0 + v1 * x + v2 * x * x; };

  const auto sol = solve_sturm_liouville(problem, backend);
  std::optional<SLSolution> other;
  if (cross_check) {
    other = solve_sturm_liouville(problem, backend == SlBackend::Shooting ? SlBackend::DenseMatrix
                                                                          : SlBackend::Shooting);
  }
  const bool all_positive = std::all_of(sol.eigenvalues.begin(), sol.eigenvalues.end(),
                                        [](double e) { return e > 0.0; });
  std::vector<double> arrivals;
  if (all_positive && probe > problem.x0) arrivals = discrete_arrival_times(sol, probe);

  ScenarioResult r;
  std::vector<std::string> cols{"n", "energy"};
  if (other) cols.push_back("cross_check_energy");
  if (!arrivals.empty()) cols.push_back("arrival_time");
  Table levels("eigenvalues", cols);
  for (std::size_t n = 0; n < sol.eigenvalues.size(); ++n) {
    std::vector<Cell> row{as_int(n), sol.eigenvalues[n]};
    if (other) row.emplace_back(other->eigenvalues[n]);
    if (!arrivals.empty()) row.emplace_back(arrivals[n]);
    levels.add(std::move(row));
  }
  r.tables.push_back(std::move(levels));

  std::vector<std::string> fcols{"x"};
  for (std::size_t n = 0; n < sol.eigenfunctions.size(); ++n) fcols.push_back("R_" + std::to_string(n));
  Table functions("eigenfunctions", fcols);
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    std::vector<Cell> row{sol.grid[i]};
    for (const auto& f : sol.eigenfunctions) row.emplace_back(f[i]);
    functions.add(std::move(row));
  }
  r.tables.push_back(std::move(functions));
  r.summary["backend"] = backend_name;
  r.summary["eigenvalues"] = sol.eigenvalues;

  double ortho = 0.0;
  for (std::size_t a = 0; a < sol.eigenfunctions.size(); ++a) {
    for (std::size_t b = 0; b < sol.eigenfunctions.size(); ++b) {
      ortho = std::max(ortho, std::abs(eigenfunction_overlap(sol, a, b) - (a == b ? 1.0 : 0.0)));
    }
  }
  r.checks.push_back(check_below("orthonormality", ortho, 1e-8));
  bool increasing = true;
  for (std::size_t n = 1; n < sol.eigenvalues.size(); ++n) {
    increasing = increasing && sol.eigenvalues[n] > sol.eigenvalues[n - 1];
  }
  r.checks.push_back(check_true("eigenvalues_increasing", increasing));
  if (other) {
    double gap = 0.0;
    for (std::size_t n = 0; n < sol.eigenvalues.size(); ++n) {
      gap = std::max(gap, std::abs(sol.eigenvalues[n] - other->eigenvalues[n]) /
                              std::max(1.0, std::abs(sol.eigenvalues[n])));
    }
    r.checks.push_back(check_below("backend_agreement", gap, 1e-6));
  }
  if (k1 == 0.0 && v1 == 0.0 && v2 == 0.0) {
    const double hbar = cfg.constants.hbar;
    const double m = cfg.constants.mass;
    const double len = problem.x_end - problem.x0;
    double gap = 0.0;
    for (std::size_t n = 0; n < sol.eigenvalues.size(); ++n) {
      const double q = (static_cast<double>(n) + 0.5) * std::numbers::pi / len;
      const double e = hbar * hbar * (q * q + k0 * k0) / (2.0 * m) + v0;
      gap = std::max(gap, std::abs(sol.eigenvalues[n] - e) / std::max(1.0, std::abs(e)));
    }
    r.checks.push_back(check_below("closed_form_levels", gap, 1e-6));
  }
  if (!arrivals.empty()) {
    const std::set<double> distinct(arrivals.begin(), arrivals.end());
    r.checks.push_back(check_true("arrival_times_distinct", distinct.size() == arrivals.size()));
  }
  return r;
}

// -------------------------------------------------------------- uncertainty

// Box-Muller on the stream's uniforms.
std::pair<double, double> normal_pair(RandomStream& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return {radius * std::cos(2.0 * std::numbers::pi * u2),
          radius * std::sin(2.0 * std::numbers::pi * u2)};
}

ScenarioResult uncertainty(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const std::size_t n = positive_count(p, "samples", 10000, 2);
  const double mean_re = p.number("mean_re", 0.0);
  const double mean_im = p.number("mean_im", 0.0);
  const double sd_re = p.number("sd_re", 2.0);
  const double sd_im = p.number("sd_im", 1.0);
  const double corr = p.number("correlation", 0.0);
  const double dx = p.number("dx_imag", 1.0);
  const double dp = p.number("dp_imag", 0.5);
  const double rate_ratio = p.number("family_rate_ratio", 1.0);
  p.finish("uncertainty");
  if (std::abs(corr) > 1.0) throw ConfigError("correlation must lie in [-1, 1]");

  RandomStream rng(cfg.seed, 0);
  std::vector<Complex> z(n);
  Table samples("samples", {"re", "im"});
  for (auto& s : z) {
    const auto [g1, g2] = normal_pair(rng);
    s = {mean_re + sd_re * g1, mean_im + sd_im * (corr * g1 + std::sqrt(1.0 - corr * corr) * g2)};
    samples.add({s.real(), s.imag()});
  }
  const auto u = uncertainty_decompose(z);

  // momentum eigenvalues of family states sharing R / v
  RandomStream family_rng(cfg.seed, 1);
  std::vector<Complex> momenta;
  for (int i = 0; i < 64; ++i) {
    const double v = 0.1 + 9.9 * family_rng.uniform();
    const auto s = make_free_state(v, rate_ratio * v, cfg.constants);
    momenta.push_back(apply_observable(Observable::P, s, {v + 1.0, 0.0}).value);
  }
  const auto fam = uncertainty_decompose(momenta);

  ScenarioResult r;
  r.tables.push_back(std::move(samples));
  Table stats("statistics", {"var_real", "var_imag", "var_complex_re", "var_complex_im",
                             "covariance", "identity_gap_re", "identity_gap_im"});
  std::vector<Cell> row{u.var_real, u.var_imag};
  push_complex(row, u.var_complex);
  row.emplace_back(u.covariance);
  push_complex(row, u.identity_gap);
  stats.add(std::move(row));
  r.tables.push_back(std::move(stats));
  const bool heisenberg = heisenberg_check(dx, dp, cfg.constants);
  r.summary["heisenberg_bound_met"] = heisenberg;
  r.summary["family_var_imag"] = fam.var_imag;

  const double scale = 1.0 + u.var_real + u.var_imag;
  r.checks.push_back(check_below("identity_gap_is_twice_covariance",
                                 std::abs(u.identity_gap - Complex(0.0, 2.0 * u.covariance)) / scale,
                                 1e-12));
  r.checks.push_back(check_below("real_part_is_variance_difference",
                                 (u.var_complex.real() - (u.var_real - u.var_imag)) / scale, 1e-12));
  r.checks.push_back(check_below("family_imaginary_momentum_constant", fam.var_imag, 1e-20));
  return r;
}

// ------------------------------------------------------------------ contour

Complex antiderivative(ContourDensity d, const FreeWaveParams& s, Complex tc, Complex z) {
  const double a = s.rate / s.speed;
  return d == ContourDensity::IncomingP1 ? -std::exp(s.rate * tc - a * z) / a
                                         : std::exp(a * z - s.rate * tc) / a;
}

ScenarioResult contour(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const double speed = p.number("speed", 1.0);
  const double rate = p.number("rate", 1.0);
  const Complex tc(p.number("t_c_re", 0.0), p.number("t_c_im", 0.0));
  const std::string density_name = p.text("density", "incoming");
  const std::string file = p.text("contour_file", "");
  p.finish("contour");

  if (density_name != "incoming" && density_name != "outgoing") {
    throw ConfigError("density must be incoming or outgoing");
  }
  if (!(rate > 0.0)) throw ConfigError("contour scenario needs rate > 0");
  const ContourDensity d =
      density_name == "incoming" ? ContourDensity::IncomingP1 : ContourDensity::OutgoingP1;
  const auto state = make_free_state(speed, rate, cfg.constants);

  Contour c;
  if (file.empty()) {
    c = {{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}}, tc, true};
  } else {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read " + file);
    c = read_contour_csv(in, tc);
  }

  ScenarioResult r;
  Table edges("edges", {"edge", "start_re", "start_im", "end_re", "end_im", "integral_re",
                        "integral_im"});
  for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
    const Contour piece{{c.vertices[i], c.vertices[i + 1]}, tc, false};
    std::vector<Cell> row{as_int(i)};
    push_complex(row, c.vertices[i]);
    push_complex(row, c.vertices[i + 1]);
    push_complex(row, c.vertices[i] == c.vertices[i + 1] ? Complex{}
                                                         : contour_integral(d, state, piece));
    edges.add(std::move(row));
  }
  r.tables.push_back(std::move(edges));

  const Complex total = contour_integral(d, state, c);
  const Complex refined = contour_integral(d, state, c.subdivided(2));
  const Complex exact = antiderivative(d, state, tc, c.vertices.back()) -
                        antiderivative(d, state, tc, c.vertices.front());
  r.summary["integral_re"] = total.real();
  r.summary["integral_im"] = total.imag();
  r.summary["closed"] = c.closed;

  const double scale = 1.0 + std::abs(exact);
  r.checks.push_back(check_below("antiderivative_match", std::abs(total - exact) / scale, 1e-9));
  r.checks.push_back(check_below("refinement_invariance", std::abs(total - refined) / scale, 1e-10));
  if (c.closed) {
    r.checks.push_back(check_below("closed_contour_vanishes", std::abs(total), 1e-9));
  } else {
    const Contour straight{{c.vertices.front(), c.vertices.back()}, tc, false};
    r.checks.push_back(check_below("path_independence",
                                   std::abs(total - contour_integral(d, state, straight)) / scale,
                                   1e-9));
  }
  return r;
}

// ---------------------------------------------------------------- composite

ScenarioResult composite(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const auto weights = p.list("weights", {0.5, 0.5});
  const auto phases = p.list("phases", filled(weights.size(), 0.0));
  const auto system_speeds = p.list("system_speeds", {1.0, 1.5});
  const auto pointer_speeds = p.list("pointer_speeds", {2.0, 2.5});
  const double rate = p.number("rate", 1.0);
  const double mp = p.number("mp", 3.0);
  p.finish("composite");

  const std::size_t n = weights.size();
  if (system_speeds.size() != n || pointer_speeds.size() != n || phases.size() != n) {
    throw ConfigError("weights, phases and both speed lists need one entry per term");
  }
  std::vector<FreeWaveParams> systems;
  std::vector<PointerState> pointers;
  std::vector<Complex> amps;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw ConfigError("weights must be non-negative");
    systems.push_back(make_free_state(system_speeds[i], rate, cfg.constants));
    pointers.push_back({make_free_state(pointer_speeds[i], rate, cfg.constants), i});
    amps.push_back(std::polar(std::sqrt(weights[i]), phases[i]));
  }
  const auto state = tensor_compose(systems, pointers, amps);

  std::vector<WaveComponent> as_system;
  for (const auto& t : state.terms()) as_system.push_back({t.amplitude, t.system});
  RandomStream rng(cfg.seed, 0);
  const std::size_t outcome = sample_outcome(SuperposedState(as_system), rng);
  const double v_out = systems[outcome].speed;
  const MeasurementEvent event{mp, mp / v_out, v_out};
  const auto post = von_neumann_project(state, outcome, event);

  ScenarioResult r;
  auto term_table = [](const std::string& name, const CompositeState& s) {
    Table t(name, {"term", "reading", "amplitude_re", "amplitude_im", "system_speed",
                   "system_rate", "pointer_speed", "pointer_rate"});
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<Cell> row{as_int(i), as_int(s[i].pointer.reading)};
      push_complex(row, s[i].amplitude);
      row.insert(row.end(), {s[i].system.speed, s[i].system.rate, s[i].pointer.wave.speed,
                             s[i].pointer.wave.rate});
      t.add(std::move(row));
    }
    return t;
  };
  r.tables.push_back(term_table("terms", state));
  r.tables.push_back(term_table("post_state", post));

  double residual = 0.0;
  for (const auto& term : state.terms()) {
    const Grid1D xg{1.0, 3.0, 5, 0.0};
    const Grid1D qg{1.0, 3.0, 5, 0.0};
    residual = std::max(residual, composite_residual(term, xg, qg));
  }
  r.checks.push_back(check_below("composite_schrodinger_residual", residual, 1e-6));
  double overlap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      overlap = std::max(overlap, std::abs(state.overlap(i, j) - (i == j ? 1.0 : 0.0)));
    }
  }
  r.checks.push_back(check_below("term_orthonormality", overlap, 1e-300));
  r.checks.push_back(check_true("projection_idempotent", von_neumann_project(post, outcome, event) == post));
  r.checks.push_back(check_below("post_amplitude_unit", std::abs(post[outcome].amplitude - 1.0), 1e-300));
  r.checks.push_back(check_below("post_density_at_mp",
                                 std::norm(product_wave(post[outcome], event.x,
                                                      post[outcome].pointer.wave.speed * event.t,
                                                      event.t)) - 1.0,
                                 1e-12));

  std::vector<Complex> eigs;
  double imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    eigs.push_back(apply_observable(Observable::H, systems[i], {systems[i].speed + 1.0, 0.0}).value);
    imag += std::norm(amps[i]) * cfg.constants.hbar * rate / 2.0;
  }
  const auto avg = compare_averages(state, eigs);
  r.summary["outcome"] = outcome;
  r.summary["entangled_average_re"] = avg.entangled_avg.real();
  r.summary["entangled_average_im"] = avg.entangled_avg.imag();
  r.summary["reduced_average"] = avg.reduced_avg;
  r.checks.push_back(check_below("average_real_parts_agree",
                                 avg.entangled_avg.real() - avg.reduced_avg,
                                 1e-12 * std::max(1.0, std::abs(avg.reduced_avg))));
  r.checks.push_back(check_below("average_imaginary_part", avg.entangled_avg.imag() - imag,
                                 1e-14 * std::max(1.0, imag)));

  if (n == 2) {
    const double h = std::sqrt(0.5);
    auto basis = [&](Complex a, Complex b) {
      const std::vector<Complex> c{a, b};
      return tensor_compose(systems, pointers, c);
    };
    const std::vector<CompositeState> direct{basis(1.0, 0.0), basis(0.0, 1.0)};
    const std::vector<CompositeState> rotated{basis(h, h), basis(h, -h)};
    const std::vector<double> half{0.5, 0.5};
    const auto ra = mixture_density(direct, half);
    const auto rb = mixture_density(rotated, half);
    r.tables.push_back(density_table("mixture_pointer_basis", ra));
    r.tables.push_back(density_table("mixture_rotated_basis", rb));
    r.checks.push_back(check_below("preferred_basis_mixtures_agree",
                                   (ra.matrix() - rb.matrix()).cwiseAbs().maxCoeff(), 1e-12));
  }
  return r;
}

// -------------------------------------------------------------------- field

ScenarioResult field(ScenarioConfig& cfg) {
  Params& p = cfg.params;
  const double speed = p.number("speed", 1.0);
  const double s_max = p.number("s_max", 5.0);
  const std::size_t points = positive_count(p, "points", 51, 2);
  const double t = p.number("t", 0.0);
  p.finish("field");
  if (!(s_max > 0.0)) throw ConfigError("s_max must be positive");

  const auto state = normalize_state(make_free_state(speed, speed, cfg.constants));
  ScenarioResult r;
  Table f("field", {"s", "probability"});
  for (double s : linspace(0.0, s_max, points)) f.add({s, probability_field(s, state)});
  r.tables.push_back(std::move(f));

  Table slope("distribution", {"x", "pi", "slope"});
  const auto dist = Distribution::incoming(state, t);
  bool negative = true;
  for (std::size_t i = 1; i <= points; ++i) {
    const double x = speed * t + s_max * static_cast<double>(i) / static_cast<double>(points);
    const double d = negative_density_slope(state, x, t);
    negative = negative && d < 0.0;
    slope.add({x, dist.pi(x), d});
  }
  r.tables.push_back(std::move(slope));

  const auto norm = distribution_normalize(dist);
  const MeasurementEvent event{speed * t, t, speed};
  const auto cp = classical_point_check(state, event);
  r.summary["normalization"] = norm.value;
  r.summary["normalization_quadrature"] = norm.quadrature;
  r.summary["hbar_k"] = cp.hbar_k;
  r.summary["hbar_omega"] = cp.hbar_omega;
  r.summary["principal_value"] = cp.principal_value;
  r.summary["quantum_potential_off_mp"] =
      quantum_potential(state, speed * t + 1.0, t);

  r.checks.push_back(check_below("field_at_zero", probability_field(0.0, state) - 1.0, 1e-15));
  r.checks.push_back(check_below("field_at_ln2", probability_field(std::log(2.0), state) - 0.5, 1e-15));
  r.checks.push_back(check_true("slope_negative", negative));
  r.checks.push_back(check_below("normalization", norm.value - 1.0, 1e-12));
  r.checks.push_back(check_below("normalization_quadrature", norm.quadrature - 1.0, 1e-8));
  r.checks.push_back(check_below("quantum_potential_at_mp", cp.quantum_potential, 1e-10));
  r.checks.push_back(check_below("principal_function_curvature", cp.second_derivative, 1e-12));
  return r;
}

}  // namespace

std::span<const std::string_view> scenario_names() { return kNames; }

ScenarioResult run_scenario(ScenarioConfig& config) {
  using Runner = ScenarioResult (*)(ScenarioConfig&);
  static const std::array<Runner, kNames.size()> runners = {
      free_wave, potential_wave, ensemble,    decoherence, entropy,
      sturm_liouville, uncertainty, contour, composite,   field};
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (config.scenario == kNames[i]) return runners[i](config);
  }
  throw ConfigError("unknown scenario '" + config.scenario + "'");
}

}  // namespace probwave::cli
