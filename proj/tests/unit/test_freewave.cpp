#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "generators.hpp"
#include "probwave/errors.hpp"
#include "probwave/freewave.hpp"

using namespace probwave;
using doctest::Approx;

namespace {

Grid1D grid(double x_min, double x_max, std::size_t n, double t) { return {x_min, x_max, n, t}; }

ResidualOptions finite_differences(int levels = 2) {
  ResidualOptions o;
  o.method = DerivativeMethod::FiniteDifference;
  o.richardson_levels = levels;
  return o;
}

}  // namespace

TEST_CASE("dispersion_omega") {
  CHECK(dispersion_omega(1.0, 1.0, 1.0) == Approx(0.5 - 0.125));
  CHECK(dispersion_omega(1.0, 0.0, 1.0) == 0.5);
  CHECK(dispersion_omega(2.0, 2.0, 2.0) == Approx(2.0 - 4.0 / 32.0));
  CHECK_THROWS_AS(dispersion_omega(1.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("min_momentum") {
  const auto a = min_momentum(1.0, 1.0);
  CHECK(a.positive == 0.5);
  CHECK(a.negative == -0.5);
  CHECK(min_momentum(0.0, 3.0).positive == 0.0);
  CHECK(min_momentum(2.0, 1.0).positive == 1.0);
  CHECK(min_momentum(2.0, 1.0).negative == -1.0);
}

TEST_CASE("psi_free values") {
  const auto s = make_free_state(1.0, 1.0);
  const Complex at_mp = psi_free(s, 2.0, 2.0);
  CHECK(std::abs(at_mp - std::exp(Complex(0.0, 2.0 - 0.375 * 2.0))) < 1e-15);
  CHECK(std::abs(at_mp) == Approx(1.0));
  CHECK(std::abs(psi_free(s, 3.0, 1.0)) == Approx(std::exp(0.5 * (1.0 - 3.0))));
}

TEST_CASE("prob_density_free values") {
  const auto in = make_free_state(1.0, 1.0);
  const auto out = make_free_state(1.0, 1.0, {}, Branch::Outgoing);
  CHECK(prob_density_free(in, 3.0, 1.0) == Approx(std::exp(-2.0)));
  CHECK(prob_density_free(out, 0.0, 2.0) == Approx(std::exp(-2.0)));
  CHECK(prob_density_free(in, 2.5, 2.5) == 1.0);
  CHECK(prob_density_free(out, 2.5, 2.5) == 1.0);
}

TEST_CASE("region mismatch is an error") {
  const auto in = make_free_state(1.0, 1.0);
  const auto out = make_free_state(1.0, 1.0, {}, Branch::Outgoing);
  CHECK_THROWS_AS(psi_free(in, 1.0, 2.0), RegionError);
  CHECK_THROWS_AS(psi_free(out, 3.0, 2.0), RegionError);
  CHECK_THROWS_AS(prob_density_free(in, 0.0, 1.0), RegionError);
}

TEST_CASE("property: both branches meet the plane wave at the MP") {
  testing::Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const double v = gen.uniform(0.1, 10.0);
    const double r = gen.uniform(0.0, 10.0);
    const double t = gen.uniform(-5.0, 5.0);
    auto in = make_free_state(v, r);
    auto out = make_free_state(v, r, {}, Branch::Outgoing);
    const double x = v * t;
    const Complex plane = std::exp(Complex(0.0, in.k * x - in.omega * t));
    CHECK(std::abs(psi_free(in, x, t) - plane) < 1e-12);
    CHECK(std::abs(psi_free(out, x, t) - plane) < 1e-12);
  }
}

TEST_CASE("property: envelope monotone and bounded by one") {
  testing::Gen gen(12);
  for (int i = 0; i < 200; ++i) {
    const double v = gen.uniform(0.1, 10.0);
    const double r = gen.uniform(0.01, 10.0);
    const double t = gen.uniform(-2.0, 2.0);
    auto in = make_free_state(v, r);
    auto out = make_free_state(v, r, {}, Branch::Outgoing);
    const double d = gen.uniform(0.0, 2.0) * v / r;
    const double front = v * t;
    const double p1 = prob_density_free(in, front + d, t);
    const double p2 = prob_density_free(in, front + d + 0.1 * v / r, t);
    CHECK(p1 > p2);
    CHECK(p1 <= 1.0);
    CHECK(p2 > 0.0);
    const double q1 = prob_density_free(out, front - d, t);
    const double q2 = prob_density_free(out, front - d - 0.1 * v / r, t);
    CHECK(q1 > q2);
    CHECK(q1 <= 1.0);
  }
}

TEST_CASE("total_probability closed form") {
  CHECK(total_probability(make_free_state(2.0, 1.0)) == 2.0);
  CHECK(total_probability(make_free_state(1.0, 1.0)) == 1.0);
  CHECK_THROWS_AS(total_probability(make_free_state(1.0, 0.0)), DivergenceError);
}

TEST_CASE("property: closed form, library quadrature and an independent integrator agree") {
  testing::Gen gen(13);
  boost::math::quadrature::exp_sinh<double> oracle;
  for (int i = 0; i < 100; ++i) {
    const auto s = make_free_state(gen.uniform(0.1, 10.0), gen.uniform(0.05, 10.0));
    const double t = gen.uniform(-1.0, 1.0);
    const double closed = total_probability(s);
    const double lib = total_probability_quadrature(s, t);
    const double ind = oracle.integrate([&](double u) { return prob_density_free(s, s.speed * t + u, t); });
    CHECK(std::abs(lib - closed) <= 1e-8 * closed);
    CHECK(std::abs(ind - closed) <= 1e-8 * closed);
  }
}

TEST_CASE("normalize_state") {
  const auto a = normalize_state(make_free_state(1.0, 3.0));
  CHECK(a.rate == 1.0);
  CHECK(a.omega == Approx(0.375));
  const auto b = make_free_state(1.0, 1.0);
  CHECK(normalize_state(b) == b);
  const auto c = normalize_state(make_free_state(2.0, 0.5));
  CHECK(c.rate == 2.0);
  CHECK(total_probability(c) == 1.0);
}

TEST_CASE("property: normalized states carry unit probability") {
  testing::Gen gen(14);
  for (int i = 0; i < 300; ++i) {
    const auto s = normalize_state(make_free_state(gen.uniform(0.1, 10.0), gen.uniform(0.0, 10.0)));
    CHECK(std::abs(total_probability(s) - 1.0) <= 1e-10);
  }
}

TEST_CASE("Schroedinger residual on the canonical state") {
  const auto s = make_free_state(1.0, 1.0);
  const auto g = grid(2.0, 4.0, 21, 1.0);
  CHECK(schrodinger_residual(s, g) < 1e-12);
  CHECK(schrodinger_residual(s, g, finite_differences()) < 1e-6);
}

TEST_CASE("residual exposes a dispersion violation") {
  auto s = make_free_state(1.0, 1.0);
  s.omega = 0.5;
  const auto g = grid(2.0, 4.0, 21, 1.0);
  // residual = |hbar omega_wrong - hbar omega_true| |psi|, smallest |psi| at x = 4
  const double min_psi = std::exp(0.5 * (1.0 - 4.0));
  const double expected_floor = 0.125 * min_psi;
  CHECK(schrodinger_residual(s, g) >= expected_floor);
  CHECK(schrodinger_residual(s, g) == Approx(0.125 * std::exp(0.5 * (1.0 - 2.0))).epsilon(1e-12));
  CHECK(schrodinger_residual(s, g, finite_differences()) > 0.05);
}

TEST_CASE("property: analytic residual is tiny iff the dispersion holds") {
  testing::Gen gen(15);
  for (int i = 0; i < 200; ++i) {
    const double v = gen.uniform(0.1, 10.0);
    auto s = make_free_state(v, gen.uniform(0.0, 10.0));
    const auto g = grid(v + 0.5, v + 1.5, 11, 1.0);
    const double ok = schrodinger_residual(s, g);
    CHECK(ok < 1e-12);
    s.omega += gen.uniform(0.01, 1.0);
    CHECK(schrodinger_residual(s, g) > 1e-12);
  }
}

TEST_CASE("plain central differences converge at second order") {
  const auto s = make_free_state(1.0, 1.0);
  const auto g = grid(2.0, 4.0, 11, 1.0);
  ResidualOptions o = finite_differences(0);
  o.h = 1e-2;
  const double coarse = schrodinger_residual(s, g, o);
  o.h = 5e-3;
  const double fine = schrodinger_residual(s, g, o);
  CHECK(coarse / fine == Approx(4.0).epsilon(0.02));
}

TEST_CASE("residual grid must keep clear of the MP") {
  const auto s = make_free_state(1.0, 1.0);
  CHECK_THROWS_AS(schrodinger_residual(s, grid(0.5, 3.0, 11, 1.0)), RegionError);
  CHECK_THROWS_AS(schrodinger_residual(s, grid(1.1, 3.0, 11, 1.0)), RegionError);
  const auto out = make_free_state(1.0, 1.0, {}, Branch::Outgoing);
  CHECK(schrodinger_residual(out, grid(-3.0, -1.0, 11, 1.0)) < 1e-12);
  CHECK(schrodinger_residual(out, grid(-3.0, -1.0, 11, 1.0), finite_differences()) < 1e-6);
}

TEST_CASE("Grid1D validation") {
  CHECK_THROWS_AS(grid(1.0, 1.0, 5, 0.0).validate(), InvalidInput);
  CHECK_THROWS_AS(grid(0.0, 1.0, 2, 0.0).validate(), InvalidInput);
  const auto pts = grid(0.0, 1.0, 5, 0.0).points();
  CHECK(pts.size() == 5);
  CHECK(pts[2] == 0.5);
  CHECK(pts.back() == 1.0);
}
