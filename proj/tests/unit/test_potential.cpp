#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <sstream>

#include "generators.hpp"
#include "probwave/errors.hpp"
#include "probwave/freewave.hpp"
#include "probwave/potential.hpp"

using namespace probwave;
using doctest::Approx;

namespace {

PotentialSpec sampled(const std::function<double(double)>& k, double a, double b, std::size_t n,
                      double rate, double omega, std::optional<double> mp = std::nullopt) {
  std::vector<double> x(n);
  std::vector<double> v(n, 0.0);
  std::vector<double> kx(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    kx[i] = k(x[i]);
  }
  return {x, v, kx, rate, omega, {}, mp};
}

PotentialSpec uniform(double k, double rate, double a = 0.0, double b = 10.0) {
  return sampled([k](double) { return k; }, a, b, 41, rate, dispersion_omega(k, rate, k));
}

}  // namespace

TEST_CASE("arrival_time examples") {
  CHECK(arrival_time(uniform(1.0, 1.0), 2.0) == Approx(2.0).epsilon(1e-12));
  CHECK(arrival_time(uniform(2.0, 1.0, 0.0, 3.0), 3.0) == Approx(1.5).epsilon(1e-12));
  const auto lin = sampled([](double x) { return 1.0 + x; }, 0.0, 1.0, 21, 1.0, 0.5);
  CHECK(std::abs(arrival_time(lin, 1.0) - std::log(2.0)) < 1e-8 * std::log(2.0));
  CHECK(arrival_time(lin, 0.0) == 0.0);
  CHECK_THROWS_AS(arrival_time(lin, 1.5), InvalidInput);
}

TEST_CASE("property: arrival time matches an independent quadrature of 1/v") {
  testing::Gen gen(21);
  boost::math::quadrature::gauss_kronrod<double, 31> oracle;
  for (int i = 0; i < 30; ++i) {
    const double a0 = gen.uniform(0.5, 2.0);
    const double a1 = gen.uniform(-0.2, 0.2);
    const double a2 = gen.uniform(0.0, 0.3);
    const auto k = [=](double x) { return a0 + a1 * std::sin(x) + a2 * x; };
    const auto spec = sampled(k, 0.0, 4.0, 201, 1.0, 0.5);
    const double x = gen.uniform(0.1, 4.0);
    const double expected = oracle.integrate([&](double s) { return 1.0 / spec.speed_at(s); }, 0.0, x);
    CHECK(std::abs(arrival_time(spec, x) - expected) <= 1e-8 * expected);
  }
}

TEST_CASE("table reader") {
  std::istringstream v("# x V\n0 0\n1 0.5\n\n2 1\n");
  const auto t = read_table(v);
  CHECK(t.x == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(t.y[1] == 0.5);
  std::istringstream bad("0 1 2\n");
  CHECK_THROWS_AS(read_table(bad), InvalidInput);
  std::istringstream junk("0 x\n");
  CHECK_THROWS_AS(read_table(junk), InvalidInput);
}

TEST_CASE("spec from tables") {
  std::ostringstream vt;
  std::ostringstream kt;
  vt << "# potential\n0 0\n10 1\n";
  for (int i = 0; i <= 10; ++i) kt << i << ' ' << 1.0 + 0.1 * i << '\n';
  std::istringstream vin(vt.str());
  std::istringstream kin(kt.str());
  const auto spec = PotentialSpec::from_tables(vin, kin, 1.0, 0.5);
  CHECK(spec.x_samples().size() == 11);
  CHECK(spec.potential_at(5.0) == Approx(0.5));
  CHECK(spec.k_at(5.0) == Approx(1.5));
}

TEST_CASE("spec validation") {
  std::vector<double> x{0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<double> v(8, 0.0);
  std::vector<double> k(8, 1.0);
  CHECK_NOTHROW(PotentialSpec(x, v, k, 1.0, 0.375));
  CHECK_THROWS_AS(PotentialSpec({0, 1, 2}, {0, 0, 0}, {1, 1, 1}, 1.0, 0.375), InvalidInput);
  auto bad_k = k;
  bad_k[3] = -1.0;
  CHECK_THROWS_AS(PotentialSpec(x, v, bad_k, 1.0, 0.375), InvalidInput);
  auto unsorted = x;
  std::swap(unsorted[2], unsorted[3]);
  CHECK_THROWS_AS(PotentialSpec(unsorted, v, k, 1.0, 0.375), InvalidInput);
  CHECK_THROWS_AS(PotentialSpec(x, v, k, -1.0, 0.375), InvalidInput);
  CHECK_THROWS_AS(PotentialSpec(x, v, k, 1.0, 0.375, {}, 9.0), InvalidInput);
}

TEST_CASE("constant k degenerates to the free family") {
  testing::Gen gen(22);
  for (int i = 0; i < 100; ++i) {
    const double k = gen.uniform(0.2, 5.0);
    const double r = gen.uniform(0.0, 5.0);
    const auto spec = uniform(k, r);
    const auto free_in = make_free_state(k, r);
    const auto free_out = make_free_state(k, r, {}, Branch::Outgoing);
    const double x = gen.uniform(0.0, 10.0);
    const double t_in = x / k - gen.uniform(0.0, 2.0);
    const double t_out = x / k + gen.uniform(0.0, 2.0);
    CHECK(std::abs(psi_potential(spec, Branch::Incoming, x, t_in) - psi_free(free_in, x, t_in)) < 1e-10);
    CHECK(std::abs(psi_potential(spec, Branch::Outgoing, x, t_out) - psi_free(free_out, x, t_out)) <
          1e-10);
    CHECK(std::abs(prob_density_potential(spec, Branch::Incoming, x, t_in) -
                   prob_density_free(free_in, x, t_in)) < 1e-12);
  }
}

TEST_CASE("density at the measurement point") {
  const auto lin = sampled([](double x) { return 1.0 + x; }, 0.0, 3.0, 61, 1.0, 0.5, 1.0);
  const double t = arrival_time(lin, 1.0);
  CHECK(std::abs(psi_potential(lin, Branch::Incoming, 1.0, t)) == Approx(1.0).epsilon(1e-12));
  CHECK(prob_density_potential(lin, Branch::Outgoing, 1.0, t) == Approx(1.0).epsilon(1e-12));
  CHECK(lin.phase_integral(1.0) == Approx(1.5).epsilon(1e-12));
  // k(3) = 2 k(1): the prefactor halves the density at arrival
  const double t3 = arrival_time(lin, 3.0);
  CHECK(prob_density_potential(lin, Branch::Incoming, 3.0, t3) == Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(psi_potential(lin, Branch::Incoming, 1.0, t + 0.1), RegionError);
  CHECK_THROWS_AS(psi_potential(lin, Branch::Outgoing, 1.0, t - 0.1), RegionError);
}

TEST_CASE("continuity holds for constant and linear speed") {
  const auto flat = uniform(1.0, 1.0);
  CHECK(continuity_residual(flat, Branch::Incoming, {3.0, 6.0, 31, 1.0}) < 1e-6);
  CHECK(continuity_residual(flat, Branch::Outgoing, {1.0, 4.0, 31, 6.0}) < 1e-6);
  const auto lin = sampled([](double x) { return 1.0 + x; }, 0.0, 3.0, 301, 1.0, 0.5);
  CHECK(continuity_residual(lin, Branch::Incoming, {1.0, 2.9, 39, 0.2}) < 1e-6);
}

TEST_CASE("continuity exposes a corrupted time derivative") {
  // dP/dt taken from a rate-2R density leaves R P behind
  const auto spec = uniform(1.0, 1.0);
  const auto doubled = spec.with_rate(2.0);
  const double x = 3.0;
  const double t = 1.0;
  const double h = 1e-3;
  const auto p = [&](const PotentialSpec& s, double xx, double tt) {
    return prob_density_potential(s, Branch::Incoming, xx, tt);
  };
  const double dt = (p(doubled, x, t + h) - p(doubled, x, t - h)) / (2.0 * h);
  const double dx = (p(spec, x + h, t) * spec.speed_at(x + h) - p(spec, x - h, t) * spec.speed_at(x - h)) /
                    (2.0 * h);
  const double residual = std::abs(dt + dx);
  CHECK(residual > 0.05);
  CHECK(continuity_residual(spec, Branch::Incoming, {x, x + 1.0, 11, t}) < 1e-6);
}

TEST_CASE("continuity grid must stay on one side") {
  const auto flat = uniform(1.0, 1.0);
  CHECK_THROWS_AS(continuity_residual(flat, Branch::Incoming, {0.5, 3.0, 11, 1.0}), RegionError);
  CHECK_THROWS_AS(continuity_residual(flat, Branch::Outgoing, {0.5, 3.0, 11, 1.0}), RegionError);
}

TEST_CASE("measurement point limit") {
  const auto flat = uniform(1.0, 1.0);
  const auto a = mp_limit_check(flat, 4.0);
  CHECK(a.D_equals_k_mp);
  CHECK(a.R_zero_consistent);
  CHECK(a.plane_wave_residual < 1e-12);

  const auto lin = sampled([](double x) { return 1.0 + x; }, 0.0, 3.0, 61, 1.0, 0.5);
  const auto b = mp_limit_check(lin, 1.0);
  CHECK(b.D_equals_k_mp);
  CHECK(b.plane_wave_residual < 1e-10);
  CHECK(lin.with_measurement_point(1.0).k_mp() == Approx(2.0).epsilon(1e-12));

  CHECK_FALSE(mp_limit_check(lin, 1.0, 0.5).R_zero_consistent);
}
