#include <doctest.h>

#include <cmath>
#include <vector>

#include "generators.hpp"
#include "probwave/errors.hpp"
#include "probwave/evolution.hpp"
#include "probwave/freewave.hpp"

using namespace probwave;
using doctest::Approx;

namespace {

SuperposedState single(double speed, double rate) {
  return SuperposedState({{Complex(1.0, 0.0), make_free_state(speed, rate)}});
}

SuperposedState random_state(testing::Gen& gen, std::size_t n) {
  const auto a = gen.amplitudes(n);
  std::vector<WaveComponent> c;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back({a[i], make_free_state(gen.uniform(0.2, 3.0), gen.uniform(0.0, 2.0))});
  }
  return SuperposedState(std::move(c));
}

SuperposedState with_weights(const std::vector<double>& w) {
  std::vector<WaveComponent> c;
  for (std::size_t i = 0; i < w.size(); ++i) {
    c.push_back({Complex(std::sqrt(w[i]), 0.0), make_free_state(1.0 + static_cast<double>(i), 1.0)});
  }
  return SuperposedState(std::move(c));
}

double max_entry_gap(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single-component norm growth") {
  CHECK(evolve_state(single(1.0, 1.0), 2.0).norm_squared == Approx(7.38905609893065).epsilon(1e-14));
  CHECK(evolve_state(single(1.0, 0.0), 5.0).norm_squared == Approx(1.0).epsilon(1e-15));
  testing::Gen gen(1);
  const auto s = random_state(gen, 3);
  const auto same = evolve_state(s, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(same.components[i].amplitude == s[i].amplitude);
}

TEST_CASE("property: norm ratio is exp(R t)") {
  testing::Gen gen(51);
  for (int i = 0; i < 100; ++i) {
    const double r = gen.uniform(0.0, 5.0);
    const double t = gen.uniform(-3.0, 3.0);
    const double ratio = evolve_state(single(gen.uniform(0.1, 5.0), r), t).norm_squared;
    CHECK(std::abs(ratio - std::exp(r * t)) <= 1e-10 * std::exp(r * t));
  }
}

TEST_CASE("evolved amplitudes carry the phase and the growth") {
  testing::Gen gen(52);
  const auto s = random_state(gen, 3);
  const double t = 0.7;
  const auto e = evolve_state(s, t);
  double norm = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& w = s[i].wave;
    const Complex expected = s[i].amplitude * std::exp(Complex(w.rate * t / 2.0, -w.omega * t));
    CHECK(std::abs(e.components[i].amplitude - expected) < 1e-14);
    norm += std::norm(s[i].amplitude) * std::exp(w.rate * t);
  }
  CHECK(e.norm_squared == Approx(norm).epsilon(1e-13));
}

TEST_CASE("density matrix validation") {
  Eigen::MatrixXcd m(2, 2);
  m << 0.5, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.5;
  CHECK_NOTHROW(DensityMatrix{m});
  Eigen::MatrixXcd skew = m;
  skew(0, 1) = Complex(0.1, 0.3);
  CHECK_THROWS_AS(DensityMatrix{skew}, InvalidInput);
  Eigen::MatrixXcd neg(2, 2);
  neg << 0.5, 0.9, 0.9, 0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvalidInput);
  CHECK_THROWS_AS(DensityMatrix{Eigen::MatrixXcd(2, 3)}, InvalidInput);
  CHECK_THROWS_AS(DensityMatrix{Eigen::MatrixXcd(0, 0)}, InvalidInput);
}

TEST_CASE("density evolution") {
  const std::vector<double> w{0.5, 0.5};
  const auto rho = DensityMatrix::diagonal(w);
  const std::vector<Complex> eigs{{0.4, 0.5}, {0.9, 0.5}};
  CHECK(evolve_density(rho, eigs, 2.0).trace().real() == Approx(std::exp(2.0)));
  CHECK(max_entry_gap(evolve_density(rho, eigs, 0.0), rho) == 0.0);
}

TEST_CASE("property: pure states stay rank one and the semigroup law holds") {
  testing::Gen gen(53);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(gen, 4);
    const auto rho = DensityMatrix::pure(s.amplitudes());
    const auto eigs = energy_eigenvalues(s);
    const double t1 = gen.uniform(-1.0, 1.0);
    const double t2 = gen.uniform(-1.0, 1.0);
    const auto both = evolve_density(rho, eigs, t1 + t2);
    const auto stepped = evolve_density(evolve_density(rho, eigs, t1), eigs, t2);
    CHECK(max_entry_gap(both, stepped) < 1e-10);
    const auto ev = both.eigenvalues();
    CHECK(std::abs(ev(ev.size() - 2)) < 1e-10 * ev(ev.size() - 1));
    const auto direct = evolve_state(s, t1 + t2);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        const Complex outer =
            direct.components[a].amplitude * std::conj(direct.components[b].amplitude);
        CHECK(std::abs(both(a, b) - outer) < 1e-12 * (1.0 + std::abs(outer)));
      }
    }
  }
}

TEST_CASE("reduction and purity examples") {
  const double third = 1.0 / 3.0;
  const auto even = reduce_to_mixture(with_weights({third, third, third}));
  CHECK(even(0, 0).real() == Approx(third));
  CHECK(even(0, 1) == Complex(0.0, 0.0));
  CHECK(purity(even) == Approx(third).epsilon(1e-12));
  const auto born = reduce_to_mixture(with_weights({0.5, 0.3, 0.2}));
  CHECK(purity(born) == Approx(0.38).epsilon(1e-12));
  const auto sharp = reduce_to_mixture(with_weights({1.0, 0.0, 0.0}));
  CHECK(purity(sharp) == 1.0);
  CHECK(purity(DensityMatrix::pure(with_weights({0.5, 0.3, 0.2}).amplitudes())) ==
        Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(purity(DensityMatrix::diagonal(std::vector<double>{0.5, 0.6})), InvalidInput);
}

TEST_CASE("property: purity after reduction is sum |a|^4") {
  testing::Gen gen(54);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + gen.index(6);
    const auto s = random_state(gen, n);
    const auto rho = reduce_to_mixture(s);
    double fourth = 0.0;
    for (const Complex& a : s.amplitudes()) fourth += std::norm(a) * std::norm(a);
    CHECK(std::abs(purity(rho) - fourth) <= 1e-12);
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-12);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b) CHECK(rho(a, b) == Complex(0.0, 0.0));
      }
    }
    if (n >= 2) CHECK(purity(rho) < 1.0);
  }
}

TEST_CASE("reduction timing") {
  const auto s = with_weights({0.5, 0.3, 0.2});
  // speeds 1, 2, 3: the fastest peak reaches x = 6 at t = 2
  CHECK(reduction_time(s, 6.0) == Approx(2.0));
  CHECK_THROWS_AS(reduction_time(s, 6.0, ReductionTiming::Staggered), InvalidInput);
  CHECK_THROWS_AS(reduction_time(s, 0.0), InvalidInput);
}

TEST_CASE("entropy trajectory") {
  const auto s = SuperposedState({{Complex(1.0, 0.0), normalize_state(make_free_state(1.0, 1.0))}});
  const std::vector<double> times{0.0, 1.0, 2.0};
  const std::vector<double> measured{2.0};
  const auto e = entropy_trajectory(s, times, {}, measured);
  CHECK(e.entropy[0] == 0.0);
  CHECK(e.entropy[2] == Approx(-2.0).epsilon(1e-14));
  CHECK(e.measured[2]);
  CHECK_FALSE(e.measured[1]);
  CHECK(e.entropy_after[2] == 0.0);
  CHECK(e.entropy_after[1] == e.entropy[1]);
  CHECK_THROWS_AS(entropy_trajectory(single(1.0, 2.0), times), InvalidInput);
}

TEST_CASE("property: entropy slope is -k_B v") {
  testing::Gen gen(55);
  for (int i = 0; i < 100; ++i) {
    const double v = gen.uniform(0.1, 10.0);
    const PhysicalConstants c{1.0, 1.0, gen.uniform(0.5, 2.0)};
    const auto s = SuperposedState({{Complex(1.0, 0.0), normalize_state(make_free_state(v, 1.0, c))}});
    std::vector<double> times;
    for (int j = 0; j <= 10; ++j) times.push_back(0.1 * j);
    const auto e = entropy_trajectory(s, times, c);
    for (std::size_t j = 1; j < times.size(); ++j) {
      const double slope = (e.entropy[j] - e.entropy[j - 1]) / (times[j] - times[j - 1]);
      CHECK(std::abs(slope + c.k_boltzmann * v) <= 1e-10 * (1.0 + v));
    }
  }
}

TEST_CASE("density matrix JSON round trip") {
  testing::Gen gen(56);
  const auto rho = DensityMatrix::pure(random_state(gen, 3).amplitudes());
  const auto j = to_json(rho);
  CHECK(j.size() == 3);
  CHECK(j[0][1].size() == 2);
  CHECK(j[0][1][0].get<double>() == rho(0, 1).real());
  CHECK(max_entry_gap(density_from_json(j), rho) == 0.0);
}
