#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "generators.hpp"
#include "probwave/errors.hpp"
#include "probwave/evolution.hpp"
#include "probwave/freewave.hpp"
#include "probwave/measurement.hpp"
#include "probwave/potential.hpp"

using namespace probwave;
using doctest::Approx;

namespace {

SuperposedState three(const std::vector<double>& w) {
  std::vector<WaveComponent> c;
  for (std::size_t i = 0; i < w.size(); ++i) {
    c.push_back({Complex(std::sqrt(w[i]), 0.0), make_free_state(1.0 + static_cast<double>(i), 1.0)});
  }
  return SuperposedState(std::move(c));
}

PointerState pointer(std::size_t reading, double speed = 2.0) {
  return {make_free_state(speed, 1.0), reading};
}

CompositeState pair(Complex a, Complex b) {
  const std::vector<FreeWaveParams> sys{make_free_state(1.0, 1.0), make_free_state(1.5, 1.0)};
  const std::vector<PointerState> ptr{pointer(0), pointer(1, 2.5)};
  const std::vector<Complex> amp{a, b};
  return tensor_compose(sys, ptr, amp);
}

}  // namespace

TEST_CASE("detect_mp on free states") {
  const auto s = make_free_state(1.0, 1.0);
  const auto e = detect_mp(s, 2.0, 2.0, 1e-9);
  REQUIRE(e.has_value());
  CHECK(e->t == 2.0);
  CHECK(e->speed == 1.0);
  CHECK(e->satisfies_arrival());
  CHECK_FALSE(detect_mp(s, 2.0, 1.0, 1e-9).has_value());
  CHECK_THROWS_AS(detect_mp(s, 2.0, 2.0, 0.0), InvalidInput);
}

TEST_CASE("detect_mp on a potential") {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> k;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(0.05 * i);
    v.push_back(0.0);
    k.push_back(1.0 + x.back());
  }
  const PotentialSpec spec(x, v, k, 1.0, 0.5);
  const double tol = 1e-6;
  CHECK(detect_mp(spec, 1.0, std::log(2.0), tol).has_value());
  CHECK(detect_mp(spec, 1.0, std::log(2.0) + 0.9 * tol, tol).has_value());
  CHECK_FALSE(detect_mp(spec, 1.0, std::log(2.0) + 2.0 * tol, tol).has_value());
  const auto e = detect_mp(spec, 1.0, std::log(2.0), tol);
  CHECK(e->satisfies_arrival());
}

TEST_CASE("sampling follows the weights") {
  RandomStream rng(7, 0);
  const auto sharp = three({1.0, 0.0, 0.0});
  for (int i = 0; i < 1000; ++i) CHECK(sample_outcome(sharp, rng) == 0);

  const auto born = three({0.5, 0.3, 0.2});
  RandomStream a(99, 0);
  RandomStream b(99, 0);
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  int zeros = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    first.push_back(sample_outcome(born, a));
    second.push_back(sample_outcome(born, b));
    zeros += first.back() == 0;
  }
  CHECK(first == second);
  CHECK(std::abs(zeros / double(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("arrival order by speed") {
  const auto s = three({0.5, 0.3, 0.2});
  CHECK(arrival_order(s, 6.0) == std::vector<std::size_t>{2, 1, 0});
  CHECK_THROWS_AS(arrival_order(s, -1.0), InvalidInput);
}

TEST_CASE("Dirac projection") {
  const auto s = three({0.5, 0.3, 0.2});
  const MeasurementEvent e{2.0, 2.0, 1.0};
  const auto post = dirac_project(s, 0, e);
  CHECK(post[0].amplitude == Complex(1.0, 0.0));
  CHECK(post[1].amplitude == Complex(0.0, 0.0));
  CHECK(post[2].amplitude == Complex(0.0, 0.0));
  CHECK(post[0].wave.rate == 0.0);
  CHECK(prob_density_free(post[0].wave, e.x, e.t) == 1.0);
  CHECK(prob_density_free(post[0].wave, e.x - 3.0, e.t) == 1.0);
  CHECK(dirac_project(post, 0, e) == post);
  CHECK_THROWS_AS(dirac_project(s, 1, e), InvalidInput);
  CHECK_THROWS_AS(dirac_project(s, 0, MeasurementEvent{2.0, 1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(dirac_project(s, 5, e), InvalidInput);
}

TEST_CASE("property: projection is idempotent and keeps unit trace") {
  testing::Gen gen(61);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + gen.index(4);
    const auto a = gen.amplitudes(n);
    std::vector<WaveComponent> c;
    for (std::size_t j = 0; j < n; ++j) c.push_back({a[j], make_free_state(gen.uniform(0.1, 5.0), 1.0)});
    const SuperposedState s(std::move(c));
    const std::size_t k = gen.index(n);
    const double t = gen.uniform(0.1, 5.0);
    const MeasurementEvent e{s[k].wave.speed * t, t, s[k].wave.speed};
    const auto once = dirac_project(s, k, e);
    CHECK(dirac_project(once, k, e) == once);
    CHECK(purity(reduce_to_mixture(once)) == 1.0);
  }
}

TEST_CASE("record or release") {
  const auto w = make_free_state(1.0, 1.0);
  const auto kept = settle(w, true);
  CHECK(kept.recorded);
  CHECK(kept.speed == 0.0);
  CHECK(kept.rate == 0.0);
  CHECK_FALSE(kept.outgoing.has_value());
  const auto freed = settle(w, false);
  REQUIRE(freed.outgoing.has_value());
  CHECK(freed.outgoing->branch == Branch::Outgoing);
  CHECK(freed.speed == 1.0);
}

TEST_CASE("composite construction") {
  const auto c = pair(Complex(std::sqrt(0.5), 0.0), Complex(0.0, std::sqrt(0.5)));
  CHECK(c.overlap(0, 0) == 1.0);
  CHECK(c.overlap(0, 1) == 0.0);
  CHECK_FALSE(c.projected());
  const std::vector<FreeWaveParams> sys{make_free_state(1.0, 1.0)};
  const std::vector<PointerState> ptr{pointer(0), pointer(1)};
  const std::vector<Complex> amp{1.0};
  CHECK_THROWS_AS(tensor_compose(sys, ptr, amp), InvalidInput);
  const std::vector<FreeWaveParams> sys2{make_free_state(1.0, 1.0), make_free_state(2.0, 1.0)};
  const std::vector<PointerState> same{pointer(0), pointer(0)};
  const std::vector<Complex> amp2{std::sqrt(0.5), std::sqrt(0.5)};
  CHECK_THROWS_AS(tensor_compose(sys2, same, amp2), InvalidInput);
}

TEST_CASE("product eigenvalue multiplies factor eigenvalues") {
  // hbar omega of a plane wave with k = 2 is 2; with k = sqrt(6) it is 3
  FreeWaveParams a = mp_plane_wave(make_free_state(2.0, 0.0));
  FreeWaveParams b = mp_plane_wave(make_free_state(std::sqrt(6.0), 0.0));
  const ProductTerm t{1.0, a, {b, 0}};
  const Complex e = product_eigenvalue(Observable::H, Observable::H, t, {0.0, 1.0}, {0.0, 1.0});
  CHECK(std::abs(e - 6.0) < 1e-12);
  const auto c = pair(1.0, 0.0);
  CHECK(c[0].amplitude == Complex(1.0, 0.0));
}

TEST_CASE("composite Schroedinger residual") {
  const auto c = pair(1.0, 0.0);
  const Grid1D xg{3.0, 5.0, 5, 1.0};
  const Grid1D qg{4.0, 6.0, 5, 1.0};
  CHECK(composite_residual(c[0], xg, qg) < 1e-6);
  // constant potentials enter through the frequencies
  ProductTerm shifted = c[0];
  shifted.system.omega += 0.3;
  shifted.pointer.wave.omega += 0.2;
  CHECK(composite_residual(shifted, xg, qg, 0.3, 0.2) < 1e-6);
  CHECK(composite_residual(shifted, xg, qg) > 0.1 * std::abs(product_wave(shifted, 5.0, 6.0, 1.0)));
}

TEST_CASE("von Neumann projection") {
  const auto c = pair(Complex(std::sqrt(0.5), 0.0), Complex(0.0, std::sqrt(0.5)));
  const MeasurementEvent e{3.0, 3.0, 1.0};
  const auto post = von_neumann_project(c, 0, e);
  CHECK(post.projected());
  CHECK(post[0].amplitude == Complex(1.0, 0.0));
  CHECK(post[1].amplitude == Complex(0.0, 0.0));
  CHECK(post[0].system.rate == 0.0);
  CHECK(post[0].pointer.wave.rate == 0.0);
  CHECK(std::abs(product_wave(post[0], e.x, e.x, e.t)) == Approx(1.0));
  CHECK(von_neumann_project(post, 0, e) == post);
  CHECK_THROWS_AS(von_neumann_project(c, 1, e), InvalidInput);
}

TEST_CASE("composite outcome statistics") {
  const double w0 = 0.64;
  const auto c = pair(Complex(std::sqrt(w0), 0.0), Complex(std::sqrt(1.0 - w0), 0.0));
  std::vector<WaveComponent> as_state;
  for (const auto& t : c.terms()) as_state.push_back({t.amplitude, t.system});
  const auto r = run_ensemble(SuperposedState(as_state), 100000, 5, 2);
  const double sigma = std::sqrt(w0 * (1.0 - w0) / 1e5);
  CHECK(std::abs(r.frequencies[0] - w0) < 3.0 * sigma);
}

TEST_CASE("preferred basis mixtures agree") {
  const double h = std::sqrt(0.5);
  const auto phi1 = pair(1.0, 0.0);
  const auto phi2 = pair(0.0, 1.0);
  const auto plus = pair(h, h);
  const auto minus = pair(h, -h);
  const std::vector<CompositeState> a{phi1, phi2};
  const std::vector<CompositeState> b{plus, minus};
  const std::vector<double> half{0.5, 0.5};
  const auto ra = mixture_density(a, half);
  const auto rb = mixture_density(b, half);
  CHECK((ra.matrix() - rb.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  const std::vector<CompositeState> one{plus};
  const std::vector<double> unit{1.0};
  CHECK(purity(mixture_density(one, unit)) == Approx(1.0).epsilon(1e-12));
  const std::vector<double> tilted{0.7, 0.3};
  const auto rt = mixture_density(a, tilted);
  CHECK(rt(0, 0).real() == Approx(0.7));
  CHECK(rt(0, 1) == Complex(0.0, 0.0));
  CHECK(purity(rt) == Approx(0.58).epsilon(1e-12));
  const std::vector<double> bad{0.7, 0.2};
  CHECK_THROWS_AS(mixture_density(a, bad), InvalidInput);
}

TEST_CASE("averages") {
  const auto one = pair(1.0, 0.0);
  const std::vector<Complex> e1{{0.375, 0.5}, {0.875, 0.5}};
  const auto a = compare_averages(one, e1);
  CHECK(a.entangled_avg == Complex(0.375, 0.5));
  CHECK(a.reduced_avg == 0.375);
  const double h = std::sqrt(0.5);
  const auto b = compare_averages(pair(h, h), e1);
  CHECK(std::abs(b.entangled_avg - Complex(0.625, 0.5)) < 1e-15);
  CHECK(b.reduced_avg == Approx(0.625));
  const std::vector<Complex> real{{0.375, 0.0}, {0.875, 0.0}};
  const auto c = compare_averages(pair(h, h), real);
  CHECK(c.entangled_avg.imag() == 0.0);
  CHECK(c.entangled_avg.real() == c.reduced_avg);
}

TEST_CASE("property: averages split into real and rate parts") {
  testing::Gen gen(62);
  for (int i = 0; i < 200; ++i) {
    const auto a = gen.amplitudes(2);
    const auto c = pair(a[0], a[1]);
    std::vector<Complex> eig;
    double imag = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      const double r = gen.index(4) == 0 ? 0.0 : gen.uniform(0.0, 3.0);
      eig.emplace_back(gen.uniform(-2.0, 2.0), r / 2.0);
      imag += std::norm(a[j]) * r / 2.0;
    }
    const auto avg = compare_averages(c, eig);
    CHECK(avg.entangled_avg.real() == avg.reduced_avg);
    CHECK(avg.entangled_avg.imag() == Approx(imag).epsilon(1e-14));
    CHECK((avg.entangled_avg.imag() == 0.0) == (eig[0].imag() == 0.0 && eig[1].imag() == 0.0));
  }
}

TEST_CASE("ensemble report") {
  const auto s = three({0.5, 0.3, 0.2});
  const auto r = run_ensemble(s, 10001, 3, 4);
  std::uint64_t total = 0;
  for (auto c : r.counts) total += c;
  CHECK(total == 10001);
  CHECK(r.degrees_of_freedom == 2);
  CHECK(r.p_value == Approx(testing::chi_square_sf(r.chi_square, 2)).epsilon(1e-10));
  CHECK(run_ensemble(s, 10001, 3, 4).counts == r.counts);
  CHECK(run_ensemble(s, 10001, 4, 4).counts != r.counts);

  std::ostringstream csv;
  r.write_csv(csv);
  CHECK(csv.str().rfind("outcome,count,frequency,expected,z_score\n0,", 0) == 0);
  const auto j = r.to_json();
  CHECK(j.begin().key() == "n_trials");
  CHECK(j["counts"].size() == 3);
  CHECK_THROWS_AS(run_ensemble(s, 0, 1, 1), InvalidInput);
  CHECK_THROWS_AS(run_ensemble(s, 10, 1, 0), InvalidInput);
}

TEST_CASE("property: Born statistics hold across seeds") {
  testing::Gen gen(63);
  const auto a = gen.amplitudes(4);
  std::vector<WaveComponent> c;
  for (const Complex& z : a) c.push_back({z, make_free_state(1.0, 1.0)});
  const SuperposedState s(std::move(c));
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = run_ensemble(s, 20000, seed, 2);
    good += testing::chi_square_sf(r.chi_square, 3) > 0.001;
  }
  CHECK(good >= 19);
}
