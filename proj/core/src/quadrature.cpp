#include "probwave/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace probwave::quad {
namespace {

GaussRule build_legendre(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / static_cast<double>(j);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

// Golub-Welsch on the Laguerre Jacobi matrix.
GaussRule build_laguerre(std::size_t n) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * i + 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = static_cast<double>(i + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, static_cast<Eigen::Index>(i));
    rule.weights[i] = v0 * v0;
  }
  return rule;
}

template <class Builder>
const GaussRule& cached(std::map<std::size_t, std::unique_ptr<GaussRule>>& cache, std::mutex& mu,
                        std::size_t n, Builder build) {
  if (n == 0) throw InvalidInput("quadrature order must be positive");
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build(n));
  return *slot;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, build_legendre);
}

const GaussRule& gauss_laguerre(std::size_t n) {
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, build_laguerre);
}

}  // namespace probwave::quad
