#include "probwave/sturm_liouville.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "probwave/errors.hpp"
#include "probwave/potential.hpp"

namespace probwave {
namespace {

constexpr std::size_t kMaxIterations = 400;
constexpr double kRescale = 1e150;

// Tabulated W(x) = hbar^2 k^2 / 2m + V on a uniform grid.
struct Field {
  double x0;
  double h;
  double kinetic;  // hbar^2 / 2m
  std::vector<double> x;
  std::vector<double> w;
};

Field tabulate(const SLProblem& p, std::size_t n, bool cell_centred) {
  Field f;
  f.x0 = p.x0;
  f.kinetic = p.constants.hbar * p.constants.hbar / (2.0 * p.constants.mass);
  const double span = p.x_end - p.x0;
  f.h = cell_centred ? span / static_cast<double>(n) : span / static_cast<double>(n - 1);
  f.x.resize(n);
  f.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double offset = cell_centred ? static_cast<double>(i) + 0.5 : static_cast<double>(i);
    f.x[i] = cell_centred || i + 1 < n ? p.x0 + offset * f.h : p.x_end;
    const double k = p.kx(f.x[i]);
    const double v = p.potential(f.x[i]);
    require_finite(k, "k(x)");
    require_finite(v, "V(x)");
    f.w[i] = p.constants.hbar * p.constants.hbar * k * k / (2.0 * p.constants.mass) + v;
  }
  return f;
}

double resolution_ceiling(const Field& f) {
  const double w_min = *std::min_element(f.w.begin(), f.w.end());
  const double k_max = std::numbers::pi / (4.0 * f.h);
  return w_min + f.kinetic * k_max * k_max;
}

// ---------------------------------------------------------------- Numerov

class Numerov {
 public:
  explicit Numerov(const Field& field) : f_(field), c_(field.h * field.h / 12.0) {}

  // R'' = g R with g = (W - E) / kinetic.
  double g(std::size_t i, double e) const { return (f_.w[i] - e) / f_.kinetic; }

  // Forward solution from the Neumann end, R_0 = 1. Values are rescaled
  // in place when they grow large; only the shape is meaningful.
  void forward(double e, std::vector<double>& r) const {
    const std::size_t n = f_.w.size();
    r.assign(n, 0.0);
    const double g0 = g(0, e);
    const double g1 = g(1, e);
    const double g2 = g(2, e);
    const double gm = 2.0 * g0 - g1;
    const double dg0 = (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * f_.h);
    const double h3 = f_.h * f_.h * f_.h;
    r[0] = 1.0;
    r[1] = (2.0 * (1.0 + 5.0 * c_ * g0) + (1.0 - c_ * gm) * h3 / 3.0 * dg0) /
           ((1.0 - c_ * g1) + (1.0 - c_ * gm));
    double prev_g = g0;
    double cur_g = g1;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double next_g = g(i + 1, e);
      r[i + 1] = (2.0 * (1.0 + 5.0 * c_ * cur_g) * r[i] - (1.0 - c_ * prev_g) * r[i - 1]) /
                 (1.0 - c_ * next_g);
      if (std::abs(r[i + 1]) > kRescale) {
        for (std::size_t j = 0; j <= i + 1; ++j) r[j] /= kRescale;
      }
      prev_g = cur_g;
      cur_g = next_g;
    }
  }

  // Backward solution from the Dirichlet end down to index `stop`.
  void backward(double e, std::size_t stop, std::vector<double>& r) const {
    const std::size_t n = f_.w.size();
    r.assign(n, 0.0);
    r[n - 1] = 0.0;
    r[n - 2] = 1.0;
    for (std::size_t i = n - 2; i > stop; --i) {
      r[i - 1] = (2.0 * (1.0 + 5.0 * c_ * g(i, e)) * r[i] - (1.0 - c_ * g(i + 1, e)) * r[i + 1]) /
                 (1.0 - c_ * g(i - 1, e));
      if (std::abs(r[i - 1]) > kRescale) {
        for (std::size_t j = i - 1; j < n; ++j) r[j] /= kRescale;
      }
    }
  }

 private:
  const Field& f_;
  double c_;
};

std::size_t sign_changes(const std::vector<double>& r) {
  std::size_t count = 0;
  double last = r[0];
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] == 0.0) continue;
    if ((r[i] > 0.0) != (last > 0.0)) ++count;
    last = r[i];
  }
  // An exact zero at the far end counts as reaching that eigenvalue.
  if (r.back() == 0.0) ++count;
  return count;
}

std::vector<double> simpson_weights(std::size_t n, double h) {
  std::vector<double> w(n, 0.0);
  const std::size_t intervals = n - 1;
  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson_end != intervals) {
    const std::size_t s = simpson_end;
    w[s] += 3.0 * h / 8.0;
    w[s + 1] += 9.0 * h / 8.0;
    w[s + 2] += 9.0 * h / 8.0;
    w[s + 3] += 3.0 * h / 8.0;
  }
  return w;
}

std::vector<double> quadrature_weights(const SLSolution& s) {
  const std::size_t n = s.grid.size();
  if (s.backend == SlBackend::Shooting) {
    return simpson_weights(n, (s.x_end - s.x0) / static_cast<double>(n - 1));
  }
  return std::vector<double>(n, (s.x_end - s.x0) / static_cast<double>(n));
}

void normalize(std::vector<double>& r, const std::vector<double>& weights) {
  double norm = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) norm += weights[i] * r[i] * r[i];
  const double scale = (r[0] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm);
  for (double& v : r) v *= scale;
}

std::vector<double> shooting_eigenfunction(const Field& f, const Numerov& nv, double e) {
  std::vector<double> fwd;
  nv.forward(e, fwd);
  const std::size_t n = f.w.size();

  std::size_t turning = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (e >= f.w[i]) turning = i;
  }
  if (turning < 3 || turning + 4 >= n) return fwd;

  std::vector<double> bwd;
  nv.backward(e, turning - 2, bwd);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = turning - 2; i <= turning + 2; ++i) {
    num += fwd[i] * bwd[i];
    den += bwd[i] * bwd[i];
  }
  const double scale = num / den;
  for (std::size_t i = turning + 1; i < n; ++i) fwd[i] = scale * bwd[i];
  return fwd;
}

SLSolution solve_shooting(const SLProblem& p) {
  const Field f = tabulate(p, p.n_points, false);
  const Numerov nv(f);
  const double ceiling = resolution_ceiling(f);
  const double floor = *std::min_element(f.w.begin(), f.w.end());

  std::vector<double> r;
  auto count = [&](double e) {
    nv.forward(e, r);
    return sign_changes(r);
  };
  auto end_value = [&](double e) {
    nv.forward(e, r);
    const double a = r[r.size() - 1];
    const double b = r[r.size() - 2];
    return a / std::hypot(a, b);
  };

  const std::size_t available = count(ceiling);
  if (available < p.n_eigen) {
    throw ConvergenceError("only " + std::to_string(available) +
                               " eigenvalues lie below the grid resolution ceiling " +
                               std::to_string(ceiling) + "; requested " +
                               std::to_string(p.n_eigen),
                           0);
  }

  SLSolution out;
  out.x0 = p.x0;
  out.x_end = p.x_end;
  out.constants = p.constants;
  out.backend = SlBackend::Shooting;
  out.grid = f.x;

  for (std::size_t n = 0; n < p.n_eigen; ++n) {
    double lo = floor;
    double hi = ceiling;
    std::size_t iterations = 0;
    // Narrow until exactly one eigenvalue (the n-th) lies in (lo, hi].
    for (;;) {
      const double mid = 0.5 * (lo + hi);
      const std::size_t c_lo = count(lo);
      const std::size_t c_hi = count(hi);
      if (c_lo == n && c_hi == n + 1) break;
      if (++iterations > kMaxIterations || mid == lo || mid == hi) {
        throw ConvergenceError("eigenvalue bracketing failed for n = " + std::to_string(n),
                               iterations);
      }
      if (count(mid) <= n) {
        lo = mid;
      } else {
        hi = mid;
      }
    }

    // Illinois false position on the normalized end value.
    double f_lo = end_value(lo);
    double f_hi = end_value(hi);
    int side = 0;
    double e = lo;
    for (;;) {
      if (++iterations > kMaxIterations) {
        throw ConvergenceError("eigenvalue root search did not converge for n = " +
                                   std::to_string(n),
                               iterations);
      }
      e = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(e > lo && e < hi)) e = 0.5 * (lo + hi);
      const double fe = end_value(e);
      if (fe == 0.0 || hi - lo <= 4e-15 * std::max(1.0, std::abs(e))) break;
      if ((fe > 0.0) == (f_hi > 0.0)) {
        hi = e;
        f_hi = fe;
        if (side == -1) f_lo *= 0.5;
        side = -1;
      } else {
        lo = e;
        f_lo = fe;
        if (side == 1) f_hi *= 0.5;
        side = 1;
      }
    }
    out.eigenvalues.push_back(e);
  }

  const std::vector<double> weights = quadrature_weights(out);
  for (double e : out.eigenvalues) {
    std::vector<double> fn = shooting_eigenfunction(f, nv, e);
    normalize(fn, weights);
    out.eigenfunctions.push_back(std::move(fn));
  }
  return out;
}

// ------------------------------------------------------- dense FD matrix

struct Tridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;  // size n-1
};

Tridiagonal assemble(const Field& f) {
  const std::size_t n = f.w.size();
  const double s = f.kinetic / (f.h * f.h);
  Tridiagonal t;
  t.diag.resize(static_cast<Eigen::Index>(n));
  t.off = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n - 1), -s);
  for (std::size_t i = 0; i < n; ++i) t.diag[static_cast<Eigen::Index>(i)] = 2.0 * s + f.w[i];
  // Mirror ghost at the Neumann face, antisymmetric ghost at the Dirichlet face.
  t.diag[0] -= s;
  t.diag[static_cast<Eigen::Index>(n - 1)] += s;
  return t;
}

Eigen::VectorXd tridiagonal_eigenvalues(const Tridiagonal& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(t.diag, t.off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("tridiagonal eigenvalue iteration failed", 0);
  }
  return solver.eigenvalues();
}

// Solves (T - shift) y = b by Gaussian elimination with partial pivoting.
std::vector<double> shifted_solve(const Tridiagonal& t, double shift, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[static_cast<Eigen::Index>(i)] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    du[i] = t.off[static_cast<Eigen::Index>(i)];
    dl[i] = t.off[static_cast<Eigen::Index>(i)];
  }
  std::vector<std::size_t> pivot(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      pivot[i] = i;
      const double l = d[i] != 0.0 ? dl[i] / d[i] : 0.0;
      dl[i] = l;
      d[i + 1] -= l * du[i];
      b[i + 1] -= l * b[i];
    } else {
      pivot[i] = i + 1;
      const double l = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = l;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - l * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -l * du[i + 1];
      }
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= l * b[i];
    }
  }
  const double tiny = 1e-300;
  std::vector<double> y(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    if (k + 1 < n) s -= du[k] * y[k + 1];
    if (k + 2 < n) s -= du2[k] * y[k + 2];
    y[k] = s / (d[k] != 0.0 ? d[k] : tiny);
  }
  return y;
}

std::vector<double> inverse_iteration(const Tridiagonal& t, double lambda) {
  const std::size_t n = static_cast<std::size_t>(t.diag.size());
  const double shift = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(0.7 * static_cast<double>(i));
  for (int it = 0; it < 4; ++it) {
    v = shifted_solve(t, shift, std::move(v));
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

SLSolution solve_dense(const SLProblem& p) {
  const std::size_t cells = p.n_points - 1;
  const Field coarse = tabulate(p, cells, true);
  const Field fine = tabulate(p, 2 * cells, true);
  const Tridiagonal t_coarse = assemble(coarse);
  const Eigen::VectorXd e_coarse = tridiagonal_eigenvalues(t_coarse);
  const Eigen::VectorXd e_fine = tridiagonal_eigenvalues(assemble(fine));

  const double ceiling = resolution_ceiling(coarse);
  std::size_t available = 0;
  while (available < cells && e_coarse[static_cast<Eigen::Index>(available)] < ceiling) {
    ++available;
  }
  if (available < p.n_eigen) {
    throw ConvergenceError("only " + std::to_string(available) +
                               " eigenvalues lie below the grid resolution ceiling " +
                               std::to_string(ceiling) + "; requested " +
                               std::to_string(p.n_eigen),
                           0);
  }

  SLSolution out;
  out.x0 = p.x0;
  out.x_end = p.x_end;
  out.constants = p.constants;
  out.backend = SlBackend::DenseMatrix;
  out.grid = coarse.x;
  const std::vector<double> weights = quadrature_weights(out);
  for (std::size_t n = 0; n < p.n_eigen; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    out.eigenvalues.push_back((4.0 * e_fine[i] - e_coarse[i]) / 3.0);
    std::vector<double> fn = inverse_iteration(t_coarse, e_coarse[i]);
    normalize(fn, weights);
    out.eigenfunctions.push_back(std::move(fn));
  }
  return out;
}

}  // namespace

void SLProblem::validate() const {
  constants.validate();
  require_finite(x0, "x0");
  require_finite(x_end, "x_end");
  if (!(x0 < x_end)) throw InvalidInput("Sturm-Liouville domain requires x0 < x_end");
  if (n_eigen < 1) throw InvalidInput("n_eigen must be at least 1");
  if (n_points < 16) throw InvalidInput("n_points must be at least 16");
  if (!kx || !potential) throw InvalidInput("k(x) and V(x) must both be supplied");
}

SLProblem SLProblem::from_spec(const PotentialSpec& spec, std::size_t n_eigen,
                               std::size_t n_points) {
  SLProblem p;
  p.x0 = spec.x_start();
  p.x_end = spec.x_end();
  p.kx = [spec](double x) { return spec.k_at(x); };
  p.potential = [spec](double x) { return spec.potential_at(x); };
  p.n_eigen = n_eigen;
  p.n_points = n_points;
  p.constants = spec.constants();
  return p;
}

SLSolution solve_sturm_liouville(const SLProblem& problem, SlBackend backend) {
  problem.validate();
  return backend == SlBackend::Shooting ? solve_shooting(problem) : solve_dense(problem);
}

double eigenfunction_overlap(const SLSolution& solution, std::size_t a, std::size_t b) {
  const auto& ra = solution.eigenfunctions.at(a);
  const auto& rb = solution.eigenfunctions.at(b);
  const std::vector<double> w = quadrature_weights(solution);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * ra[i] * rb[i];
  return sum;
}

std::vector<double> discrete_arrival_times(const SLSolution& solution, double x) {
  require_finite(x, "x");
  if (!(x > solution.x0)) throw InvalidInput("arrival position must lie beyond x0");
  const PhysicalConstants& c = solution.constants;
  std::vector<double> times;
  times.reserve(solution.eigenvalues.size());
  for (double e : solution.eigenvalues) {
    if (!(e > 0.0)) {
      throw InvalidInput("discrete arrival times need positive eigenvalues; got " +
                         std::to_string(e));
    }
    const double k = std::sqrt(2.0 * c.mass * e) / c.hbar;
    const double v = c.hbar * k / c.mass;
    times.push_back((x - solution.x0) / v);
  }
  return times;
}

}  // namespace probwave
