#pragma once

// Finite-difference solver for the radial problem
//     -u'' - (N-1)/r u' = lambda f(r) / (1 - u)^2,   u'(0) = 0,  u(R) = 0
// (on the slab: -u'' = lambda f(x) / (1 - u)^2 on [-1/2, 1/2], u(+-1/2) = 0).
//
// The radial Laplacian is discretized in flux form,
//     (-Lap u)_i = [ r_{i+1/2}^{N-1} (u_i - u_{i+1}) + r_{i-1/2}^{N-1} (u_i - u_{i-1}) ] / (h^2 r_i^{N-1}),
// which at r = 0 reduces to 2N (u_0 - u_1) / h^2. The matrix is a diagonal
// similarity away from a symmetric one, which the eigenvalue solver uses.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mems/bounds.hpp"
#include "mems/domain.hpp"
#include "mems/error.hpp"

namespace mems {

class RadialGrid {
 public:
  static constexpr std::size_t min_nodes = 64;
  static constexpr std::size_t default_nodes = 2048;

  /// Uniform grid from 0 (ball) or -1/2 (slab) to the boundary. The slab grid
  /// gets one extra node when `nodes` is even so that x = 0 is a node.
  explicit RadialGrid(const Domain& domain, std::size_t nodes = default_nodes) : domain_(domain) {
    if (nodes < min_nodes) throw error(errc::invalid_argument, "grid needs at least 64 nodes");
    if (domain.is_slab() && nodes % 2 == 0) ++nodes;
    const double start = domain.is_slab() ? -domain.radius() : 0.0;
    h_ = (domain.radius() - start) / (nodes - 1);
    nodes_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) nodes_[i] = start + i * h_;
    nodes_.back() = domain.radius();
    if (domain.is_slab()) nodes_[nodes / 2] = 0.0;
  }

  const Domain& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return h_; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double node(std::size_t i) const noexcept { return nodes_[i]; }
  /// |x| at node i.
  double radius_at(std::size_t i) const noexcept { return std::abs(nodes_[i]); }

  /// Unknowns are nodes [first_unknown, last_unknown]; the rest are Dirichlet nodes.
  std::size_t first_unknown() const noexcept { return domain_.is_slab() ? 1 : 0; }
  std::size_t last_unknown() const noexcept { return nodes_.size() - 2; }
  /// Node at x = 0.
  std::size_t center() const noexcept { return domain_.is_slab() ? nodes_.size() / 2 : 0; }

 private:
  Domain domain_;
  double h_;
  std::vector<double> nodes_;
};

/// Tridiagonal matrix over the grid's unknowns, indexed by node number.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;  // lower[i] couples i to i-1, upper[i] couples i to i+1

  explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}

  /// Solves the system restricted to rows [first, last]; entries outside are untouched.
  /// Gaussian elimination without pivoting.
  void solve(std::size_t first, std::size_t last, std::span<double> rhs) const {
    std::vector<double> c(diag.size());
    double pivot = diag[first];
    if (pivot == 0.0) throw error(errc::numeric_failure, "zero pivot in tridiagonal solve");
    c[first] = upper[first] / pivot;
    rhs[first] /= pivot;
    for (std::size_t i = first + 1; i <= last; ++i) {
      pivot = diag[i] - lower[i] * c[i - 1];
      if (pivot == 0.0) throw error(errc::numeric_failure, "zero pivot in tridiagonal solve");
      c[i] = upper[i] / pivot;
      rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for (std::size_t i = last; i-- > first;) rhs[i] -= c[i] * rhs[i + 1];
  }
};

/// Discrete -Laplacian on the grid (Dirichlet rows excluded).
inline Tridiagonal negative_laplacian(const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const double h2 = grid.spacing() * grid.spacing();
  Tridiagonal a(n);
  const int dim = grid.domain().dimension();
  for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i) {
    if (grid.domain().is_slab() || dim == 1) {
      if (!grid.domain().is_slab() && i == 0) {
        a.diag[0] = 2.0 / h2;
        a.upper[0] = -2.0 / h2;
        continue;
      }
      a.lower[i] = -1.0 / h2;
      a.diag[i] = 2.0 / h2;
      a.upper[i] = -1.0 / h2;
      continue;
    }
    if (i == 0) {
      a.diag[0] = 2.0 * dim / h2;
      a.upper[0] = -2.0 * dim / h2;
      continue;
    }
    const double r = grid.node(i), half = 0.5 * grid.spacing();
    const double w_minus = std::pow((r - half) / r, dim - 1);
    const double w_plus = std::pow((r + half) / r, dim - 1);
    a.lower[i] = -w_minus / h2;
    a.diag[i] = (w_minus + w_plus) / h2;
    a.upper[i] = -w_plus / h2;
  }
  return a;
}

struct RadialSolution {
  RadialGrid grid;
  double lambda;
  std::vector<double> u;
  double max_u;
  double residual_norm;
  int newton_iters;
};

namespace detail {
inline void require_below_one(std::span<const double> u) {
  for (double v : u)
    if (!(v < 1.0)) throw error(errc::singular_state, "iterate reached u >= 1");
}

template <class F>
std::vector<double> sample(const RadialGrid& grid, const F& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid.radius_at(i));
  return out;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace detail

/// -Lap_h u - lambda f / (1 - u)^2 at every node (zero on Dirichlet nodes).
template <class F>
std::vector<double> residual(std::span<const double> u, double lambda, const RadialGrid& grid, const F& f) {
  if (u.size() != grid.size()) throw error(errc::invalid_argument, "state size does not match grid");
  detail::require_below_one(u);
  const Tridiagonal a = negative_laplacian(grid);
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i) {
    double lap = a.diag[i] * u[i] + a.upper[i] * u[i + 1];
    if (i > 0) lap += a.lower[i] * u[i - 1];
    const double gap = 1.0 - u[i];
    out[i] = lap - lambda * f(grid.radius_at(i)) / (gap * gap);
  }
  return out;
}

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// Damped Newton on the discrete system. Converges when the max-norm of the
/// residual, or of the Newton update once the residual sits at its roundoff
/// floor (~eps / h^2), falls below `tol`.
template <class F>
RadialSolution newton_solve(std::span<const double> initial, double lambda, const RadialGrid& grid, const F& f,
                            NewtonOptions options = {}) {
  std::vector<double> u(initial.begin(), initial.end());
  if (u.size() != grid.size()) throw error(errc::invalid_argument, "initial state size does not match grid");
  detail::require_below_one(u);
  u[grid.last_unknown() + 1] = 0.0;
  if (grid.domain().is_slab()) u[0] = 0.0;

  const Tridiagonal lap = negative_laplacian(grid);
  const std::vector<double> fv = detail::sample(grid, f);
  std::vector<double> res = residual(u, lambda, grid, f);
  double norm = detail::max_abs(res);
  for (int it = 0; it <= options.max_iter; ++it) {
    if (norm < options.tol) return {grid, lambda, u, *std::max_element(u.begin(), u.end()), norm, it};
    if (it == options.max_iter) break;
    Tridiagonal jac = lap;
    for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i) {
      const double gap = 1.0 - u[i];
      jac.diag[i] -= 2.0 * lambda * fv[i] / (gap * gap * gap);
    }
    std::vector<double> step(res.size());
    for (std::size_t i = 0; i < res.size(); ++i) step[i] = -res[i];
    jac.solve(grid.first_unknown(), grid.last_unknown(), step);
    for (std::size_t i = 0; i < step.size(); ++i)
      if (i < grid.first_unknown() || i > grid.last_unknown()) step[i] = 0.0;
    const double step_norm = detail::max_abs(step);

    double t = 1.0;
    std::vector<double> trial(u.size());
    std::vector<double> trial_res;
    double trial_norm = 0.0;
    for (;;) {
      bool admissible = true;
      for (std::size_t i = 0; i < u.size(); ++i) {
        trial[i] = u[i] + t * step[i];
        if (!(trial[i] < 1.0 - 1e-12)) admissible = false;
      }
      if (admissible) {
        trial_res = residual(trial, lambda, grid, f);
        trial_norm = detail::max_abs(trial_res);
        if (trial_norm < norm || t * step_norm < options.tol) break;
      }
      t *= 0.5;
      if (t < 1e-12) {
        if (!admissible) throw error(errc::singular_state, "Newton iterate forced to u >= 1", norm);
        throw error(errc::no_convergence, "Newton line search failed", norm);
      }
    }
    u.swap(trial);
    res.swap(trial_res);
    norm = trial_norm;
    if (t == 1.0 && step_norm < options.tol)
      return {grid, lambda, u, *std::max_element(u.begin(), u.end()), norm, it + 1};
  }
  throw error(errc::no_convergence, "Newton did not converge", norm);
}

enum class MinimalStatus { converged, collapsed, iteration_limit };

inline const char* to_string(MinimalStatus s) {
  switch (s) {
    case MinimalStatus::converged: return "converged";
    case MinimalStatus::collapsed: return "collapsed";
    case MinimalStatus::iteration_limit: return "iteration-limit";
  }
  return "?";
}

struct MinimalOutcome {
  MinimalStatus status;
  std::optional<RadialSolution> solution;
  int iterations;
  double final_max_u;
  /// Node updates with u_{n+1} < u_n - monotone_slack; zero for a monotone sweep.
  long decrease_events = 0;
};

struct PicardOptions {
  int max_iter = 10000;
  double collapse_margin = 1e-6;
  double step_tol = 1e-10;
  double monotone_slack = 1e-13;
};

/// Monotone iteration -Lap u_n = lambda f / (1 - u_{n-1})^2 from u_0 = 0.
template <class F>
MinimalOutcome picard_minimal(double lambda, const RadialGrid& grid, const F& f, PicardOptions options = {}) {
  if (!(lambda >= 0.0)) throw error(errc::invalid_argument, "lambda must be >= 0");
  const Tridiagonal lap = negative_laplacian(grid);
  const std::vector<double> fv = detail::sample(grid, f);
  const std::size_t first = grid.first_unknown(), last = grid.last_unknown();
  std::vector<double> prev(grid.size(), 0.0), next(grid.size(), 0.0);
  MinimalOutcome out{MinimalStatus::iteration_limit, std::nullopt, 0, 0.0, 0};
  for (int it = 1; it <= options.max_iter; ++it) {
    for (std::size_t i = first; i <= last; ++i) {
      const double gap = 1.0 - prev[i];
      next[i] = lambda * fv[i] / (gap * gap);
    }
    lap.solve(first, last, next);
    double diff = 0.0, top = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
      diff = std::max(diff, std::abs(next[i] - prev[i]));
      top = std::max(top, next[i]);
      if (next[i] < prev[i] - options.monotone_slack) ++out.decrease_events;
    }
    out.iterations = it;
    out.final_max_u = top;
    if (top >= 1.0 - options.collapse_margin) {
      out.status = MinimalStatus::collapsed;
      return out;
    }
    prev.swap(next);
    if (diff < options.step_tol) {
      const std::vector<double> res = residual(prev, lambda, grid, f);
      out.status = MinimalStatus::converged;
      out.solution = RadialSolution{grid, lambda, prev, top, detail::max_abs(res), 0};
      return out;
    }
  }
  return out;
}

struct EigenResult {
  double mu;
  /// Positive eigenfunction on the grid, max-normalized, zero on Dirichlet nodes.
  std::vector<double> phi;
};

namespace detail {

// Number of eigenvalues below x of the symmetrized tridiagonal (diag d, squared off-diagonals e2).
inline std::size_t sturm_count(std::span<const double> d, std::span<const double> e2, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    q = (d[i] - x) - (i > 0 ? e2[i - 1] / q : 0.0);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace detail

/// Smallest eigenvalue of -Lap_h - 2 lambda f / (1 - u)^3 with Dirichlet
/// conditions. A Sturm-sequence bisection on the symmetrized matrix supplies
/// the shift; shifted inverse iteration then converges the eigenvector and
/// the Rayleigh quotient to 1e-9 relative.
template <class F>
EigenResult smallest_eigenvalue(const RadialSolution& solution, const F& f) {
  const RadialGrid& grid = solution.grid;
  const std::size_t first = grid.first_unknown(), last = grid.last_unknown();
  const std::size_t m = last - first + 1;
  Tridiagonal op = negative_laplacian(grid);
  for (std::size_t i = first; i <= last; ++i) {
    const double gap = 1.0 - solution.u[i];
    if (!(gap > 0.0)) throw error(errc::singular_state, "solution touches u = 1");
    op.diag[i] -= 2.0 * solution.lambda * f(grid.radius_at(i)) / (gap * gap * gap);
  }
  std::vector<double> d(m), e2(m > 0 ? m - 1 : 0);
  for (std::size_t k = 0; k < m; ++k) d[k] = op.diag[first + k];
  for (std::size_t k = 0; k + 1 < m; ++k) e2[k] = op.upper[first + k] * op.lower[first + k + 1];

  // Gershgorin bracket for the spectrum.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = first; i <= last; ++i) {
    const double radius = std::abs(op.upper[i]) + (i > first ? std::abs(op.lower[i]) : 0.0);
    lo = std::min(lo, op.diag[i] - radius);
    hi = std::max(hi, op.diag[i] + radius);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::sturm_count(d, e2, mid) >= 1) hi = mid; else lo = mid;
  }
  double mu = 0.5 * (lo + hi);

  // Shift just below the smallest eigenvalue keeps op - shift positive definite.
  const double shift = lo - 1e-8 * std::max(1.0, std::abs(lo));
  Tridiagonal shifted = op;
  for (std::size_t i = first; i <= last; ++i) shifted.diag[i] -= shift;
  std::vector<double> x(grid.size(), 0.0);
  for (std::size_t i = first; i <= last; ++i) x[i] = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    std::vector<double> y = x;
    shifted.solve(first, last, y);
    const double scale = *std::max_element(y.begin() + first, y.begin() + last + 1);
    if (!(scale > 0.0)) throw error(errc::numeric_failure, "inverse iteration lost positivity");
    for (std::size_t i = first; i <= last; ++i) y[i] /= scale;
    // Rayleigh quotient in the weighted inner product that makes op
    // self-adjoint: w_{k+1} / w_k = upper_k / lower_{k+1}.
    std::vector<double> w(grid.size(), 0.0);
    w[first] = 1.0;
    for (std::size_t i = first + 1; i <= last; ++i) w[i] = w[i - 1] * op.upper[i - 1] / op.lower[i];
    double num = 0.0, den = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
      double ay = op.diag[i] * y[i] + op.upper[i] * y[i + 1];
      if (i > first) ay += op.lower[i] * y[i - 1];
      num += w[i] * y[i] * ay;
      den += w[i] * y[i] * y[i];
    }
    x.swap(y);
    mu = num / den;
    if (std::abs(mu - previous) <= 1e-9 * std::max(std::abs(mu), 1e-3)) {
      for (std::size_t i = 0; i < first; ++i) x[i] = 0.0;
      for (std::size_t i = last + 1; i < x.size(); ++i) x[i] = 0.0;
      return {mu, std::move(x)};
    }
    previous = mu;
  }
  throw error(errc::numeric_failure, "inverse iteration did not converge", std::abs(mu - previous));
}

struct BisectionOptions {
  double tol = 1e-4;
  PicardOptions picard = {};
};

/// lambda* as the threshold between converged and collapsed monotone
/// iterations, bisecting inside [lower_best, upper_best]. An iteration-limit
/// verdict counts as "no solution found" and lowers the upper end.
template <class F>
double lambda_star_bisection(const RadialGrid& grid, const F& f, double lower, double upper,
                             BisectionOptions options = {}) {
  if (picard_minimal(lower, grid, f, options.picard).status != MinimalStatus::converged)
    throw error(errc::bound_violation, "monotone iteration fails at the lower bound");
  if (picard_minimal(upper, grid, f, options.picard).status == MinimalStatus::converged)
    throw error(errc::bound_violation, "monotone iteration converges at the upper bound");
  while (upper - lower >= options.tol) {
    const double mid = 0.5 * (lower + upper);
    if (picard_minimal(mid, grid, f, options.picard).status == MinimalStatus::converged) lower = mid;
    else upper = mid;
  }
  return 0.5 * (lower + upper);
}

inline double lambda_star_bisection(const RadialGrid& grid, const Profile& profile, BisectionOptions options = {}) {
  const BoundsReport bounds = bounds_report(grid.domain(), profile);
  return lambda_star_bisection(grid, profile, bounds.lower_best, bounds.upper_best, options);
}

/// Exponent below which the energy estimate ||f / (1 - u)^3||_p stays bounded.
inline const double energy_exponent_limit = 1.0 + 4.0 / 3.0 + 2.0 * std::sqrt(2.0 / 3.0);

/// ||f / (1 - u)^3||_{L^p(Omega)} by the trapezoid rule on the grid.
template <class F>
double energy_norm(const RadialSolution& solution, const F& f, double p) {
  if (!(p >= 1.0)) throw error(errc::invalid_argument, "energy norm needs p >= 1");
  const RadialGrid& grid = solution.grid;
  const Domain& domain = grid.domain();
  const double h = grid.spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gap = 1.0 - solution.u[i];
    const double value = std::pow(std::abs(f(grid.radius_at(i)) / (gap * gap * gap)), p);
    const double weight = domain.is_slab() ? 1.0 : domain.radial_weight(grid.node(i));
    const double trap = (i == 0 || i + 1 == grid.size()) ? 0.5 : 1.0;
    sum += trap * h * weight * value;
  }
  return std::pow(sum, 1.0 / p);
}

}  // namespace mems
