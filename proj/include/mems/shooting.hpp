#pragma once

// Bifurcation branches of the power-law problem on the unit N-ball by the
// shooting transformation u(r) = 1 - w(gamma r) / w(gamma), where
//     w'' + (N-1)/P w' = P^alpha / w^2,   w(0) = 1, w'(0) = 0,
// so that each gamma > 0 gives one solution with
//     u(0) = 1 - 1/w(gamma),   lambda = gamma^{2+alpha} / w(gamma)^3.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mems/asymptotics.hpp"
#include "mems/domain.hpp"
#include "mems/error.hpp"
#include "mems/ode.hpp"
#include "mems/radial.hpp"

namespace mems {

struct ShootOptions {
  /// w is taken from its series expansion on [0, series_start].
  double series_start = 1e-3;
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct ShootValue {
  double w;
  double w_prime;
};

struct BranchPoint {
  double gamma;  // NaN for points produced by continuation
  double lambda;
  double u0;
  int arc_index;
};

struct BifurcationBranch {
  std::vector<BranchPoint> points;
  std::vector<std::size_t> folds;
  double lambda_star;
  std::optional<double> lambda_asymptote;
  /// Set when continuation stopped before reaching its target.
  bool partial = false;
};

namespace detail {

inline OdeState<2> shoot_series(int n, double alpha, double p) {
  const double k = (2.0 + alpha) * (n + alpha);
  return {1.0 + std::pow(p, 2.0 + alpha) / k, std::pow(p, 1.0 + alpha) / (n + alpha)};
}

}  // namespace detail

/// A single integration of the shooting IVP that can be advanced through
/// increasing values of P and copied to branch off intermediate states.
class ShootTrajectory {
 public:
  ShootTrajectory(int n, double alpha, ShootOptions options = {})
      : n_(n),
        alpha_(alpha),
        options_(options),
        ode_(options.series_start, detail::shoot_series(n, alpha, options.series_start),
             OdeOptions{options.rtol, options.atol, 1e-14, 50'000'000}) {
    if (n < 1) throw error(errc::invalid_dimension, "shooting needs N >= 1");
    if (!(alpha >= 0.0)) throw error(errc::invalid_argument, "shooting needs alpha >= 0");
  }

  ShootValue at(double p) {
    if (!(p > 0.0)) throw error(errc::invalid_argument, "gamma must be positive");
    if (p <= options_.series_start) {
      const auto s = detail::shoot_series(n_, alpha_, p);
      return {s[0], s[1]};
    }
    if (p < ode_.t()) throw error(errc::invalid_argument, "shooting trajectory cannot move backwards");
    const int n = n_;
    const double alpha = alpha_;
    ode_.advance(
        [n, alpha](double x, const OdeState<2>& y) {
          return OdeState<2>{y[1], std::pow(x, alpha) / (y[0] * y[0]) - (n - 1) / x * y[1]};
        },
        p);
    return {ode_.y()[0], ode_.y()[1]};
  }

  double position() const noexcept { return ode_.t(); }
  int dimension() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }

 private:
  int n_;
  double alpha_;
  ShootOptions options_;
  DormandPrince<2> ode_;
};

/// (w(gamma), w'(gamma)).
inline ShootValue shoot(int n, double alpha, double gamma, ShootOptions options = {}) {
  ShootTrajectory trajectory(n, alpha, options);
  return trajectory.at(gamma);
}

inline BranchPoint branch_point_from(double alpha, double gamma, double w) {
  return {gamma, std::pow(gamma, 2.0 + alpha) / (w * w * w), 1.0 - 1.0 / w, 0};
}

inline BranchPoint branch_point(int n, double alpha, double gamma, ShootOptions options = {}) {
  return branch_point_from(alpha, gamma, shoot(n, alpha, gamma, options).w);
}

struct TraceOptions {
  double gamma_min = 1e-2;
  /// Folds are certified only once lambda retreats this far (relative) from
  /// a running extremum; smaller wiggles are integration noise.
  double fold_noise = 1e-8;
  double fold_gamma_tol = 1e-8;
  ShootOptions shoot = {};
};

namespace detail {

// Index pairs (before, after) around each certified turning point of lambda.
inline std::vector<std::size_t> turning_points(std::span<const double> lambda, double noise) {
  std::vector<std::size_t> out;
  if (lambda.size() < 3) return out;
  int direction = lambda[1] >= lambda[0] ? 1 : -1;
  std::size_t extreme = 1;
  for (std::size_t i = 2; i < lambda.size(); ++i) {
    const double gap = (lambda[i] - lambda[extreme]) * direction;
    if (gap > 0.0) {
      extreme = i;
    } else if (-gap > noise * std::abs(lambda[extreme])) {
      out.push_back(extreme);
      direction = -direction;
      extreme = i;
    }
  }
  return out;
}

}  // namespace detail

/// Samples the branch on a log grid of n_samples values of gamma in
/// [gamma_min, gamma_max], refines every certified fold by golden-section
/// search in gamma, and prepends the trivial solution at the origin.
inline BifurcationBranch trace_branch(int n, double alpha, double gamma_max, int n_samples,
                                      TraceOptions options = {}) {
  if (n_samples < 100) throw error(errc::invalid_argument, "trace needs at least 100 samples");
  const double gamma_min = std::min(options.gamma_min, gamma_max * 1e-3);
  std::vector<double> gammas(n_samples);
  const double log_lo = std::log(gamma_min), log_hi = std::log(gamma_max);
  for (int i = 0; i < n_samples; ++i) gammas[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n_samples - 1));
  gammas.back() = gamma_max;

  ShootTrajectory trajectory(n, alpha, options.shoot);
  std::vector<ShootTrajectory> snapshots;
  snapshots.reserve(n_samples);
  std::vector<BranchPoint> samples(n_samples);
  std::vector<double> lambdas(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    samples[i] = branch_point_from(alpha, gammas[i], trajectory.at(gammas[i]).w);
    lambdas[i] = samples[i].lambda;
    snapshots.push_back(trajectory);
  }

  std::vector<std::size_t> turns = detail::turning_points(lambdas, options.fold_noise);
  std::vector<BranchPoint> folds;
  for (std::size_t idx : turns) {
    const bool maximum = lambdas[idx] >= lambdas[idx - 1];
    const std::size_t left = idx - 1;
    const std::size_t right = std::min<std::size_t>(idx + 1, n_samples - 1);
    const auto lambda_at = [&](double g) {
      ShootTrajectory t = snapshots[left];
      const double value = branch_point_from(alpha, g, t.at(g).w).lambda;
      return maximum ? value : -value;
    };
    double a = gammas[left], b = gammas[right];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = lambda_at(c), fd = lambda_at(d);
    while (b - a > options.fold_gamma_tol * std::max(1.0, a)) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = lambda_at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = lambda_at(d);
      }
    }
    double g = 0.5 * (a + b);
    // Keep the sampled extremum if the search did not improve on it.
    if (lambda_at(g) < (maximum ? lambdas[idx] : -lambdas[idx])) g = gammas[idx];
    ShootTrajectory t = snapshots[left];
    folds.push_back(branch_point_from(alpha, g, t.at(g).w));
  }

  BifurcationBranch branch;
  branch.points.reserve(n_samples + folds.size() + 1);
  branch.points.push_back({0.0, 0.0, 0.0, 0});
  int arc = 0;
  std::size_t next_fold = 0;
  for (int i = 0; i < n_samples; ++i) {
    bool replaced = false;
    while (next_fold < folds.size() && folds[next_fold].gamma <= samples[i].gamma) {
      folds[next_fold].arc_index = arc++;
      branch.folds.push_back(branch.points.size());
      branch.points.push_back(folds[next_fold]);
      replaced = replaced || folds[next_fold].gamma == samples[i].gamma;
      ++next_fold;
    }
    if (replaced) continue;
    samples[i].arc_index = arc;
    branch.points.push_back(samples[i]);
  }
  branch.lambda_star = 0.0;
  for (const auto& p : branch.points) branch.lambda_star = std::max(branch.lambda_star, p.lambda);
  branch.lambda_asymptote = lambda_asymptote(n, alpha).value;
  return branch;
}

/// Number of solutions at `lambda` along the traced branch: branch points
/// exactly at lambda plus strict crossings between consecutive points.
/// Throws insufficient-trace when the untraced tail must still cross lambda.
inline int count_solutions(const BifurcationBranch& branch, double lambda, std::optional<double> discriminant_sign = {}) {
  if (!(lambda > 0.0)) throw error(errc::invalid_argument, "lambda must be positive");
  if (branch.points.size() < 2) throw error(errc::insufficient_trace, "branch has no samples");
  const double limit = branch.lambda_asymptote.value_or(0.0);
  const double end = branch.points.back().lambda;
  if (lambda != limit) {
    if ((lambda - end) * (lambda - limit) < 0.0)
      throw error(errc::insufficient_trace, "lambda lies between the branch end and its limit");
    // Oscillating tails keep crossing levels inside the last fold's amplitude.
    const bool oscillatory = discriminant_sign.value_or(1.0) < 0.0;
    if (oscillatory && branch.lambda_asymptote && !branch.folds.empty()) {
      const double amplitude = std::abs(branch.points[branch.folds.back()].lambda - limit);
      if (std::abs(lambda - limit) < amplitude)
        throw error(errc::insufficient_trace, "lambda lies inside the untraced oscillation envelope");
    }
  }
  int count = 0;
  const auto& pts = branch.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].lambda == lambda) ++count;
    if ((pts[i - 1].lambda - lambda) * (pts[i].lambda - lambda) < 0.0) ++count;
  }
  return count;
}

/// Power-law or constant problem on a ball or the slab expressed through the
/// unit-ball shooting problem: lambda = lambda_unit / (c R^{2+alpha}).
struct ShootingProblem {
  int n;
  double alpha;
  double lambda_scale;
  double radius;

  static ShootingProblem from(const Domain& domain, const Profile& profile) {
    if (profile.kind() == Profile::Kind::exponential)
      throw error(errc::wrong_profile, "shooting applies to power-law and constant profiles only");
    const double alpha = profile.kind() == Profile::Kind::power_law ? profile.alpha() : 0.0;
    const double c = profile.kind() == Profile::Kind::power_law ? profile.coefficient() : 1.0;
    const double R = domain.radius();
    return {domain.dimension(), alpha, 1.0 / (c * std::pow(R, 2.0 + alpha)), R};
  }

  BifurcationBranch trace(double gamma_max, int n_samples, TraceOptions options = {}) const {
    BifurcationBranch branch = trace_branch(n, alpha, gamma_max, n_samples, options);
    for (auto& p : branch.points) p.lambda *= lambda_scale;
    branch.lambda_star *= lambda_scale;
    if (branch.lambda_asymptote) *branch.lambda_asymptote *= lambda_scale;
    return branch;
  }

  /// u at the grid nodes for the branch point at gamma, and its lambda.
  std::pair<std::vector<double>, double> profile_on(const RadialGrid& grid, double gamma,
                                                    ShootOptions options = {}) const {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < grid.size(); ++i) order.emplace_back(gamma * grid.radius_at(i) / radius, i);
    std::sort(order.begin(), order.end());
    ShootTrajectory trajectory(n, alpha, options);
    std::vector<double> w(grid.size());
    for (const auto& [p, i] : order) w[i] = p > 0.0 ? trajectory.at(p).w : 1.0;
    const double w_end = trajectory.at(gamma).w;
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = 1.0 - w[i] / w_end;
    u[grid.last_unknown() + 1] = 0.0;
    if (grid.domain().is_slab()) u[0] = 0.0;
    return {std::move(u), lambda_scale * std::pow(gamma, 2.0 + alpha) / (w_end * w_end * w_end)};
  }
};

}  // namespace mems
