#pragma once

// Pseudo-arclength continuation of the discrete radial problem
//     G(u, lambda) = -Lap_h u - lambda f / (1 - u)^2 = 0
// from the trivial solution up to a prescribed center deflection, for
// profiles where the shooting transformation is unavailable.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mems/bounds.hpp"
#include "mems/radial.hpp"
#include "mems/shooting.hpp"

namespace mems {

struct ContinuationOptions {
  double max_u0 = 0.999;
  double initial_step = 0.02;
  double min_step = 1e-7;
  double max_step = 0.05;
  int max_corrector_iter = 8;
  /// Corrector iteration count at or below which the step grows.
  int fast_iter = 3;
  double tol = 1e-10;
  long max_points = 200'000;
  double fold_u0_tol = 1e-8;
};

struct ContinuationResult {
  BifurcationBranch branch;
  /// Discrete solutions at the refined folds, in branch order.
  std::vector<RadialSolution> fold_solutions;
};

namespace detail {

class BorderedSystem {
 public:
  BorderedSystem(const RadialGrid& grid, const Profile& profile)
      : grid_(grid),
        lap_(negative_laplacian(grid)),
        f_(sample(grid, profile)),
        first_(grid.first_unknown()),
        last_(grid.last_unknown()),
        center_(grid.center()) {}

  const RadialGrid& grid() const noexcept { return grid_; }
  std::size_t center() const noexcept { return center_; }

  std::vector<double> residual(std::span<const double> u, double lambda) const {
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = first_; i <= last_; ++i) {
      double lap = lap_.diag[i] * u[i] + lap_.upper[i] * u[i + 1];
      if (i > 0) lap += lap_.lower[i] * u[i - 1];
      const double gap = 1.0 - u[i];
      out[i] = lap - lambda * f_[i] / (gap * gap);
    }
    return out;
  }

  /// a = J^{-1} g and b = J^{-1} G_lambda at (u, lambda).
  void solve_pair(std::span<const double> u, double lambda, std::vector<double>& a, std::vector<double>& b) const {
    Tridiagonal jac = lap_;
    b.assign(u.size(), 0.0);
    for (std::size_t i = first_; i <= last_; ++i) {
      const double gap = 1.0 - u[i];
      jac.diag[i] -= 2.0 * lambda * f_[i] / (gap * gap * gap);
      b[i] = -f_[i] / (gap * gap);
    }
    jac.solve(first_, last_, a);
    jac.solve(first_, last_, b);
  }

  bool admissible(std::span<const double> u) const {
    for (std::size_t i = first_; i <= last_; ++i)
      if (!(u[i] < 1.0 - 1e-12)) return false;
    return true;
  }

  std::size_t first() const noexcept { return first_; }
  std::size_t last() const noexcept { return last_; }
  std::size_t unknowns() const noexcept { return last_ - first_ + 1; }

 private:
  const RadialGrid& grid_;
  Tridiagonal lap_;
  std::vector<double> f_;
  std::size_t first_, last_, center_;
};

struct ContinuationState {
  std::vector<double> u;
  double lambda;
};

}  // namespace detail

/// Continuation engine. Distances in (u, lambda) space use the inner product
///     <x, y> = (x_c y_c + mean_i x_i y_i) / 2 + x_lambda y_lambda / Lambda^2,
/// with x_c the center value and Lambda a closed-form lower bound on lambda*,
/// so both coordinates are O(1) along the branch.
class Continuation {
 public:
  Continuation(const Domain& domain, const Profile& profile, const RadialGrid& grid, ContinuationOptions options = {})
      : domain_(domain), profile_(profile), system_(grid, profile), options_(options) {
    if (!(grid.domain() == domain)) throw error(errc::invalid_argument, "grid does not belong to the domain");
    if (!(options.max_u0 > 0.0 && options.max_u0 < 1.0))
      throw error(errc::invalid_argument, "max_u0 must lie in (0, 1)");
    check_profile(domain, profile);
    scale_ = lower_bound_ball(domain, profile);
  }

  ContinuationResult run() {
    const std::size_t n = system_.grid().size();
    std::vector<detail::ContinuationState> states;
    states.push_back({std::vector<double>(n, 0.0), 0.0});
    // Two points on the stable branch seed the secant predictor.
    for (double fraction : {0.02, 0.04}) {
      const double lambda = fraction * scale_;
      RadialSolution s = newton_solve(states.back().u, lambda, system_.grid(), profile_);
      states.push_back({std::move(s.u), lambda});
    }

    bool partial = false;
    double ds = options_.initial_step;
    while (states.back().u[system_.center()] < options_.max_u0) {
      if (static_cast<long>(states.size()) >= options_.max_points) {
        partial = true;
        break;
      }
      const auto& prev = states[states.size() - 2];
      const auto& cur = states.back();
      std::vector<double> tangent(n);
      for (std::size_t i = 0; i < n; ++i) tangent[i] = cur.u[i] - prev.u[i];
      double tangent_lambda = cur.lambda - prev.lambda;
      const double norm = std::sqrt(dot(tangent, tangent_lambda, tangent, tangent_lambda));
      for (double& t : tangent) t /= norm;
      tangent_lambda /= norm;

      std::optional<detail::ContinuationState> next;
      int iterations = 0;
      while (ds >= options_.min_step) {
        next = correct(cur, tangent, tangent_lambda, ds, iterations);
        if (next) break;
        ds *= 0.5;
      }
      if (!next) {
        partial = true;
        break;
      }
      // Clip the final step onto u0 = max_u0 so the branch ends there.
      if (next->u[system_.center()] > options_.max_u0) {
        if (auto clipped = solve_at_center(options_.max_u0, *next)) next = clipped;
      }
      states.push_back(std::move(*next));
      if (iterations <= options_.fast_iter) ds = std::min(ds * 1.5, options_.max_step);
      else if (iterations >= options_.max_corrector_iter - 2) ds *= 0.5;
    }
    return assemble(states, partial);
  }

  /// Solves G = 0 with the center value pinned to u0, starting from `guess`.
  std::optional<detail::ContinuationState> solve_at_center(double u0, const detail::ContinuationState& guess) const {
    detail::ContinuationState s = guess;
    const std::size_t c = system_.center();
    // Start from the guess rescaled to the requested center value.
    const double factor = s.u[c] > 0.0 ? u0 / s.u[c] : 1.0;
    for (double& v : s.u) v = std::min(v * factor, u0);
    s.u[c] = u0;
    std::vector<double> a, b;
    for (int it = 0; it < 2 * options_.max_corrector_iter; ++it) {
      const std::vector<double> g = system_.residual(s.u, s.lambda);
      a = g;
      system_.solve_pair(s.u, s.lambda, a, b);
      if (b[c] == 0.0) return std::nullopt;
      const double dlambda = -a[c] / b[c];
      double step = 0.0;
      std::vector<double> du(s.u.size(), 0.0);
      for (std::size_t i = system_.first(); i <= system_.last(); ++i) {
        du[i] = -a[i] - dlambda * b[i];
        step = std::max(step, std::abs(du[i]));
      }
      du[c] = 0.0;
      if (!apply(s, du, dlambda)) return std::nullopt;
      if (step < options_.tol && std::abs(dlambda) < options_.tol * scale_) return s;
    }
    return std::nullopt;
  }

 private:
  double dot(std::span<const double> x, double xl, std::span<const double> y, double yl) const {
    double mean = 0.0;
    for (std::size_t i = system_.first(); i <= system_.last(); ++i) mean += x[i] * y[i];
    mean /= static_cast<double>(system_.unknowns());
    const std::size_t c = system_.center();
    return 0.5 * (x[c] * y[c] + mean) + xl * yl / (scale_ * scale_);
  }

  // Applies (du, dlambda) with halving until the state stays admissible.
  bool apply(detail::ContinuationState& s, std::span<const double> du, double dlambda) const {
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      std::vector<double> trial(s.u.size());
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] = s.u[i] + t * du[i];
      if (system_.admissible(trial)) {
        s.u.swap(trial);
        s.lambda += t * dlambda;
        return true;
      }
    }
    return false;
  }

  // Newton on the bordered system [G; <T, X - X_pred>] = 0 by block elimination.
  std::optional<detail::ContinuationState> correct(const detail::ContinuationState& cur,
                                                   std::span<const double> tangent, double tangent_lambda, double ds,
                                                   int& iterations) const {
    detail::ContinuationState s{cur.u, cur.lambda + ds * tangent_lambda};
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] += ds * tangent[i];
    if (!system_.admissible(s.u)) return std::nullopt;
    const detail::ContinuationState predicted = s;
    std::vector<double> a, b, offset(s.u.size());
    for (iterations = 1; iterations <= options_.max_corrector_iter; ++iterations) {
      a = system_.residual(s.u, s.lambda);
      system_.solve_pair(s.u, s.lambda, a, b);
      for (std::size_t i = 0; i < offset.size(); ++i) offset[i] = s.u[i] - predicted.u[i];
      const double constraint = dot(tangent, tangent_lambda, offset, s.lambda - predicted.lambda);
      const double ta = dot(tangent, 0.0, a, 0.0);
      const double tb = dot(tangent, 0.0, b, 0.0);
      const double denom = tangent_lambda / (scale_ * scale_) - tb;
      if (denom == 0.0 || !std::isfinite(denom)) return std::nullopt;
      const double dlambda = (-constraint + ta) / denom;
      std::vector<double> du(s.u.size(), 0.0);
      double step = 0.0;
      for (std::size_t i = system_.first(); i <= system_.last(); ++i) {
        du[i] = -a[i] - dlambda * b[i];
        step = std::max(step, std::abs(du[i]));
      }
      if (!std::isfinite(step)) return std::nullopt;
      // Reject corrections much larger than the step itself.
      if (step > 10.0 * std::max(ds, 1e-3)) return std::nullopt;
      if (!apply(s, du, dlambda)) return std::nullopt;
      if (step < options_.tol && std::abs(dlambda) < options_.tol * scale_) return s;
    }
    return std::nullopt;
  }

  ContinuationResult assemble(const std::vector<detail::ContinuationState>& states, bool partial) const {
    const std::size_t c = system_.center();
    std::vector<double> lambdas;
    for (const auto& s : states) lambdas.push_back(s.lambda);
    const std::vector<std::size_t> turns = detail::turning_points(lambdas, 1e-10);

    ContinuationResult result;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<BranchPoint, std::optional<detail::ContinuationState>>> folds;
    for (std::size_t idx : turns) {
      const bool maximum = lambdas[idx] >= lambdas[idx - 1];
      const double sign = maximum ? 1.0 : -1.0;
      double lo = states[idx - 1].u[c], hi = states[std::min(idx + 1, states.size() - 1)].u[c];
      detail::ContinuationState best = states[idx];
      double best_value = sign * best.lambda;
      const auto value_at = [&](double u0) {
        auto s = solve_at_center(u0, best);
        if (!s) return -std::numeric_limits<double>::infinity();
        if (sign * s->lambda > best_value) {
          best_value = sign * s->lambda;
          best = *s;
        }
        return sign * s->lambda;
      };
      const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
      double f1 = value_at(x1), f2 = value_at(x2);
      while (hi - lo > options_.fold_u0_tol) {
        if (f1 > f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - inv_phi * (hi - lo);
          f1 = value_at(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + inv_phi * (hi - lo);
          f2 = value_at(x2);
        }
      }
      folds.push_back({BranchPoint{nan, best.lambda, best.u[c], 0}, best});
    }

    BifurcationBranch& branch = result.branch;
    int arc = 0;
    std::size_t next_fold = 0;
    for (const auto& s : states) {
      while (next_fold < folds.size() && folds[next_fold].first.u0 <= s.u[c]) {
        BranchPoint p = folds[next_fold].first;
        p.arc_index = arc++;
        branch.folds.push_back(branch.points.size());
        branch.points.push_back(p);
        const auto& fs = *folds[next_fold].second;
        const std::vector<double> g = system_.residual(fs.u, fs.lambda);
        result.fold_solutions.push_back(RadialSolution{system_.grid(), fs.lambda, fs.u, fs.u[c],
                                                       detail::max_abs(g), 0});
        ++next_fold;
      }
      if (!branch.points.empty() && branch.points.back().u0 == s.u[c]) continue;
      branch.points.push_back({nan, s.lambda, s.u[c], arc});
    }
    branch.points.front().gamma = 0.0;
    branch.lambda_star = 0.0;
    for (const auto& p : branch.points) branch.lambda_star = std::max(branch.lambda_star, p.lambda);
    branch.partial = partial;
    if (profile_.kind() != Profile::Kind::exponential) {
      const auto problem = ShootingProblem::from(domain_, profile_);
      if (auto limit = lambda_asymptote(problem.n, problem.alpha).value)
        branch.lambda_asymptote = *limit * problem.lambda_scale;
    }
    return result;
  }

  Domain domain_;
  Profile profile_;
  detail::BorderedSystem system_;
  ContinuationOptions options_;
  double scale_;
};

inline ContinuationResult continuation_run(const Domain& domain, const Profile& profile, const RadialGrid& grid,
                                           ContinuationOptions options = {}) {
  return Continuation(domain, profile, grid, options).run();
}

inline BifurcationBranch continuation_trace(const Domain& domain, const Profile& profile, const RadialGrid& grid,
                                            double max_u0 = 0.999) {
  ContinuationOptions options;
  options.max_u0 = max_u0;
  return continuation_run(domain, profile, grid, options).branch;
}

}  // namespace mems
