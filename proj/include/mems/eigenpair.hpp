#pragma once

// First Dirichlet eigenpair of -Laplacian on the slab and on N-balls.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <vector>

#include "mems/domain.hpp"
#include "mems/ode.hpp"
#include "mems/special.hpp"

namespace mems {

/// mu is the first eigenvalue; phi and psi are the positive eigenfunction as
/// functions of r = |x|, normalized by integral(phi) = 1 and sup(psi) = 1.
struct Eigenpair {
  double mu;
  std::function<double(double)> phi;
  std::function<double(double)> psi;
};

namespace detail {

/// Cubic Hermite interpolation of samples (r_i, y_i, y'_i) on a uniform grid.
class HermiteTable {
 public:
  HermiteTable(double r_max, std::vector<double> values, std::vector<double> slopes)
      : r_max_(r_max), h_(r_max / (values.size() - 1)), values_(std::move(values)), slopes_(std::move(slopes)) {}

  double operator()(double r) const {
    r = std::clamp(r, 0.0, r_max_);
    std::size_t i = std::min(static_cast<std::size_t>(r / h_), values_.size() - 2);
    const double t = (r - i * h_) / h_;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h_ * slopes_[i] + (-2 * t3 + 3 * t2) * values_[i + 1] +
           (t3 - t2) * h_ * slopes_[i + 1];
  }

 private:
  double r_max_, h_;
  std::vector<double> values_, slopes_;
};

// Radial Helmholtz equation phi'' + (N-1)/r phi' + mu phi = 0 on the unit ball.
inline auto radial_helmholtz(int dimension, double mu) {
  return [dimension, mu](double r, const OdeState<2>& y) {
    return OdeState<2>{y[1], -mu * y[0] - (dimension - 1) / r * y[1]};
  };
}

inline constexpr double helmholtz_start = 1e-3;

inline OdeState<2> helmholtz_series(int dimension, double mu, double r) {
  const double n = dimension;
  return {1.0 - mu * r * r / (2 * n) + mu * mu * std::pow(r, 4) / (8 * n * (n + 2)),
          -mu * r / n + mu * mu * r * r * r / (2 * n * (n + 2))};
}

// phi(1; mu) for the unit-ball shooting problem, or -1 if phi vanishes before r = 1.
inline double helmholtz_endpoint(int dimension, double mu) {
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  DormandPrince<2> ode(helmholtz_start, helmholtz_series(dimension, mu, helmholtz_start), opts);
  const auto rhs = radial_helmholtz(dimension, mu);
  constexpr int pieces = 64;
  for (int k = 1; k <= pieces; ++k) {
    ode.advance(rhs, helmholtz_start + (1.0 - helmholtz_start) * k / pieces);
    if (k < pieces && ode.y()[0] <= 0.0) return -1.0;
  }
  return ode.y()[0];
}

// Smallest eigenvalue of the unit N-ball by shooting on mu.
inline double ball_eigenvalue_by_shooting(int dimension) {
  double lo = 0.5 * dimension, hi = lo;
  double f_lo = helmholtz_endpoint(dimension, lo);
  while (f_lo <= 0.0) {
    lo *= 0.5;
    f_lo = helmholtz_endpoint(dimension, lo);
  }
  double f_hi = f_lo;
  for (int it = 0; f_hi > 0.0; ++it) {
    hi *= 1.5;
    f_hi = helmholtz_endpoint(dimension, hi);
    if (it > 200) throw error(errc::numeric_failure, "could not bracket ball eigenvalue");
  }
  // Illinois-modified regula falsi; f is continuous on the bracket except
  // where the -1 sentinel applies, which only tightens hi.
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(mid > lo && mid < hi) || f_hi == -1.0) mid = 0.5 * (lo + hi);
    const double f_mid = helmholtz_endpoint(dimension, mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      f_hi = f_mid;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    }
    if (hi - lo < 1e-13 * hi) return 0.5 * (lo + hi);
  }
  throw error(errc::numeric_failure, "ball eigenvalue shooting did not converge", hi - lo);
}

inline std::shared_ptr<const HermiteTable> ball_eigenfunction_table(int dimension, double mu) {
  constexpr std::size_t samples = 4097;
  std::vector<double> values(samples), slopes(samples);
  values[0] = 1.0;
  slopes[0] = 0.0;
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  const double h = 1.0 / (samples - 1);
  const auto rhs = radial_helmholtz(dimension, mu);
  // The first sample is inside the series region.
  const auto first = helmholtz_series(dimension, mu, h);
  values[1] = first[0];
  slopes[1] = first[1];
  DormandPrince<2> ode(h, first, opts);
  for (std::size_t i = 2; i < samples; ++i) {
    ode.advance(rhs, i * h);
    values[i] = ode.y()[0];
    slopes[i] = ode.y()[1];
  }
  values.back() = 0.0;
  return std::make_shared<const HermiteTable>(1.0, std::move(values), std::move(slopes));
}

}  // namespace detail

inline Eigenpair first_eigenpair(const Domain& domain) {
  using std::numbers::pi;
  const int n = domain.dimension();
  const double R = domain.radius();
  if (n == 1) {
    // Covers the slab (R = 1/2): psi = cos(pi r / 2R), integral over [-R, R] is 4R/pi.
    const double k = pi / (2 * R);
    const double norm = pi / (4 * R);
    return {k * k, [k, norm](double r) { return norm * std::cos(k * r); }, [k](double r) { return std::cos(k * r); }};
  }
  if (n == 2) {
    const double z0 = j0_first_zero();
    const double norm = z0 / (2 * pi * R * R * bessel_j(1, z0));
    return {z0 * z0 / (R * R), [z0, R, norm](double r) { return norm * bessel_j(0, z0 * r / R); },
            [z0, R](double r) { return bessel_j(0, z0 * r / R); }};
  }
  const double mu_unit = detail::ball_eigenvalue_by_shooting(n);
  auto table = detail::ball_eigenfunction_table(n, mu_unit);
  const double weight = n * unit_ball_volume(n);
  const double unit_integral = integrate([&](double r) { return (*table)(r)*weight * std::pow(r, n - 1); }, 0.0, 1.0, 1e-13);
  const double norm = 1.0 / (unit_integral * std::pow(R, n));
  return {mu_unit / (R * R), [table, R, norm](double r) { return norm * (*table)(r / R); },
          [table, R](double r) { return (*table)(r / R); }};
}

/// Integral of f * phi over the domain.
inline double integrate_f_phi(const Domain& domain, const Profile& profile, const Eigenpair& eig) {
  return integrate([&](double r) { return profile(r) * eig.phi(r) * domain.radial_weight(r); }, 0.0, domain.radius(),
                   1e-12);
}

inline double integrate_f_phi(const Domain& domain, const Profile& profile) {
  return integrate_f_phi(domain, profile, first_eigenpair(domain));
}

}  // namespace mems
