#pragma once

// Analytic lower and upper bounds on the pull-in voltage lambda*.

#include <algorithm>
#include <cmath>
#include <optional>

#include "mems/domain.hpp"
#include "mems/eigenpair.hpp"

namespace mems {

struct BoundsReport {
  double lower_ball;
  double lower_nu;
  std::optional<double> lower_powerlaw;
  double lower_best;
  std::optional<double> upper_1;
  double upper_2;
  std::optional<double> upper_3;
  double upper_best;
  /// upper_3 on the slab comes from treating it as the N = 1 ball of radius 1/2.
  bool upper_3_from_slab = false;
};

/// H(t) = t (t + 1 + 2 sqrt t) / (t + 1 + sqrt t)^3, increasing on [0, 1] up to H(1) = 4/27.
inline double pullin_h(double t) {
  const double s = std::sqrt(t);
  const double d = t + 1.0 + s;
  return t * (t + 1.0 + 2.0 * s) / (d * d * d);
}

namespace detail {
inline double positive_sup(const Domain& domain, const Profile& profile) {
  const double sup = profile_sup(domain, profile);
  if (!(sup > 0.0)) throw error(errc::degenerate_profile, "sup f = 0");
  return sup;
}
}  // namespace detail

/// 8N / (27 sup f) * (omega_N / |Omega|)^{2/N}
inline double lower_bound_ball(const Domain& domain, const Profile& profile) {
  const int n = domain.dimension();
  const double sup = detail::positive_sup(domain, profile);
  return 8.0 * n / (27.0 * sup) * std::pow(unit_ball_volume(n) / domain_volume(domain), 2.0 / n);
}

/// lambda_c(alpha) for f = c |x|^alpha, divided by the coefficient c.
inline double lower_bound_powerlaw(const Domain& domain, const Profile& profile) {
  if (profile.kind() != Profile::Kind::power_law)
    throw error(errc::wrong_profile, "lambda_c needs a power-law profile, got " + profile.describe());
  const int n = domain.dimension();
  const double a = profile.alpha();
  const double lambda_c =
      4.0 * (2.0 + a) * (n + a) / 27.0 * std::pow(unit_ball_volume(n) / domain_volume(domain), (2.0 + a) / n);
  return lambda_c / profile.coefficient();
}

/// Lower bound nu_Omega / sup f, with the supremum over enclosing domains
/// restricted to dilates L * Omega, L in (1, 100].
inline double nu_lower_bound(const Domain& domain, const Profile& profile, const Eigenpair& eig) {
  const double sup = detail::positive_sup(domain, profile);
  // psi of the dilate is psi(r / L); its infimum over Omega sits on the boundary r = R.
  const auto objective = [&](double scale) {
    return eig.mu / (scale * scale) * pullin_h(std::max(0.0, eig.psi(domain.radius() / scale)));
  };
  // Coarse log grid, then golden-section around the best sample.
  constexpr int samples = 400;
  const double log_hi = std::log(100.0);
  int best = 1;
  double best_value = -1.0;
  for (int i = 1; i <= samples; ++i) {
    const double value = objective(std::exp(log_hi * i / samples));
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = std::exp(log_hi * (best - 1) / samples);
  double b = std::exp(log_hi * std::min(best + 1, samples) / samples);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-7) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  return std::max({best_value, fc, fd}) / sup;
}

inline double nu_lower_bound(const Domain& domain, const Profile& profile) {
  return nu_lower_bound(domain, profile, first_eigenpair(domain));
}

/// 4 mu / (27 inf f); absent when inf f = 0.
inline std::optional<double> upper_bound_1(const Domain& domain, const Profile& profile, const Eigenpair& eig) {
  const double inf = profile_inf(domain, profile);
  if (!(inf > 0.0)) return std::nullopt;
  return 4.0 * eig.mu / (27.0 * inf);
}

inline std::optional<double> upper_bound_1(const Domain& domain, const Profile& profile) {
  return upper_bound_1(domain, profile, first_eigenpair(domain));
}

/// mu / (3 * integral of f phi).
inline double upper_bound_2(const Domain& domain, const Profile& profile, const Eigenpair& eig) {
  const double fphi = integrate_f_phi(domain, profile, eig);
  if (!(fphi > 0.0)) throw error(errc::degenerate_profile, "integral of f phi vanishes");
  return eig.mu / (3.0 * fphi);
}

inline double upper_bound_2(const Domain& domain, const Profile& profile) {
  return upper_bound_2(domain, profile, first_eigenpair(domain));
}

/// Pohozaev bound (N+2)^2 / (8 a N |Omega|) for f = 1 on a ball of radius R,
/// where a = R^{2-N} / (N omega_N); this reduces to (N+2)^2 / (8 R^2).
/// The slab uses the N = 1 ball of radius 1/2.
inline double upper_bound_3(const Domain& domain) {
  const int n = domain.dimension();
  const double R = domain.radius();
  const double a = std::pow(R, 2.0 - n) / (n * unit_ball_volume(n));
  return (n + 2.0) * (n + 2.0) / (8.0 * a * n * domain_volume(domain));
}

inline double upper_bound_3(const Domain& domain, const Profile& profile) {
  if (profile.kind() != Profile::Kind::constant)
    throw error(errc::wrong_profile, "the Pohozaev bound needs f = 1, got " + profile.describe());
  return upper_bound_3(domain);
}

inline BoundsReport bounds_report(const Domain& domain, const Profile& profile) {
  check_profile(domain, profile);
  const Eigenpair eig = first_eigenpair(domain);
  BoundsReport report{};
  report.lower_ball = lower_bound_ball(domain, profile);
  report.lower_nu = nu_lower_bound(domain, profile, eig);
  report.lower_best = std::max(report.lower_ball, report.lower_nu);
  if (profile.kind() == Profile::Kind::power_law) {
    report.lower_powerlaw = lower_bound_powerlaw(domain, profile);
    report.lower_best = std::max(report.lower_best, *report.lower_powerlaw);
  }
  report.upper_1 = upper_bound_1(domain, profile, eig);
  report.upper_2 = upper_bound_2(domain, profile, eig);
  report.upper_best = report.upper_2;
  if (report.upper_1) report.upper_best = std::min(report.upper_best, *report.upper_1);
  if (profile.kind() == Profile::Kind::constant) {
    report.upper_3 = upper_bound_3(domain);
    report.upper_3_from_slab = domain.is_slab();
    report.upper_best = std::min(report.upper_best, *report.upper_3);
  }
  return report;
}

}  // namespace mems
