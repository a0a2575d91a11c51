#pragma once

// Large-gamma asymptotics of the power-law shooting problem and the
// four-regime classification of solution multiplicity in (N, alpha).
//
// With w(P) = P^{(2+alpha)/3} V(log P), V solves
//     V'' + (3N + 2 alpha - 2)/3 V' + (2 + alpha)(3N + alpha - 4)/9 V = 1 / V^2,
// whose equilibrium V_e and linearization exponents sigma_+- govern whether
// lambda(gamma) approaches its limit monotonically or oscillates around it.

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "mems/error.hpp"

namespace mems {

namespace detail {
inline double asymptote_product(int n, double alpha) { return (2.0 + alpha) * (3.0 * n + alpha - 4.0); }
}  // namespace detail

/// V_e = (9 / ((2 + alpha)(3N + alpha - 4)))^{1/3}, when that is positive.
inline std::optional<double> equilibrium(int n, double alpha) {
  const double denom = detail::asymptote_product(n, alpha);
  if (!(denom > 0.0)) return std::nullopt;
  return std::cbrt(9.0 / denom);
}

/// Delta = -8 alpha^2 - (24N - 16) alpha + (9N^2 - 84N + 100).
inline double discriminant(int n, double alpha) {
  return -8.0 * alpha * alpha - (24.0 * n - 16.0) * alpha + (9.0 * n * n - 84.0 * n + 100.0);
}

struct SigmaPair {
  std::complex<double> plus;
  std::complex<double> minus;
  bool is_real;
};

/// Roots of sigma^2 + (3N + 2 alpha - 2)/3 sigma + (2 + alpha)(3N + alpha - 4)/3 = 0.
inline SigmaPair sigma_pm(int n, double alpha) {
  const double delta = discriminant(n, alpha);
  const double re = -(3.0 * n + 2.0 * alpha - 2.0) / 6.0;
  if (delta >= 0.0) {
    const double s = std::sqrt(delta) / 6.0;
    return {{re + s, 0.0}, {re - s, 0.0}, true};
  }
  const double s = std::sqrt(-delta) / 6.0;
  return {{re, s}, {re, -s}, false};
}

/// Characteristic polynomial of the linearized V equation, for residual checks.
inline std::complex<double> characteristic_polynomial(int n, double alpha, std::complex<double> sigma) {
  return sigma * sigma + (3.0 * n + 2.0 * alpha - 2.0) / 3.0 * sigma + detail::asymptote_product(n, alpha) / 3.0;
}

/// Positive root of discriminant(1, alpha).
inline double alpha_star() { return -0.5 + 0.5 * std::sqrt(27.0 / 2.0); }

/// Positive root of discriminant(N, alpha) for N >= 8.
inline std::optional<double> alpha_double_star(int n) {
  if (n < 8) return std::nullopt;
  return (4.0 - 6.0 * n + 3.0 * std::sqrt(6.0) * (n - 2.0)) / 4.0;
}

struct Asymptote {
  std::optional<double> value;
  /// Why `value` is absent: "boundary" when (2+alpha)(3N+alpha-4) = 0, "negative" below it.
  std::string reason;
};

/// lambda_* = (2 + alpha)(3N + alpha - 4) / 9, the large-gamma limit of the branch.
inline Asymptote lambda_asymptote(int n, double alpha) {
  const double product = detail::asymptote_product(n, alpha);
  if (product > 0.0) return {product / 9.0, ""};
  if (product == 0.0) return {std::nullopt, "boundary"};
  return {std::nullopt, "negative"};
}

struct RegimeReport {
  int n;
  double alpha;
  double discriminant;
  SigmaPair sigma;
  std::optional<double> v_e;
  double alpha_star;
  std::optional<double> alpha_double_star;
  Asymptote lambda_asymptote;
  int regime;
  std::string description;
  /// Set when the parameters sit where two regime definitions overlap or
  /// where the mapping to a regime is a convention.
  bool ambiguous = false;
};

inline RegimeReport classify_regime(int n, double alpha) {
  if (n < 1) throw error(errc::invalid_dimension, "dimension must be >= 1");
  if (!(alpha >= 0.0)) throw error(errc::invalid_argument, "alpha must be >= 0");
  RegimeReport report{n,
                      alpha,
                      discriminant(n, alpha),
                      sigma_pm(n, alpha),
                      equilibrium(n, alpha),
                      alpha_star(),
                      alpha_double_star(n),
                      lambda_asymptote(n, alpha),
                      0,
                      "",
                      false};
  if (n == 1) {
    if (alpha < 1.0) {
      report.regime = 1;
      report.description = "exactly two solutions for 0 < lambda < lambda*, one at lambda*";
    } else if (alpha == 1.0) {
      report.regime = 1;
      report.ambiguous = true;
      report.description =
          "exactly two solutions for 0 < lambda < lambda*, one at lambda*; alpha = 1 also satisfies the regime-2 "
          "condition";
    } else if (alpha <= report.alpha_star) {
      report.regime = 2;
      report.description =
          "one solution below lambda_1*, two between lambda_1* and lambda*, one at lambda*; branch approaches "
          "lambda_* monotonically";
    } else {
      report.regime = 3;
      report.ambiguous = true;
      report.description =
          "oscillatory branch around lambda_*, multiplicity unbounded near lambda_*; N = 1 with alpha > alpha* "
          "assigned to this regime from the sign of the discriminant";
    }
  } else if (n <= 7 || alpha > *report.alpha_double_star) {
    report.regime = 3;
    report.description =
        "one solution for small lambda, two just below lambda*, multiplicity unbounded as lambda approaches "
        "lambda_* where a touchdown solution exists";
  } else {
    report.regime = 4;
    report.description = "exactly one solution for 0 < lambda < lambda* = lambda_*, none for lambda >= lambda*";
  }
  return report;
}

}  // namespace mems
