#pragma once

// Bessel functions J0/J1, the first zero of J0, and adaptive Gauss-Legendre
// quadrature.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "mems/error.hpp"

namespace mems {

namespace detail {

// Below this |x| the power series is used; above it the Hankel expansion.
// At the switch the series loses ~1e-12 to cancellation and the smallest
// asymptotic term is ~e^{-2x} ~ 1e-12.
inline constexpr double bessel_series_limit = 14.0;

inline double bessel_series(int order, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  double term = order == 0 ? 1.0 : half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

inline double bessel_hankel(int order, double x) {
  // x > 0 here.
  const double mu = 4.0 * order * order;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(next) >= last) break;  // asymptotic series started diverging
    last = std::abs(next);
    term = next;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Bessel function of the first kind, order 0 or 1.
inline double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw error(errc::invalid_argument, "bessel_j supports orders 0 and 1");
  if (!std::isfinite(x)) throw error(errc::invalid_argument, "bessel_j needs a finite argument");
  const double ax = std::abs(x);
  const double value = ax < detail::bessel_series_limit ? detail::bessel_series(order, ax) : detail::bessel_hankel(order, ax);
  return (order == 1 && x < 0.0) ? -value : value;
}

/// First positive zero of J0, by Newton's method safeguarded to stay in (2, 3).
inline double j0_first_zero() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  double x = 2.4;
  for (int it = 0; it < 100; ++it) {
    const double f = bessel_j(0, x);
    if (f > 0.0) lo = x; else hi = x;
    double next = x + f / bessel_j(1, x);  // J0' = -J1
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15) return next;
    x = next;
  }
  return x;
}

/// n-point Gauss-Legendre rule on [-1, 1].
template <std::size_t n>
struct GaussLegendre {
  std::array<double, n> nodes{};
  std::array<double, n> weights{};

  GaussLegendre() {
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <class F>
  double apply(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

namespace detail {

inline const GaussLegendre<10>& gl10() {
  static const GaussLegendre<10> rule;
  return rule;
}

template <class F>
double adaptive_gl(F& f, double a, double b, double whole, double rtol, double atol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl10().apply(f, a, mid);
  const double right = gl10().apply(f, mid, b);
  const double halves = left + right;
  if (depth <= 0 || std::abs(halves - whole) <= std::max(rtol * std::abs(halves), atol)) return halves;
  return adaptive_gl(f, a, mid, left, rtol, 0.5 * atol, depth - 1) +
         adaptive_gl(f, mid, b, right, rtol, 0.5 * atol, depth - 1);
}

}  // namespace detail

/// Adaptive composite 10-point Gauss-Legendre quadrature of f over [a, b].
template <class F>
double integrate(F&& f, double a, double b, double rtol = 1e-12, double atol = 1e-15) {
  if (a == b) return 0.0;
  const double whole = detail::gl10().apply(f, a, b);
  return detail::adaptive_gl(f, a, b, whole, rtol, atol, 40);
}

}  // namespace mems
