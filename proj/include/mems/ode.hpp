#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "mems/error.hpp"

namespace mems {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double min_step = 1e-14;  // relative to |t|
  long max_steps = 10'000'000;
};

template <std::size_t D>
using OdeState = std::array<double, D>;

/// Integrator state that persists across successive `advance` calls, so a
/// trajectory can be sampled at many output points without restarting.
template <std::size_t D>
class DormandPrince {
 public:
  DormandPrince(double t0, const OdeState<D>& y0, OdeOptions options = {})
      : t_(t0), y_(y0), options_(options) {}

  double t() const noexcept { return t_; }
  const OdeState<D>& y() const noexcept { return y_; }
  long steps() const noexcept { return steps_; }

  /// Integrates dy/dt = rhs(t, y) up to exactly t_end (> t()).
  template <class Rhs>
  void advance(Rhs&& rhs, double t_end) {
    if (t_end <= t_) return;
    if (h_ <= 0.0) h_ = initial_step(rhs, t_end);
    while (t_ < t_end) {
      double h = std::min(h_, t_end - t_);
      const bool last = h >= t_end - t_;
      OdeState<D> y_new, err;
      step(rhs, h, y_new, err);
      double norm = 0.0;
      for (std::size_t i = 0; i < D; ++i) {
        const double scale = options_.atol + options_.rtol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
        norm = std::max(norm, std::abs(err[i]) / scale);
      }
      if (!std::isfinite(norm)) norm = 1e10;
      if (norm <= 1.0) {
        t_ = last ? t_end : t_ + h;
        y_ = y_new;
        ++steps_;
        const double grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        // Don't let a short final step shrink the step carried to the next call.
        if (!last || h == h_) h_ = h * grow;
      } else {
        h_ = h * std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 1.0);
        if (h_ < options_.min_step * std::max(1.0, std::abs(t_)))
          throw error(errc::numeric_failure, "ODE step size underflow", norm);
      }
      if (steps_ > options_.max_steps) throw error(errc::numeric_failure, "ODE step limit exceeded");
    }
  }

 private:
  template <class Rhs>
  double initial_step(Rhs& rhs, double t_end) const {
    const OdeState<D> f0 = rhs(t_, y_);
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double scale = options_.atol + options_.rtol * std::abs(y_[i]);
      d0 = std::max(d0, std::abs(y_[i]) / scale);
      d1 = std::max(d1, std::abs(f0[i]) / scale);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, t_end - t_);
  }

  template <class Rhs>
  void step(Rhs& rhs, double h, OdeState<D>& y_new, OdeState<D>& err) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // Difference between the 5th- and embedded 4th-order weights.
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    OdeState<D> tmp;
    auto stage = [&](auto&&... terms) {
      for (std::size_t i = 0; i < D; ++i) tmp[i] = y_[i] + h * (... + (terms.first * (*terms.second)[i]));
      return tmp;
    };
    using P = std::pair<double, const OdeState<D>*>;
    const OdeState<D> k1 = rhs(t_, y_);
    const OdeState<D> k2 = rhs(t_ + c2 * h, stage(P{a21, &k1}));
    const OdeState<D> k3 = rhs(t_ + c3 * h, stage(P{a31, &k1}, P{a32, &k2}));
    const OdeState<D> k4 = rhs(t_ + c4 * h, stage(P{a41, &k1}, P{a42, &k2}, P{a43, &k3}));
    const OdeState<D> k5 = rhs(t_ + c5 * h, stage(P{a51, &k1}, P{a52, &k2}, P{a53, &k3}, P{a54, &k4}));
    const OdeState<D> k6 = rhs(t_ + h, stage(P{a61, &k1}, P{a62, &k2}, P{a63, &k3}, P{a64, &k4}, P{a65, &k5}));
    for (std::size_t i = 0; i < D; ++i)
      y_new[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const OdeState<D> k7 = rhs(t_ + h, y_new);
    for (std::size_t i = 0; i < D; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }

  double t_;
  OdeState<D> y_;
  OdeOptions options_;
  double h_ = 0.0;
  long steps_ = 0;
};

}  // namespace mems
