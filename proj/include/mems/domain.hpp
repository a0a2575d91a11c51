#pragma once

// Domains (slab and N-balls) and the permittivity profiles f(x) defined on them.
// Every in-scope domain is radially symmetric, so all functions here work in
// the radial coordinate r = |x|.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "mems/error.hpp"

namespace mems {

/// Volume of the unit ball in R^N, pi^{N/2} / Gamma(N/2 + 1).
inline double unit_ball_volume(int dimension) {
  if (dimension < 1) throw error(errc::invalid_dimension, "dimension must be >= 1, got " + std::to_string(dimension));
  const double n = dimension;
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

class Domain {
 public:
  enum class Kind { slab, ball };

  /// The interval [-1/2, 1/2].
  static Domain slab() { return Domain(Kind::slab, 1, 0.5); }

  static Domain ball(int dimension, double radius = 1.0) {
    if (dimension < 1) throw error(errc::invalid_dimension, "ball dimension must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw error(errc::invalid_argument, "ball radius must be positive");
    return Domain(Kind::ball, dimension, radius);
  }

  Kind kind() const noexcept { return kind_; }
  bool is_slab() const noexcept { return kind_ == Kind::slab; }
  int dimension() const noexcept { return dimension_; }
  /// Largest |x| in the domain: 1/2 for the slab, R for a ball.
  double radius() const noexcept { return radius_; }

  /// Surface measure factor turning a radial integral into a volume integral:
  /// the integral over the domain of g(|x|) is the integral over [0, R] of
  /// g(r) * radial_weight(r).
  double radial_weight(double r) const {
    return dimension_ * unit_ball_volume(dimension_) * std::pow(r, dimension_ - 1);
  }

  std::string describe() const {
    if (is_slab()) return "slab";
    if (dimension_ == 2 && radius_ == 1.0) return "disk";
    std::string s = "ball:" + std::to_string(dimension_);
    if (radius_ != 1.0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, ":%g", radius_);
      s += buf;
    }
    return s;
  }

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(Kind kind, int dimension, double radius) : kind_(kind), dimension_(dimension), radius_(radius) {}

  Kind kind_;
  int dimension_;
  double radius_;
};

inline double domain_volume(const Domain& domain) {
  if (domain.is_slab()) return 1.0;
  return unit_ball_volume(domain.dimension()) * std::pow(domain.radius(), domain.dimension());
}

/// Radially symmetric permittivity profile.
///   power_law:   coefficient * r^alpha
///   exponential: exp(alpha * (r^2 - shift_radius^2))
///   constant:    1
class Profile {
 public:
  enum class Kind { power_law, exponential, constant };

  static Profile constant() { return Profile(Kind::constant, 0.0, 1.0, 0.0); }

  static Profile power_law(double alpha, double coefficient = 1.0) {
    if (!(alpha >= 0.0)) throw error(errc::invalid_argument, "profile exponent must be >= 0");
    if (!(coefficient > 0.0)) throw error(errc::invalid_argument, "power-law coefficient must be positive");
    return Profile(Kind::power_law, alpha, coefficient, 0.0);
  }

  static Profile exponential(double alpha, double shift_radius) {
    if (!(alpha >= 0.0)) throw error(errc::invalid_argument, "profile exponent must be >= 0");
    return Profile(Kind::exponential, alpha, 1.0, shift_radius);
  }

  Kind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double coefficient() const noexcept { return coefficient_; }
  double shift_radius() const noexcept { return shift_radius_; }

  double operator()(double r) const {
    switch (kind_) {
      case Kind::power_law:
        return alpha_ == 0.0 ? coefficient_ : coefficient_ * std::pow(r, alpha_);
      case Kind::exponential:
        return std::exp(alpha_ * (r * r - shift_radius_ * shift_radius_));
      case Kind::constant:
        return 1.0;
    }
    return 0.0;
  }

  std::string describe() const {
    char buf[64];
    switch (kind_) {
      case Kind::power_law:
        std::snprintf(buf, sizeof buf, "power:%g", alpha_);
        return buf;
      case Kind::exponential:
        std::snprintf(buf, sizeof buf, "exp:%g", alpha_);
        return buf;
      case Kind::constant:
        return "const";
    }
    return "?";
  }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  Profile(Kind kind, double alpha, double coefficient, double shift_radius)
      : kind_(kind), alpha_(alpha), coefficient_(coefficient), shift_radius_(shift_radius) {}

  Kind kind_;
  double alpha_;
  double coefficient_;
  double shift_radius_;
};

inline double profile_eval(const Profile& profile, double r) { return profile(r); }

/// The standard profile of a given kind on `domain`, scaled so that sup f = 1
/// for power laws (the slab's |2x|^alpha has coefficient 2^alpha) and with the
/// exponential shifted to equal 1 on the boundary.
inline Profile profile_for(const Domain& domain, Profile::Kind kind, double alpha) {
  switch (kind) {
    case Profile::Kind::power_law:
      return Profile::power_law(alpha, std::pow(domain.radius(), -alpha));
    case Profile::Kind::exponential:
      return Profile::exponential(alpha, domain.radius());
    case Profile::Kind::constant:
      return Profile::constant();
  }
  return Profile::constant();
}

inline double profile_sup(const Domain& domain, const Profile& profile) {
  // All three kinds are nondecreasing in r for alpha >= 0.
  return profile(domain.radius());
}

inline double profile_inf(const Domain& domain, const Profile& profile) {
  (void)domain;
  return profile(0.0);
}

/// Throws unless 0 <= f <= 1 holds on the domain.
inline void check_profile(const Domain& domain, const Profile& profile) {
  const double sup = profile_sup(domain, profile);
  if (!(sup <= 1.0 + 1e-12))
    throw error(errc::invalid_argument, "profile " + profile.describe() + " exceeds 1 on " + domain.describe());
}

}  // namespace mems
