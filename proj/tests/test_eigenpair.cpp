#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mems/eigenpair.hpp"

using namespace mems;
using std::numbers::pi;

namespace {

double integral_of_phi(const Domain& d, const Eigenpair& e) {
  return integrate([&](double r) { return e.phi(r) * d.radial_weight(r); }, 0.0, d.radius(), 1e-13);
}

// -phi'' - (N-1)/r phi' by central differences at interior radii.
double helmholtz_defect(const Domain& d, const Eigenpair& e) {
  const int n = d.dimension();
  const double h = 1e-4 * d.radius();
  double worst = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double r = d.radius() * i / 20.0;
    const double d2 = (e.phi(r + h) - 2 * e.phi(r) + e.phi(r - h)) / (h * h);
    const double d1 = (e.phi(r + h) - e.phi(r - h)) / (2 * h);
    const double lap = -d2 - (n - 1) / r * d1;
    worst = std::max(worst, std::abs(lap - e.mu * e.phi(r)) / (e.mu * e.phi(0.0)));
  }
  return worst;
}

}  // namespace

TEST(FirstEigenpair, Slab) {
  const Domain d = Domain::slab();
  const Eigenpair e = first_eigenpair(d);
  EXPECT_NEAR(e.mu, pi * pi, 1e-12);
  // (pi/2) sin(pi (x + 1/2)) = (pi/2) cos(pi x)
  for (double x : {0.0, 0.1, 0.3, 0.5}) EXPECT_NEAR(e.phi(x), pi / 2 * std::sin(pi * (x + 0.5)), 1e-14);
  EXPECT_NEAR(e.psi(0.0), 1.0, 1e-14);
}

TEST(FirstEigenpair, UnitDisk) {
  const Eigenpair e = first_eigenpair(Domain::ball(2));
  EXPECT_NEAR(e.mu, 5.783, 5e-4);
  EXPECT_NEAR(e.mu, std::pow(2.404825557695773, 2), 1e-11);
  EXPECT_NEAR(e.psi(0.0), 1.0, 1e-12);
  EXPECT_NEAR(e.phi(1.0), 0.0, 1e-12);
}

TEST(FirstEigenpair, ThreeBallMatchesSincForm) {
  const Eigenpair e = first_eigenpair(Domain::ball(3));
  EXPECT_NEAR(e.mu, pi * pi, 1e-6 * pi * pi);
  for (double r : {0.1, 0.4, 0.7, 0.95}) EXPECT_NEAR(e.psi(r), std::sin(pi * r) / (pi * r), 1e-7);
}

TEST(FirstEigenpair, RadiusScaling) {
  for (int n : {1, 2, 3, 5}) {
    const double mu1 = first_eigenpair(Domain::ball(n)).mu;
    EXPECT_NEAR(first_eigenpair(Domain::ball(n, 2.0)).mu, mu1 / 4.0, 1e-8 * mu1) << n;
  }
}

TEST(FirstEigenpair, HigherDimensionsIncrease) {
  double previous = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const double mu = first_eigenpair(Domain::ball(n)).mu;
    EXPECT_GT(mu, previous);
    previous = mu;
  }
}

TEST(FirstEigenpair, NormalizationAndEquation) {
  for (const Domain& d : {Domain::slab(), Domain::ball(1), Domain::ball(2), Domain::ball(2, 0.5), Domain::ball(3),
                          Domain::ball(4, 1.5), Domain::ball(7), Domain::ball(10)}) {
    const Eigenpair e = first_eigenpair(d);
    EXPECT_NEAR(integral_of_phi(d, e), 1.0, 1e-8) << d.describe();
    EXPECT_NEAR(e.psi(0.0), 1.0, 1e-10) << d.describe();
    EXPECT_LT(helmholtz_defect(d, e), 1e-4) << d.describe();
  }
}

TEST(IntegrateFPhi, Examples) {
  const Domain slab = Domain::slab();
  EXPECT_NEAR(integrate_f_phi(slab, Profile::constant()), 1.0, 1e-10);
  EXPECT_NEAR(integrate_f_phi(Domain::ball(2), Profile::constant()), 1.0, 1e-10);
  // 2 * int_0^{1/2} 2x (pi/2) cos(pi x) dx = 1 - 2/pi
  EXPECT_NEAR(integrate_f_phi(slab, profile_for(slab, Profile::Kind::power_law, 1.0)), 1.0 - 2.0 / pi, 1e-10);
}
