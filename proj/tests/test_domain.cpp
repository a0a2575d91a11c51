#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mems/domain.hpp"

using namespace mems;
using std::numbers::pi;

TEST(UnitBallVolume, LowDimensions) {
  EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
  EXPECT_NEAR(unit_ball_volume(2), pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * pi / 3.0, 1e-14);
}

TEST(UnitBallVolume, RecurrenceInDimension) {
  // omega_N = 2 pi / N * omega_{N-2}
  for (int n = 3; n <= 12; ++n) EXPECT_NEAR(unit_ball_volume(n), 2.0 * pi / n * unit_ball_volume(n - 2), 1e-13);
}

TEST(UnitBallVolume, RejectsNonPositiveDimension) {
  try {
    unit_ball_volume(0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_dimension);
  }
}

TEST(DomainVolume, Examples) {
  EXPECT_DOUBLE_EQ(domain_volume(Domain::slab()), 1.0);
  EXPECT_NEAR(domain_volume(Domain::ball(2)), pi, 1e-14);
  EXPECT_NEAR(domain_volume(Domain::ball(3, 2.0)), 32.0 * pi / 3.0, 1e-12);
}

TEST(Domain, Shape) {
  const Domain s = Domain::slab();
  EXPECT_TRUE(s.is_slab());
  EXPECT_EQ(s.dimension(), 1);
  EXPECT_DOUBLE_EQ(s.radius(), 0.5);
  EXPECT_EQ(s.describe(), "slab");
  EXPECT_EQ(Domain::ball(2).describe(), "disk");
  EXPECT_EQ(Domain::ball(5).describe(), "ball:5");
  EXPECT_EQ(Domain::ball(3, 2.5).describe(), "ball:3:2.5");
  EXPECT_FALSE(Domain::ball(1, 0.5) == s);
}

TEST(Domain, RejectsInvalidConstruction) {
  EXPECT_THROW(Domain::ball(0), error);
  EXPECT_THROW(Domain::ball(2, 0.0), error);
  EXPECT_THROW(Domain::ball(2, -1.0), error);
}

TEST(Profile, Evaluation) {
  EXPECT_DOUBLE_EQ(profile_eval(Profile::power_law(2.0), 0.5), 0.25);
  EXPECT_DOUBLE_EQ(profile_eval(Profile::exponential(1.0, 0.5), 0.5), 1.0);
  EXPECT_DOUBLE_EQ(profile_eval(Profile::constant(), 0.37), 1.0);
  EXPECT_NEAR(profile_eval(Profile::exponential(3.0, 1.0), 0.0), std::exp(-3.0), 1e-15);
}

TEST(Profile, SlabPowerLawEncodesDoubledArgument) {
  const Profile f = profile_for(Domain::slab(), Profile::Kind::power_law, 3.0);
  EXPECT_DOUBLE_EQ(f.coefficient(), 8.0);
  for (double x : {0.0, 0.1, 0.25, 0.5}) EXPECT_NEAR(f(x), std::pow(2.0 * x, 3.0), 1e-15);
}

TEST(Profile, StandardProfilesHaveUnitSupremum) {
  for (const Domain& d : {Domain::slab(), Domain::ball(2), Domain::ball(3, 2.0)}) {
    for (auto kind : {Profile::Kind::power_law, Profile::Kind::exponential, Profile::Kind::constant}) {
      for (double alpha : {0.0, 0.5, 3.0, 20.0}) {
        const Profile f = profile_for(d, kind, alpha);
        EXPECT_NEAR(profile_sup(d, f), 1.0, 1e-14);
        EXPECT_NO_THROW(check_profile(d, f));
      }
    }
  }
}

TEST(Profile, MonotoneInRadius) {
  for (const Profile& f : {Profile::power_law(1.5), Profile::exponential(2.0, 1.0)}) {
    double previous = f(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double value = f(i / 1000.0);
      EXPECT_GE(value, previous);
      previous = value;
    }
  }
}

TEST(Profile, InfimumAtCenter) {
  EXPECT_DOUBLE_EQ(profile_inf(Domain::ball(2), Profile::power_law(1.0)), 0.0);
  EXPECT_NEAR(profile_inf(Domain::slab(), Profile::exponential(6.0, 0.5)), std::exp(-1.5), 1e-15);
}

TEST(Profile, RejectsInvalid) {
  EXPECT_THROW(Profile::power_law(-1.0), error);
  EXPECT_THROW(Profile::power_law(1.0, 0.0), error);
  EXPECT_THROW(Profile::exponential(-0.1, 1.0), error);
  try {
    check_profile(Domain::ball(2, 2.0), Profile::power_law(1.0));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_argument);
    EXPECT_TRUE(e.is_input_error());
  }
}

TEST(Profile, Describe) {
  EXPECT_EQ(Profile::constant().describe(), "const");
  EXPECT_EQ(Profile::power_law(3.0).describe(), "power:3");
  EXPECT_EQ(Profile::exponential(0.5, 1.0).describe(), "exp:0.5");
}
