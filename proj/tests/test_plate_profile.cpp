#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pfsi/common.hpp"
#include "pfsi/plate_profile.hpp"

using namespace pfsi;

TEST(PlateProfile, EvaluatesTrigonometricSum) {
  PlateProfile p(2, 0.5);
  p.set_cos_coeff(1, 0.3);
  p.set_sin_coeff(2, -0.2);
  for (double x : {0.0, 0.13, 0.5, 0.77}) {
    const double exact = 0.5 + 0.3 * std::cos(kTwoPi * x) - 0.2 * std::sin(2 * kTwoPi * x);
    EXPECT_NEAR(p.evaluate(x), exact, 1e-15);
    const double slope = -0.3 * kTwoPi * std::sin(kTwoPi * x) - 0.4 * kTwoPi * std::cos(2 * kTwoPi * x);
    EXPECT_NEAR(p.evaluate(x, 1), slope, 1e-13);
  }
}

TEST(PlateProfile, SamplesRoundTrip) {
  PlateProfile p(3, -0.1);
  p.set_cos_coeff(1, 0.2);
  p.set_sin_coeff(1, 0.05);
  p.set_sin_coeff(3, 0.01);
  std::vector<double> s(16);
  for (int j = 0; j < 16; ++j) s[j] = p.evaluate(j / 16.0);
  const PlateProfile q = PlateProfile::from_samples(s);
  EXPECT_NEAR(q.mean(), -0.1, 1e-15);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_NEAR(q.cos_coeff(k), p.cos_coeff(k), 1e-15);
    EXPECT_NEAR(q.sin_coeff(k), p.sin_coeff(k), 1e-15);
  }
}

TEST(PlateProfile, AntiderivativeInvertsDerivative) {
  PlateProfile p = PlateProfile::cosine(2, 0.4) + PlateProfile::sine(1, 0.1);
  const PlateProfile back = p.antiderivative().derivative();
  for (double x : {0.1, 0.4, 0.9}) EXPECT_NEAR(back.evaluate(x), p.evaluate(x), 1e-14);
  p.set_mean(1.0);
  EXPECT_THROW(p.antiderivative(), std::invalid_argument);
}

TEST(PlateProfile, ArithmeticAndResize) {
  const PlateProfile a = PlateProfile::cosine(1, 1.0);
  const PlateProfile b = PlateProfile::sine(3, 2.0);
  const PlateProfile c = a + 0.5 * b;
  EXPECT_EQ(c.kmax(), 3);
  EXPECT_DOUBLE_EQ(c.sin_coeff(3), 1.0);
  EXPECT_EQ(c.resized(1).kmax(), 1);
  EXPECT_DOUBLE_EQ(c.resized(1).cos_coeff(1), 1.0);
  EXPECT_EQ(axpy(a, 2.0, b), a + 2.0 * b);
}
