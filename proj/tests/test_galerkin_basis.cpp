#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pfsi/common.hpp"
#include "pfsi/galerkin_basis.hpp"

using namespace pfsi;

TEST(PlateBasis, CombineAndProjectAreInverse) {
  const PlateBasis basis(3);
  const std::vector<double> c{0.1, -0.2, 0.3, 0.0, 0.5, 0.05};
  const PlateProfile p = basis.combine(c, 0.2);
  EXPECT_NEAR(p.cos_coeff(1), 0.1 * std::sqrt(2.0), 1e-16);
  EXPECT_DOUBLE_EQ(p.mean(), 0.2);
  const auto back = basis.project(p.fluctuation());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(back[i], c[i], 1e-15);
}

TEST(Cutoff, ValuesAndSmoothness) {
  const CutoffProfile s(0.5);
  EXPECT_DOUBLE_EQ(s.lower(), 0.25);
  EXPECT_DOUBLE_EQ(s.upper(), 0.5);
  EXPECT_EQ(s.evaluate(0.1)[0], 0.0);
  EXPECT_EQ(s.evaluate(0.9)[0], 1.0);
  EXPECT_NEAR(s.evaluate(0.375)[0], 0.5, 1e-15);
  for (double y : {0.25, 0.5}) {
    EXPECT_NEAR(s.evaluate(y)[1], 0.0, 1e-12);
    EXPECT_NEAR(s.evaluate(y)[2], 0.0, 1e-9);
  }
}

TEST(Extension, ClosedFormForCosine) {
  const double kappa = 0.5;
  const ExtensionField f(PlateProfile::cosine(1, 1.0), kappa);
  const CutoffProfile s(kappa);
  for (double x : {0.1, 0.35, 0.8})
    for (double y : {0.1, 0.3, 0.4, 0.7, 1.2}) {
      const auto sig = s.evaluate(y);
      const VectorSample v = f.at(x, y);
      EXPECT_NEAR(v.u1, -std::sin(kTwoPi * x) * sig[1] / kTwoPi, 1e-14);
      EXPECT_NEAR(v.u2, std::cos(kTwoPi * x) * sig[0], 1e-14);
      EXPECT_NEAR(v.divergence(), 0.0, 1e-13);
    }
  const ExtensionField zero(PlateProfile(2), kappa);
  const VectorSample z = zero.at(0.3, 0.4);
  EXPECT_EQ(z.u1, 0.0);
  EXPECT_EQ(z.u2, 0.0);
  PlateProfile biased = PlateProfile::cosine(1, 1.0);
  biased.set_mean(0.1);
  EXPECT_THROW(ExtensionField(biased, kappa), std::invalid_argument);
}

TEST(Piola, ConstantDeltaFormula) {
  const FluidInteriorBasis pool(2, 2);
  const double c = 0.2;
  for (int l = 0; l < pool.size(); ++l) {
    const ReferenceField g = [&](double x, double z) { return pool.raw_sample(l, x, z); };
    const PiolaField v = piola_transform(PlateProfile::constant(c), g);
    const VectorSample a = v.at(0.3, 0.4 * (1 + c)), r = g(0.3, 0.4);
    EXPECT_NEAR(a.u1, r.u1 / (1 + c), 1e-14);
    EXPECT_NEAR(a.u2, r.u2, 1e-14);
  }
  EXPECT_THROW(piola_transform(PlateProfile::constant(0.7), [&](double x, double z) { return pool.raw_sample(0, x, z); }),
               std::invalid_argument);
}

TEST(Piola, TimeDerivativeMatchesFiniteDifference) {
  const FluidInteriorBasis pool(2, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  PlateProfile delta(2), rate(2);
  for (int k = 1; k <= 2; ++k) {
    delta.set_cos_coeff(k, u(rng));
    delta.set_sin_coeff(k, u(rng));
    rate.set_cos_coeff(k, u(rng));
    rate.set_sin_coeff(k, u(rng));
  }
  const double h = 1e-5;
  for (int l = 0; l < pool.size(); ++l) {
    const ReferenceField g = [&](double x, double z) { return pool.raw_sample(l, x, z); };
    const auto d = piola_time_derivative(delta, rate, g);
    const PiolaField plus = piola_transform(delta + h * rate, g), minus = piola_transform(delta - h * rate, g);
    for (double x : {0.2, 0.6})
      for (double y : {0.3, 0.7}) {
        const auto exact = d(x, y);
        const VectorSample p = plus.at(x, y), m = minus.at(x, y);
        const double f1 = (p.u1 - m.u1) / (2 * h), f2 = (p.u2 - m.u2) / (2 * h);
        EXPECT_NEAR(exact[0], f1, 1e-6 * std::max(1.0, std::abs(f1)));
        EXPECT_NEAR(exact[1], f2, 1e-6 * std::max(1.0, std::abs(f2)));
      }
    const auto still = piola_time_derivative(delta, PlateProfile(2), g)(0.4, 0.5);
    EXPECT_EQ(still[0], 0.0);
    EXPECT_EQ(still[1], 0.0);
  }
}

TEST(FluidInterior, OrthonormalOnReferenceSlab) {
  const FluidInteriorBasis pool(2, 2);
  const ReferenceSlab grid = ReferenceSlab::make(24, 48);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(pool.size(), pool.size());
  for (int ix = 0; ix < grid.nx(); ++ix)
    for (int iz = 0; iz < grid.nz(); ++iz) {
      const double w = grid.x_weights[ix] * grid.z_weights[iz];
      for (int i = 0; i < pool.size(); ++i) {
        const VectorSample a = pool.sample(i, grid.x_nodes[ix], grid.z_nodes[iz]);
        for (int j = 0; j < pool.size(); ++j) {
          const VectorSample b = pool.sample(j, grid.x_nodes[ix], grid.z_nodes[iz]);
          g(i, j) += w * (a.u1 * b.u1 + a.u2 * b.u2);
        }
      }
    }
  EXPECT_LE((g - Eigen::MatrixXd::Identity(pool.size(), pool.size())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(InterleavedBasis, TraceConditions) {
  const GalerkinSpace space = GalerkinSpace::make(8, 2, 2, 2);
  PlateProfile delta = PlateProfile::cosine(1, 0.2) + PlateProfile::sine(2, 0.1);
  delta.set_mean(0.05);
  const InterleavedBasis basis = build_interleaved_basis(space, delta);
  for (int i = 0; i < basis.size(); ++i)
    for (double x : {0.0, 0.3, 0.55, 0.9}) {
      const double top = 1.0 + delta.evaluate(x);
      const VectorSample t = basis.fluid_part(i, x, top), b = basis.fluid_part(i, x, 0.0);
      const double trace = basis.is_plate(i) ? basis.plate_part(i).evaluate(x) : 0.0;
      EXPECT_NEAR(t.u1, 0.0, 1e-14);
      EXPECT_NEAR(t.u2, trace, 1e-14);
      EXPECT_NEAR(b.u1, 0.0, 1e-14);
      EXPECT_NEAR(b.u2, 0.0, 1e-14);
    }
  EXPECT_THROW(GalerkinSpace::make(7, 2, 2, 2), std::invalid_argument);
  EXPECT_THROW(GalerkinSpace::make(40, 2, 2, 2), std::invalid_argument);
}
