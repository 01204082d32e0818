#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "pfsi/common.hpp"
#include "pfsi/plate_model.hpp"
#include "pfsi/time_integrator.hpp"

using namespace pfsi;

namespace {

DiscreteProblem small_problem(double mean = 0.0, ForcingSpec forcing = {}) {
  return DiscreteProblem{GalerkinSpace::make(4, 1, 1, 1), ReferenceSlab::make(16, 8), PlateParams{{}, mean},
                         std::move(forcing)};
}

// b'' + w^2 b = 0 on one plate mode with unit mass and no fluid.
SystemEvaluator oscillator(double w2) {
  return [w2](double t) {
    AssembledSystem s;
    s.time = t;
    s.mass = Eigen::MatrixXd::Identity(1, 1);
    s.fluid_gram = Eigen::MatrixXd::Zero(1, 1);
    s.basis_motion = s.viscous = s.coupling = Eigen::MatrixXd::Zero(1, 1);
    s.plate_stiffness = Eigen::MatrixXd::Constant(1, 1, w2);
    s.load = Eigen::VectorXd::Zero(1);
    s.convective = [](const Eigen::VectorXd& v) { return Eigen::VectorXd::Zero(v.size()); };
    s.plate_force = [w2](const Eigen::VectorXd& b) { return Eigen::VectorXd(w2 * b); };
    return s;
  };
}

}  // namespace

TEST(Trajectory, ResampleAndResize) {
  CoefficientTrajectory a = CoefficientTrajectory::zero(1.0, 8, 2);
  for (int i = 0; i <= 8; ++i) {
    const double t = a.time(i);
    a.values(i, 0) = t * t * t;
    a.derivatives(i, 0) = 3 * t * t;
  }
  const CoefficientTrajectory r = a.resampled(16);
  for (int i = 0; i <= 16; ++i) {
    const double t = r.time(i);
    EXPECT_NEAR(r.values(i, 0), t * t * t, 1e-15);
    EXPECT_NEAR(r.derivatives(i, 0), 3 * t * t, 1e-14);
  }
  const CoefficientTrajectory z = a.resized(4);
  EXPECT_EQ(z.size(), 4);
  EXPECT_TRUE(z.values.col(3).isZero(0.0));
  EXPECT_EQ(c1_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(c1_norm(a), 4.0);
}

TEST(Step, ZeroStateStaysZero) {
  const DiscreteProblem p = small_problem();
  const auto path = GeometryTrajectory::constant(1.0, 16, PlateProfile(1));
  const IntegrationResult r = integrate(State{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4)}, path, p, 16);
  EXPECT_TRUE(r.trajectory.values.isZero(0.0));
  EXPECT_TRUE(r.trajectory.derivatives.isZero(0.0));
  for (double e : r.energy) EXPECT_EQ(e, 0.0);
}

TEST(Step, HarmonicOscillatorSecondOrder) {
  const double w2 = bending_stiffness(1);
  const double w = std::sqrt(w2);
  const double horizon = 0.2;
  std::vector<double> err;
  for (int steps : {400, 800, 1600}) {
    const double dt = horizon / steps;
    const SystemEvaluator sys = oscillator(w2);
    State s{Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)};
    for (int i = 0; i < steps; ++i) s = step(sys, s, i * dt, dt).state;
    err.push_back(std::abs(s.b(0) - std::cos(w * horizon)) + std::abs(s.beta(0) + w * std::sin(w * horizon)) / w);
  }
  EXPECT_LE(err[2], 1e-3);
  EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.9);
}

TEST(Integrate, MeanConservedAndUnforcedDecay) {
  const double m = 0.05;
  const DiscreteProblem p = small_problem(m);
  PlateProfile delta = PlateProfile(1);
  delta.set_mean(m);
  const auto path = GeometryTrajectory::constant(0.2, 64, delta);
  State init{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4)};
  init.b(0) = 0.01;
  init.beta(1) = 0.3;
  const IntegrationResult r = integrate(init, path, p, 128);
  for (double v : r.mean_eta) EXPECT_NEAR(v, m, 1e-12);
  for (std::size_t i = 0; i + 1 < r.energy.size(); ++i)
    EXPECT_LE(r.energy[i + 1] - r.energy[i], 1e-10 * r.energy[0]);
  EXPECT_LT(r.energy.back(), r.energy.front());
}

TEST(Integrate, EnergyBalanceSecondOrderOnStaticGeometry) {
  ForcingSpec f;
  f.plate.push_back({-1, 1, 0.5});
  f.fluid.push_back({0, 1, 1, 0, 0.5});
  f.period = 0.1;
  const DiscreteProblem p = small_problem(0.0, f);
  const auto path = GeometryTrajectory::constant(0.1, 64, PlateProfile::cosine(1, 0.1));
  const State init{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4)};
  std::vector<double> res;
  for (int steps : {64, 128, 256}) {
    const IntegrationResult r = integrate(init, path, p, steps);
    double mx = 0.0;
    for (double v : r.residual) mx = std::max(mx, std::abs(v));
    res.push_back(mx);
  }
  EXPECT_GE(std::log2(res[0] / res[1]), 1.9);
  EXPECT_GE(std::log2(res[1] / res[2]), 1.9);
}

TEST(Integrate, RejectsIncommensurateGeometryAndBlowUp) {
  const DiscreteProblem p = small_problem();
  const auto path = GeometryTrajectory::constant(1.0, 12, PlateProfile(1));
  const State init{Eigen::VectorXd::Zero(4), Eigen::VectorXd::Ones(4)};
  EXPECT_THROW(integrate(init, path, p, 16), std::invalid_argument);
  IntegrationOptions opt;
  opt.energy_ceiling = 1e-6;
  EXPECT_THROW(integrate(init, path, p, 12, opt), SolverError);
}
