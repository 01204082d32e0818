#include <cmath>
#include <ostream>
#include <random>

#include "pfsi/diagnostics.hpp"
#include "pfsi/driver.hpp"
#include "pfsi/io.hpp"
#include "pfsi/plate_model.hpp"
#include "pfsi/system_assembly.hpp"

namespace pfsi {

namespace {

PlateProfile random_profile(std::mt19937_64& rng, int kmax, double sup) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PlateProfile p(kmax);
  double total = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    p.set_cos_coeff(k, u(rng));
    p.set_sin_coeff(k, u(rng));
    total += std::abs(p.cos_coeff(k)) + std::abs(p.sin_coeff(k));
  }
  return (sup / total) * p;
}

}  // namespace

bool run_selftest(std::uint64_t seed, std::ostream& log) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  bool all = true;
  auto report = [&](const std::string& name, bool ok, double value) {
    log << (ok ? "PASS " : "FAIL ") << name << "  (" << format_double(value) << ")\n";
    all = all && ok;
  };

  const ReferenceSlab grid = ReferenceSlab::make(32, 10);

  {  // Koiter directional derivative against central differences
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const PlateProfile eta = random_profile(rng, 4, 0.3), xi = random_profile(rng, 4, 0.3);
      const double h = 1e-5;
      const double fd = (koiter_energy(eta + h * xi, grid) - koiter_energy(eta - h * xi, grid)) / (2 * h);
      const double d = koiter_directional(eta, xi, grid);
      worst = std::max(worst, std::abs(fd - d) / std::max(1.0, std::abs(d)));
    }
    report("koiter gradient", worst <= 1e-6, worst);
  }
  {
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) worst = std::min(worst, coercivity_gap(random_profile(rng, 4, 0.3), grid));
    report("coercivity gap", worst >= -1e-12, worst);
  }
  {  // divergence of the extension
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      const ExtensionField f(random_profile(rng, 3, 0.5), kDefaultKappa);
      for (int i = 0; i < 50; ++i) {
        const double x = 0.5 * (unit(rng) + 1.0), y = 0.75 * (unit(rng) + 1.0);
        worst = std::max(worst, std::abs(f.at(x, y).divergence()));
      }
    }
    report("extension divergence", worst <= 1e-12, worst);
  }

  const GalerkinSpace space = GalerkinSpace::make(8, 2, 2, 2);
  {  // mass matrix
    bool ok = true;
    double min_eig = 1e300, asym = 0.0;
    for (int s = 0; s < 5; ++s) {
      const PlateProfile delta = random_profile(rng, 2, 0.4);
      const InterleavedBasis basis = build_interleaved_basis(space, delta);
      const AssembledSystem sys = assemble(basis, delta, PlateProfile(2), ForcingSpec{}, 0.0, grid);
      asym = std::max(asym, (sys.mass - sys.mass.transpose()).cwiseAbs().maxCoeff());
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sys.mass + sys.mass.transpose()));
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    ok = asym <= 1e-13 && min_eig > 0.0;
    report("mass matrix symmetric positive", ok, min_eig);
  }
  {  // skew form on a static geometry
    const PlateProfile delta = random_profile(rng, 2, 0.3);
    const InterleavedBasis basis = build_interleaved_basis(space, delta);
    Eigen::VectorXd beta(space.n);
    for (int i = 0; i < space.n; ++i) beta(i) = i % 2 == 1 ? unit(rng) : 0.0;
    const double d = skew_symmetry_defect(basis, PlateProfile(2), beta, grid);
    report("skew form", std::abs(d) <= 1e-10, d);
  }
  {  // periodization
    std::vector<double> f(65);
    for (int i = 0; i <= 64; ++i) f[i] = std::sin(0.3 + i / 16.0) + 0.1 * unit(rng);
    const PeriodizationParams eps{8};
    const auto p = periodize(f, eps);
    const auto pp = periodize(p, eps);
    double sup_in = 0.0, sup_out = 0.0;
    for (int i = 0; i <= 64 - 8; ++i) sup_in = std::max(sup_in, std::abs(f[i]));
    for (double v : p) sup_out = std::max(sup_out, std::abs(v));
    report("periodization", p.front() == p.back() && pp == p && sup_out <= sup_in, sup_out - sup_in);
  }
  {  // trivial data
    DiscreteProblem prob{space, grid, {}, ForcingSpec{}};
    FixedPointConfig cfg;
    const auto r = find_fixed_point(CoefficientTrajectory::zero(1.0, 16, space.n), prob, cfg);
    report("zero data fixed point", r.converged && r.iterations == 0 && r.distance == 0.0, r.distance);
  }
  {  // mean conservation on a short forced run
    ForcingSpec g;
    g.plate.push_back({-1, 1, 1e-2});
    DiscreteProblem prob{space, grid, {KoiterWeights{}, 0.05}, g};
    FixedPointConfig cfg;
    const DecoupledSolve s = solve_decoupled(CoefficientTrajectory::zero(1.0, 32, space.n), prob, cfg);
    const double d = check_mean_conservation(s.result.mean_eta, 0.05);
    report("mean conservation", d <= 1e-12, d);
  }
  log << (all ? "selftest passed" : "selftest FAILED") << "\n";
  return all;
}

}  // namespace pfsi
