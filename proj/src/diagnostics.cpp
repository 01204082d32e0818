#include "pfsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pfsi/plate_model.hpp"

namespace pfsi {

double forcing_norm(const ForcingSpec& forcing, const GeometryTrajectory& geometry, const ReferenceSlab& grid) {
  if (forcing.is_zero()) return 0.0;
  const int steps = geometry.steps();
  const double dt = geometry.period() / steps;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = geometry.time(i);
    double slice = 0.0;
    if (!forcing.fluid.empty()) {
      const auto q = DomainQuadrature::build(geometry.values()[i], grid, {});
      for (std::size_t p = 0; p < q.size(); ++p) {
        const auto [f1, f2] = forcing.fluid_force(t, q.x[p], q.y[p]);
        slice += q.w[p] * (f1 * f1 + f2 * f2);
      }
    }
    for (int ix = 0; ix < grid.nx(); ++ix) {
      const double g = forcing.plate_load(t, grid.x_nodes[ix]);
      slice += grid.x_weights[ix] * g * g;
    }
    total += dt * slice;
  }
  return total;
}

BalanceSummary check_energy_balance(const IntegrationResult& run) {
  BalanceSummary s;
  const double dt = run.trajectory.dt();
  for (double r : run.residual) {
    s.max = std::max(s.max, std::abs(r));
    s.l1 += dt * std::abs(r);
  }
  return s;
}

double check_mean_conservation(std::span<const double> means, double m) {
  double d = 0.0;
  for (double v : means) d = std::max(d, std::abs(v - m));
  return d;
}

double identity_slack(const IntegrationResult& run) {
  double r = 0.0;
  for (double v : run.residual) r = std::max(r, std::abs(v));
  return run.trajectory.period * r + std::abs(run.energy.back() - run.energy.front());
}

DiffusionCheck check_diffusion_estimate(const IntegrationResult& run, double slack, double periodic_tolerance) {
  DiffusionCheck c;
  const double dt = run.trajectory.dt();
  for (std::size_t i = 0; i < run.dissipation.size(); ++i) {
    c.lhs += dt * run.dissipation[i];
    c.rhs += dt * run.power[i];
  }
  c.slack = slack;
  const int s = run.trajectory.steps();
  const double defect = (run.trajectory.values.row(s) - run.trajectory.values.row(0)).cwiseAbs().sum() +
                        (run.trajectory.derivatives.row(s) - run.trajectory.derivatives.row(0)).cwiseAbs().sum();
  if (defect > periodic_tolerance) {
    c.skipped = true;
    c.ok = true;
    c.reason = "trajectory is not periodic";
    return c;
  }
  c.ok = c.lhs <= c.rhs + slack;
  return c;
}

EnergyReport make_report(const IntegrationResult& run, const GeometryTrajectory& geometry,
                         const DiscreteProblem& problem) {
  EnergyReport r;
  const CoefficientTrajectory& b = run.trajectory;
  const int steps = b.steps();
  for (int i = 0; i <= steps; ++i) r.times.push_back(b.time(i));
  r.energy = run.energy;
  r.dissipation = run.dissipation;
  r.power = run.power;
  r.residual = run.residual;
  r.mean_eta = run.mean_eta;
  r.sup_eta = run.sup_eta;
  for (int i = 0; i <= steps; ++i)
    r.periodicity.push_back((b.values.row(i) - b.values.row(0)).cwiseAbs().sum() +
                            (b.derivatives.row(i) - b.derivatives.row(0)).cwiseAbs().sum());

  r.forcing_norm = forcing_norm(problem.forcing, geometry, problem.grid);
  r.mean = problem.plate.mean;
  r.sup_energy = *std::max_element(r.energy.begin(), r.energy.end());
  const double c = r.forcing_norm;
  const double denom = c * c + c + r.mean * r.mean;
  r.bound_constant = denom > 0.0 ? r.sup_energy / denom : 0.0;

  const BalanceSummary bal = check_energy_balance(run);
  r.residual_max = bal.max;
  r.residual_l1 = bal.l1;
  r.mean_deviation = check_mean_conservation(r.mean_eta, r.mean);
  r.mean_ok = r.mean_deviation <= 1e-12;
  r.periodicity_defect = r.periodicity.back();

  // Coercivity at every node.
  const int half = problem.space.plate_count();
  std::vector<double> coeffs(half);
  r.min_coercivity_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j < half; ++j) coeffs[j] = b.values(i, 2 * j);
    const PlateProfile eta = problem.space.plate.combine(coeffs, r.mean);
    r.min_coercivity_gap = std::min(r.min_coercivity_gap, coercivity_gap(eta, problem.grid, problem.plate.weights));
  }
  r.coercivity_ok = r.min_coercivity_gap >= -1e-12;

  // Trace and Poincare ratios; a node with no dissipation must carry no motion.
  const double trace_bound = 1.0 + problem.space.kappa;
  for (int i = 0; i <= steps; ++i) {
    const double d = run.node_dissipation[i];
    if (d > 0.0) {
      r.trace_constant = std::max(r.trace_constant, run.plate_kinetic[i] / d);
      r.poincare_constant = std::max(r.poincare_constant, run.fluid_l2[i] / d);
    } else {
      if (run.plate_kinetic[i] > 0.0) r.trace_ok = false;
      if (run.fluid_l2[i] > 0.0) r.poincare_ok = false;
    }
  }
  r.trace_ok = r.trace_ok && r.trace_constant <= trace_bound;

  r.diffusion = check_diffusion_estimate(run, identity_slack(run));
  return r;
}

nlohmann::json to_json(const EnergyReport& r) {
  nlohmann::json j;
  j["forcing_norm"] = r.forcing_norm;
  j["mean"] = r.mean;
  j["sup_energy"] = r.sup_energy;
  j["bound_constant"] = r.bound_constant;
  j["energy_start"] = r.energy.front();
  j["energy_end"] = r.energy.back();
  j["residual_max"] = r.residual_max;
  j["residual_l1"] = r.residual_l1;
  j["mean_deviation"] = r.mean_deviation;
  j["periodicity_defect"] = r.periodicity_defect;
  j["min_coercivity_gap"] = r.min_coercivity_gap;
  j["trace_constant"] = r.trace_constant;
  j["poincare_constant"] = r.poincare_constant;
  j["diffusion"] = {{"lhs", r.diffusion.lhs},
                    {"rhs", r.diffusion.rhs},
                    {"slack", r.diffusion.slack},
                    {"ok", r.diffusion.ok},
                    {"skipped", r.diffusion.skipped},
                    {"reason", r.diffusion.reason}};
  j["flags"] = {{"coercivity", r.coercivity_ok},
                {"trace", r.trace_ok},
                {"poincare", r.poincare_ok},
                {"mean", r.mean_ok},
                {"diffusion", r.diffusion.ok}};
  j["steps"] = static_cast<int>(r.times.size()) - 1;
  return j;
}

std::pair<bool, double> check_uniform_bound(const EnergyReport& report, double c, double zero_tolerance) {
  const double f = report.forcing_norm;
  const double denom = f * f + f + report.mean * report.mean;
  if (denom == 0.0) return {report.sup_energy <= zero_tolerance, 0.0};
  const double k = report.sup_energy / denom;
  return {k <= c, k};
}

double fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need two or more points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("fit_power_law: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: abscissae coincide");
  return sxy / sxx;
}

SmallnessResult check_smallness_regime(std::span<const double> amplitudes, std::span<const double> sup_eta,
                                       double kappa) {
  if (amplitudes.size() != sup_eta.size()) throw std::invalid_argument("check_smallness_regime: size mismatch");
  SmallnessResult s;
  for (std::size_t i = 0; i < sup_eta.size(); ++i) {
    if (!(sup_eta[i] < kappa)) s.below_kappa = false;
    if (i > 0 && !(sup_eta[i] < sup_eta[i - 1])) s.monotone = false;
  }
  bool positive = amplitudes.size() >= 2;
  for (std::size_t i = 0; i < sup_eta.size(); ++i) positive = positive && sup_eta[i] > 0.0 && amplitudes[i] > 0.0;
  if (positive) s.exponent = fit_power_law(amplitudes, sup_eta);
  return s;
}

double korn_defect(const std::function<VectorSample(double, double)>& u, const PlateProfile& delta,
                   const ReferenceSlab& grid, std::span<const double> breaks) {
  const auto q = DomainQuadrature::build(delta, grid, breaks);
  double d = 0.0;
  for (std::size_t p = 0; p < q.size(); ++p) {
    const VectorSample s = u(q.x[p], q.y[p]);
    // |grad u|^2 - 2|Du|^2 = -u1x^2 - u2y^2 - 2 u1y u2x
    d += q.w[p] * (-s.du1dx * s.du1dx - s.du2dy * s.du2dy - 2.0 * s.du1dy * s.du2dx);
  }
  return d;
}

}  // namespace pfsi
