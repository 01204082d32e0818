#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pfsi/forcing.hpp"
#include "pfsi/galerkin_basis.hpp"
#include "pfsi/reference_geometry.hpp"
#include "pfsi/time_integrator.hpp"

namespace pfsi {

/// C(f, g) = int_0^T int_Omega(t) |f|^2 + int_0^T int_omega |g|^2, by the
/// periodic trapezoid rule on the geometry's time grid.
double forcing_norm(const ForcingSpec& forcing, const GeometryTrajectory& geometry, const ReferenceSlab& grid);

struct BalanceSummary {
  double max = 0.0;
  double l1 = 0.0;  // dt * sum |residual_i|
};

BalanceSummary check_energy_balance(const IntegrationResult& run);

/// max_i |means[i] - m|.
double check_mean_conservation(std::span<const double> means, double m);

struct DiffusionCheck {
  double lhs = 0.0;    // int_0^T int |grad u|^2
  double rhs = 0.0;    // int_0^T (int f.u + int g d_t eta)
  double slack = 0.0;
  bool ok = false;
  bool skipped = false;
  std::string reason;
};

/// Time integrals by the midpoint sums of the recorded interval quantities.
/// Skipped when the trajectory is not periodic to `periodic_tolerance`.
DiffusionCheck check_diffusion_estimate(const IntegrationResult& run, double slack,
                                        double periodic_tolerance = 1e-8);

/// Slack implied by the discrete energy identity: T max|residual| + |E(T) - E(0)|.
double identity_slack(const IntegrationResult& run);

struct EnergyReport {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> dissipation;   // per interval
  std::vector<double> power;         // per interval
  std::vector<double> residual;      // per interval
  std::vector<double> mean_eta;
  std::vector<double> sup_eta;
  std::vector<double> periodicity;   // |b_i - b_0|_1 + |b'_i - b'_0|_1

  double forcing_norm = 0.0;
  double mean = 0.0;
  double sup_energy = 0.0;
  double bound_constant = 0.0;  // sup_E / (C^2 + C + m^2), 0 when the denominator vanishes
  double residual_max = 0.0;
  double residual_l1 = 0.0;
  double mean_deviation = 0.0;
  double periodicity_defect = 0.0;

  double min_coercivity_gap = 0.0;
  double trace_constant = 0.0;     // observed max of int |d_t eta|^2 / int |grad u|^2
  double poincare_constant = 0.0;  // observed max of int |u|^2 / int |grad u|^2
  DiffusionCheck diffusion;

  bool coercivity_ok = true;
  bool trace_ok = true;
  bool poincare_ok = true;
  bool mean_ok = true;
};

/// Post-processes one run on its geometry.
EnergyReport make_report(const IntegrationResult& run, const GeometryTrajectory& geometry,
                         const DiscreteProblem& problem);

nlohmann::json to_json(const EnergyReport& report);

/// (sup_E <= c (C^2 + C + m^2), sup_E / (C^2 + C + m^2)). When C = m = 0 the
/// check requires sup_E <= zero_tolerance and the constant is 0.
std::pair<bool, double> check_uniform_bound(const EnergyReport& report, double c, double zero_tolerance = 0.0);

/// Least-squares slope of log y against log x.
double fit_power_law(std::span<const double> x, std::span<const double> y);

struct SmallnessResult {
  double exponent = 0.0;
  bool monotone = true;      // sup|eta| decreases with the amplitude
  bool below_kappa = true;   // sup|eta| < kappa in every run
};

/// Amplitudes must be given in decreasing order.
SmallnessResult check_smallness_regime(std::span<const double> amplitudes, std::span<const double> sup_eta,
                                       double kappa);

/// int |grad u|^2 - 2 int |D u|^2 over the domain bounded by delta.
double korn_defect(const std::function<VectorSample(double, double)>& u, const PlateProfile& delta,
                   const ReferenceSlab& grid, std::span<const double> breaks = {});

}  // namespace pfsi
