#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pfsi/reference_geometry.hpp"
#include "pfsi/time_integrator.hpp"

namespace pfsi {

/// Width of the periodization tail as a whole number of time cells.
struct PeriodizationParams {
  int cells = 2;

  /// Throws std::invalid_argument unless 2 <= cells < steps.
  void validate(int steps) const;
  /// Cell count for a real width; throws when eps is not a multiple of dt.
  static PeriodizationParams from_width(double eps, double dt);
};

/// P_eps on uniform samples f_0..f_N: identity up to node N - cells, then the
/// straight line from f(T - eps) back to f(0). The last sample is set to f_0
/// exactly.
std::vector<double> periodize(std::span<const double> f, const PeriodizationParams& eps);

/// Channel-wise P_eps of a coefficient trajectory. On the tail the derivative
/// samples are replaced by the slope of the joining segment.
CoefficientTrajectory periodize(const CoefficientTrajectory& a, const PeriodizationParams& eps);

/// delta(t) = sum over plate entries a_j(t) Y_{j/2} + mean, with delta_t from a'.
GeometryTrajectory geometry_from_coefficients(const CoefficientTrajectory& a, const GalerkinSpace& space, double mean);

/// Truncation of the physical samples to [-kappa/2, kappa/2] followed by the
/// regularizer of width sigma (a normalized periodic hat mollifier in time and
/// Fejer damping of the x modes above floor(1/sigma)). sigma = 0 skips the
/// regularizer; a geometry already inside the band is returned unchanged.
GeometryTrajectory clamp_and_regularize(const GeometryTrajectory& delta, double kappa, double sigma);

struct FixedPointConfig {
  double omega = 0.5;
  int max_iterations = 200;
  double tolerance = 1e-10;
  double sigma = 0.0;
  PeriodizationParams eps;
  bool anderson = false;
  int anderson_depth = 5;
  IntegrationOptions integration;

  void validate(int steps) const;
};

/// One application of the map T together with the geometry it used.
struct DecoupledSolve {
  GeometryTrajectory geometry;
  IntegrationResult result;
};

/// T(a): periodize -> clamp -> regularize -> integrate from (a(T), a'(T)).
DecoupledSolve solve_decoupled(const CoefficientTrajectory& a, const DiscreteProblem& problem,
                               const FixedPointConfig& cfg);

struct IterationRecord {
  int iteration = 0;
  double distance = 0.0;  // |a - T(a)| in the discrete C^1 norm
  double energy_start = 0.0;
  double energy_end = 0.0;
  double sup_energy = 0.0;
};

struct FixedPointResult {
  CoefficientTrajectory solution;  // T(a) at the final iterate
  DecoupledSolve last;
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations = 0;
  double distance = 0.0;
  double periodicity_defect = 0.0;  // |b(0) - b(T)|_1 + |b'(0) - b'(T)|_1
  double coupling_defect = 0.0;     // max over nodes and x samples of |delta - eta|
  std::string failure;              // set when an inner solve failed
};

/// Called after every outer iteration with the iteration count and the next iterate.
using IterateObserver = std::function<void(int, const CoefficientTrajectory&)>;

/// Damped Picard (or Anderson) iteration a <- (1 - omega) a + omega T(a),
/// started from `initial`, counting iterations from `first_iteration`.
FixedPointResult find_fixed_point(const CoefficientTrajectory& initial, const DiscreteProblem& problem,
                                  const FixedPointConfig& cfg, const IterateObserver& observer = {},
                                  int first_iteration = 0);

double periodicity_defect(const CoefficientTrajectory& b);
double coupling_defect(const GeometryTrajectory& geometry, const CoefficientTrajectory& b, const GalerkinSpace& space,
                       double mean, int samples);

struct LadderLevel {
  int n = 8;
  int steps = 128;
  int eps_cells = 2;
  double sigma = 0.0;
};

struct LadderStep {
  LadderLevel level;
  FixedPointResult result;
  // Distances to the previous level (zero on the first level).
  double eta_distance = 0.0;
  double energy_distance = 0.0;
};

using ProblemFactory = std::function<DiscreteProblem(int n)>;

/// find_fixed_point on every level, each warm-started from the previous
/// solution (zero-padded in n, Hermite-resampled in time).
std::vector<LadderStep> refinement_ladder(const std::vector<LadderLevel>& levels, const ProblemFactory& problem,
                                          const FixedPointConfig& base);

}  // namespace pfsi
