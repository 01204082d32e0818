#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "pfsi/forcing.hpp"
#include "pfsi/galerkin_basis.hpp"
#include "pfsi/reference_geometry.hpp"
#include "pfsi/system_assembly.hpp"

namespace pfsi {

/// Galerkin coefficients b(t_i) and b'(t_i) on a uniform grid over [0, T].
/// Row i of values/derivatives belongs to time t_i = i T / steps.
struct CoefficientTrajectory {
  double period = 1.0;
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivatives;

  static CoefficientTrajectory zero(double period, int steps, int n);

  int steps() const { return static_cast<int>(values.rows()) - 1; }
  int size() const { return static_cast<int>(values.cols()); }
  double dt() const { return period / steps(); }
  double time(int i) const { return period * i / steps(); }

  /// Cubic Hermite resampling onto a grid with a different step count.
  CoefficientTrajectory resampled(int steps) const;
  /// Zero-padded (or truncated) to n coefficients.
  CoefficientTrajectory resized(int n) const;
};

/// Discrete C^1 distance: max over nodes of |a_i - b_i|_inf + |a'_i - b'_i|_inf.
double c1_distance(const CoefficientTrajectory& a, const CoefficientTrajectory& b);
double c1_norm(const CoefficientTrajectory& a);

/// Everything fixed during a decoupled solve except the geometry.
struct DiscreteProblem {
  GalerkinSpace space;
  ReferenceSlab grid;
  PlateParams plate;
  ForcingSpec forcing;
};

struct State {
  Eigen::VectorXd b;
  Eigen::VectorXd beta;
};

struct StepOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
  double relaxation = 1.0;  // damping of the inner Picard update
  bool anderson = false;
  int anderson_depth = 4;
};

struct StepResult {
  State state;
  Eigen::VectorXd midpoint_velocity;
  AssembledSystem midpoint;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

using SystemEvaluator = std::function<AssembledSystem(double)>;

/// One implicit-midpoint step of b' = beta, M beta' = load - D beta - conv(beta) - K'(b).
/// The stiff linear parts (damping D and the bending stiffness) are kept in
/// the factored stage matrix; the remaining nonlinearity is iterated by
/// damped Picard (optionally Anderson-accelerated).
StepResult step(const SystemEvaluator& system, const State& state, double t, double dt,
                const StepOptions& options = {});

struct IntegrationOptions {
  StepOptions step;
  double energy_ceiling = 1e8;
};

/// Trajectory plus per-node and per-interval energy bookkeeping.
struct IntegrationResult {
  CoefficientTrajectory trajectory;
  std::vector<double> energy;         // E_n(t_i)
  std::vector<double> dissipation;    // int |grad u|^2 at interval midpoints
  std::vector<double> power;          // int f.u + int g d_t eta at interval midpoints
  std::vector<double> residual;       // (E_{i+1} - E_i)/dt + dissipation - power
  std::vector<double> mean_eta;       // int eta at nodes, by quadrature of the x samples
  std::vector<double> sup_eta;        // max |eta| over the x nodes
  std::vector<double> plate_kinetic;  // int |d_t eta|^2 at nodes
  std::vector<double> node_dissipation;  // int |grad u|^2 at nodes
  std::vector<double> fluid_l2;          // int |u|^2 at nodes
  int max_inner_iterations = 0;
};

/// Evaluator for the assembled system along a prescribed geometry.
SystemEvaluator make_system_evaluator(const DiscreteProblem& problem, const GeometryTrajectory& geometry);

/// Integrates over [0, T] with `steps` uniform steps from the given state.
/// Throws SolverError on inner non-convergence or when the energy exceeds the ceiling.
IntegrationResult integrate(const State& initial, const GeometryTrajectory& geometry, const DiscreteProblem& problem,
                            int steps, const IntegrationOptions& options = {});

}  // namespace pfsi
