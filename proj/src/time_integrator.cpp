#include "pfsi/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pfsi/anderson.hpp"
#include "pfsi/common.hpp"

namespace pfsi {

CoefficientTrajectory CoefficientTrajectory::zero(double period, int steps, int n) {
  if (steps < 1 || n < 1) throw std::invalid_argument("CoefficientTrajectory: need steps >= 1 and n >= 1");
  CoefficientTrajectory c;
  c.period = period;
  c.values = Eigen::MatrixXd::Zero(steps + 1, n);
  c.derivatives = Eigen::MatrixXd::Zero(steps + 1, n);
  return c;
}

CoefficientTrajectory CoefficientTrajectory::resampled(int new_steps) const {
  if (new_steps == steps()) return *this;
  CoefficientTrajectory out = zero(period, new_steps, size());
  const double h = dt();
  for (int r = 0; r <= new_steps; ++r) {
    const double s = std::clamp(static_cast<double>(r) * steps() / new_steps, 0.0, static_cast<double>(steps()));
    const int i = std::min(static_cast<int>(std::floor(s)), steps() - 1);
    const double u = s - i;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1, d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;
    out.values.row(r) = h00 * values.row(i) + h10 * h * derivatives.row(i) + h01 * values.row(i + 1) +
                        h11 * h * derivatives.row(i + 1);
    out.derivatives.row(r) = (d00 / h) * values.row(i) + d10 * derivatives.row(i) + (d01 / h) * values.row(i + 1) +
                             d11 * derivatives.row(i + 1);
  }
  return out;
}

CoefficientTrajectory CoefficientTrajectory::resized(int n) const {
  CoefficientTrajectory out = zero(period, steps(), n);
  const int k = std::min(n, size());
  out.values.leftCols(k) = values.leftCols(k);
  out.derivatives.leftCols(k) = derivatives.leftCols(k);
  return out;
}

double c1_distance(const CoefficientTrajectory& a, const CoefficientTrajectory& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
    throw std::invalid_argument("c1_distance: trajectory shapes differ");
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
    const double v = (a.values.row(i) - b.values.row(i)).cwiseAbs().maxCoeff();
    const double w = (a.derivatives.row(i) - b.derivatives.row(i)).cwiseAbs().maxCoeff();
    d = std::max(d, v + w);
  }
  return d;
}

double c1_norm(const CoefficientTrajectory& a) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.values.rows(); ++i)
    d = std::max(d, a.values.row(i).cwiseAbs().maxCoeff() + a.derivatives.row(i).cwiseAbs().maxCoeff());
  return d;
}

StepResult step(const SystemEvaluator& system, const State& state, double t, double dt, const StepOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  StepResult result;
  result.midpoint = system(t + 0.5 * dt);
  const AssembledSystem& sys = result.midpoint;
  const Eigen::MatrixXd& M = sys.mass;
  const Eigen::MatrixXd& L = sys.plate_stiffness;

  // Unknown w = beta_mid; beta_1 = 2 w - beta_0, b_1 = b_0 + dt w, b_mid = b_0 + dt/2 w.
  //   [2M/dt + D + dt/2 L] w = 2M beta_0 / dt - L b_0 + load - conv(w) - (K'(b_mid) - L b_mid)
  const Eigen::MatrixXd stage = (2.0 / dt) * M + sys.damping() + (0.5 * dt) * L;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(stage);
  if (!(lu.rcond() > 1e-14)) throw SolverError("step: singular stage matrix at t = " + std::to_string(t));
  const Eigen::VectorXd rhs0 = (2.0 / dt) * (M * state.beta) - L * state.b + sys.load;

  auto picard = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd b_mid = state.b + (0.5 * dt) * w;
    const Eigen::VectorXd nonlinear = sys.convective(w) + sys.plate_force(b_mid) - L * b_mid;
    return Eigen::VectorXd(lu.solve(rhs0 - nonlinear));
  };

  AndersonAccelerator anderson(options.anderson ? options.anderson_depth : 0, options.relaxation);
  Eigen::VectorXd w = state.beta;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd gw = picard(w);
    const double change = (gw - w).cwiseAbs().maxCoeff();
    const double scale = std::max(gw.cwiseAbs().maxCoeff(), state.beta.cwiseAbs().maxCoeff());
    result.iterations = it;
    result.residual = change;
    if (change <= options.tolerance * scale) {
      w = gw;
      result.converged = true;
      break;
    }
    w = options.anderson ? anderson.update(w, gw) : Eigen::VectorXd(w + options.relaxation * (gw - w));
  }

  result.midpoint_velocity = w;
  result.state.beta = 2.0 * w - state.beta;
  result.state.b = state.b + dt * w;
  return result;
}

SystemEvaluator make_system_evaluator(const DiscreteProblem& problem, const GeometryTrajectory& geometry) {
  return [&problem, &geometry](double t) {
    const DeformationMap g = geometry.at(t);
    const InterleavedBasis basis = build_interleaved_basis(problem.space, g.delta);
    return assemble(basis, g.delta, g.delta_t, problem.forcing, t, problem.grid, problem.plate);
  };
}

namespace {

struct NodeQuantities {
  double energy, plate_kinetic, dissipation, fluid_l2, mean, sup;
};

NodeQuantities node_quantities(const DiscreteProblem& problem, const PlateProfile& delta, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& beta) {
  const InterleavedBasis basis = build_interleaved_basis(problem.space, delta);
  const auto data = sample_on_quadrature(basis, problem.grid);
  const BasisSamples& f = data->fields;
  const Eigen::VectorXd& w = data->weights;
  const Eigen::MatrixXd gram = f.u1.transpose() * w.asDiagonal() * f.u1 + f.u2.transpose() * w.asDiagonal() * f.u2;

  NodeQuantities q{};
  q.energy = energy_of_state(b, beta, gram, basis, problem.grid, problem.plate);
  q.fluid_l2 = beta.dot(gram * beta);
  for (int i = 0; i < basis.size(); i += 2) q.plate_kinetic += beta(i) * beta(i);
  const Eigen::VectorXd gx1 = f.u1x * beta, gy1 = f.u1y * beta, gx2 = f.u2x * beta, gy2 = f.u2y * beta;
  q.dissipation = w.dot(gx1.cwiseAbs2() + gy1.cwiseAbs2() + gx2.cwiseAbs2() + gy2.cwiseAbs2());

  const PlateProfile eta = basis.plate_displacement(std::span<const double>(b.data(), b.size()), problem.plate.mean);
  const auto samples = eta.sample(problem.grid.x_nodes);
  for (int i = 0; i < problem.grid.nx(); ++i) {
    q.mean += problem.grid.x_weights[i] * samples[i];
    q.sup = std::max(q.sup, std::abs(samples[i]));
  }
  return q;
}

}  // namespace

IntegrationResult integrate(const State& initial, const GeometryTrajectory& geometry, const DiscreteProblem& problem,
                            int steps, const IntegrationOptions& options) {
  const int n = problem.space.n;
  if (initial.b.size() != n || initial.beta.size() != n) throw std::invalid_argument("integrate: initial state size");
  if (steps < 1) throw std::invalid_argument("integrate: need at least one step");
  const int gs = geometry.steps();
  if (gs % steps != 0 && steps % gs != 0)
    throw std::invalid_argument("integrate: geometry grid is not commensurate with the step count");

  const double period = geometry.period();
  const double dt = period / steps;
  const SystemEvaluator system = make_system_evaluator(problem, geometry);

  IntegrationResult out;
  out.trajectory = CoefficientTrajectory::zero(period, steps, n);
  out.trajectory.values.row(0) = initial.b.transpose();
  out.trajectory.derivatives.row(0) = initial.beta.transpose();

  auto record_node = [&](int i, const State& s) {
    const NodeQuantities q = node_quantities(problem, geometry.at(period * i / steps).delta, s.b, s.beta);
    if (!std::isfinite(q.energy) || q.energy > options.energy_ceiling)
      throw SolverError("integrate: energy " + std::to_string(q.energy) + " exceeds ceiling at step " +
                        std::to_string(i));
    out.energy.push_back(q.energy);
    out.plate_kinetic.push_back(q.plate_kinetic);
    out.node_dissipation.push_back(q.dissipation);
    out.fluid_l2.push_back(q.fluid_l2);
    out.mean_eta.push_back(q.mean);
    out.sup_eta.push_back(q.sup);
  };

  State state = initial;
  record_node(0, state);
  for (int i = 0; i < steps; ++i) {
    const double t = period * i / steps;
    StepResult r = step(system, state, t, dt, options.step);
    if (!r.converged)
      throw SolverError("integrate: inner solve did not converge at step " + std::to_string(i) +
                        " (residual " + std::to_string(r.residual) + ")");
    out.max_inner_iterations = std::max(out.max_inner_iterations, r.iterations);

    const Eigen::VectorXd& w = r.midpoint_velocity;
    out.dissipation.push_back(w.dot(r.midpoint.viscous * w));
    out.power.push_back(w.dot(r.midpoint.load));

    state = std::move(r.state);
    out.trajectory.values.row(i + 1) = state.b.transpose();
    out.trajectory.derivatives.row(i + 1) = state.beta.transpose();
    record_node(i + 1, state);
    out.residual.push_back((out.energy[i + 1] - out.energy[i]) / dt + out.dissipation[i] - out.power[i]);
  }
  return out;
}

}  // namespace pfsi
