#include "pfsi/periodic_fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pfsi/anderson.hpp"
#include "pfsi/common.hpp"

namespace pfsi {

void PeriodizationParams::validate(int steps) const {
  if (cells < 2) throw std::invalid_argument("periodization: epsilon must span at least 2 time cells");
  if (cells >= steps) throw std::invalid_argument("periodization: epsilon must be shorter than the period");
}

PeriodizationParams PeriodizationParams::from_width(double eps, double dt) {
  const double r = eps / dt;
  const double c = std::round(r);
  if (!(std::abs(r - c) <= 1e-9 * std::max(1.0, r)))
    throw std::invalid_argument("periodization: epsilon is not a multiple of the time step");
  return PeriodizationParams{static_cast<int>(c)};
}

std::vector<double> periodize(std::span<const double> f, const PeriodizationParams& eps) {
  const int steps = static_cast<int>(f.size()) - 1;
  eps.validate(steps);
  std::vector<double> out(f.begin(), f.end());
  const int j0 = steps - eps.cells;
  const double start = f[j0], end = f[0];
  for (int j = j0 + 1; j < steps; ++j) {
    const double s = static_cast<double>(j - j0) / eps.cells;
    out[j] = start + s * (end - start);
  }
  out[steps] = end;
  return out;
}

CoefficientTrajectory periodize(const CoefficientTrajectory& a, const PeriodizationParams& eps) {
  const int steps = a.steps();
  eps.validate(steps);
  CoefficientTrajectory out = a;
  const int j0 = steps - eps.cells;
  const double width = eps.cells * a.dt();
  for (int c = 0; c < a.size(); ++c) {
    const Eigen::VectorXd col = a.values.col(c);
    const auto p = periodize(std::span<const double>(col.data(), col.size()), eps);
    const double slope = (p[steps] - p[j0]) / width;
    for (int j = j0; j <= steps; ++j) {
      out.values(j, c) = p[j];
      out.derivatives(j, c) = slope;
    }
  }
  return out;
}

GeometryTrajectory geometry_from_coefficients(const CoefficientTrajectory& a, const GalerkinSpace& space,
                                              double mean) {
  if (a.size() != space.n) throw std::invalid_argument("geometry_from_coefficients: size mismatch");
  const int half = space.plate_count();
  std::vector<PlateProfile> values, rates;
  values.reserve(a.steps() + 1);
  rates.reserve(a.steps() + 1);
  std::vector<double> c(half), d(half);
  for (int i = 0; i <= a.steps(); ++i) {
    for (int j = 0; j < half; ++j) {
      c[j] = a.values(i, 2 * j);
      d[j] = a.derivatives(i, 2 * j);
    }
    values.push_back(space.plate.combine(c, mean));
    rates.push_back(space.plate.combine(d, 0.0));
  }
  return GeometryTrajectory(a.period, std::move(values), std::move(rates));
}

namespace {

int clamp_sample_count(const GeometryTrajectory& g) {
  int k = 0;
  for (const auto& v : g.values()) k = std::max(k, v.kmax());
  for (const auto& v : g.rates()) k = std::max(k, v.kmax());
  return std::max(64, 4 * k + 4);
}

std::vector<double> uniform_nodes(int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = static_cast<double>(i) / n;
  return x;
}

PlateProfile fejer(const PlateProfile& p, int cutoff) {
  PlateProfile out(std::min(p.kmax(), cutoff), p.mean());
  for (int k = 1; k <= out.kmax(); ++k) {
    const double f = 1.0 - static_cast<double>(k) / (cutoff + 1);
    out.set_cos_coeff(k, f * p.cos_coeff(k));
    out.set_sin_coeff(k, f * p.sin_coeff(k));
  }
  return out;
}

std::vector<PlateProfile> mollify(const std::vector<PlateProfile>& v, const std::vector<double>& kernel) {
  const int steps = static_cast<int>(v.size()) - 1;
  const int half = static_cast<int>(kernel.size()) / 2;
  std::vector<PlateProfile> out(v.size());
  for (int i = 0; i < steps; ++i) {
    PlateProfile acc;
    for (int j = -half; j <= half; ++j) {
      const int idx = ((i + j) % steps + steps) % steps;
      acc = axpy(acc, kernel[j + half], v[idx]);
    }
    out[i] = std::move(acc);
  }
  out[steps] = out[0];
  return out;
}

}  // namespace

GeometryTrajectory clamp_and_regularize(const GeometryTrajectory& delta, double kappa, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("clamp_and_regularize: sigma must be non-negative");
  const double level = 0.5 * kappa;
  const int ns = clamp_sample_count(delta);
  const auto x = uniform_nodes(ns);

  std::vector<PlateProfile> values = delta.values();
  std::vector<PlateProfile> rates = delta.rates();
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto v = values[i].sample(x);
    bool clamped = false;
    std::vector<double> r;
    for (int j = 0; j < ns; ++j) {
      if (std::abs(v[j]) > level) {
        if (!clamped) r = rates[i].sample(x);
        clamped = true;
        v[j] = std::copysign(level, v[j]);
        r[j] = 0.0;
      }
    }
    if (clamped) {
      values[i] = PlateProfile::from_samples(v);
      rates[i] = PlateProfile::from_samples(r);
    }
  }

  if (sigma > 0.0) {
    const int steps = delta.steps();
    const int half = std::min(static_cast<int>(std::floor(sigma / delta.dt())), (steps - 1) / 2);
    if (half > 0) {
      std::vector<double> kernel(2 * half + 1);
      double total = 0.0;
      for (int j = -half; j <= half; ++j) total += kernel[j + half] = 1.0 - std::abs(j) / (half + 1.0);
      for (double& k : kernel) k /= total;
      values = mollify(values, kernel);
      rates = mollify(rates, kernel);
    }
    const int cutoff = static_cast<int>(std::floor(1.0 / sigma));
    for (auto& v : values) v = fejer(v, cutoff);
    for (auto& r : rates) r = fejer(r, cutoff);
  }
  return GeometryTrajectory(delta.period(), std::move(values), std::move(rates));
}

void FixedPointConfig::validate(int steps) const {
  if (!(omega > 0.0 && omega <= 1.0)) throw std::invalid_argument("fixed_point.omega must lie in (0, 1]");
  if (!(tolerance > 0.0)) throw std::invalid_argument("fixed_point.tolerance must be positive");
  if (max_iterations < 0) throw std::invalid_argument("fixed_point.max_iterations must be non-negative");
  if (sigma < 0.0) throw std::invalid_argument("fixed_point.sigma must be non-negative");
  if (anderson && anderson_depth < 1) throw std::invalid_argument("fixed_point.anderson_depth must be positive");
  eps.validate(steps);
}

DecoupledSolve solve_decoupled(const CoefficientTrajectory& a, const DiscreteProblem& problem,
                               const FixedPointConfig& cfg) {
  if (a.size() != problem.space.n) throw std::invalid_argument("solve_decoupled: trajectory size mismatch");
  DecoupledSolve out;
  const CoefficientTrajectory p = periodize(a, cfg.eps);
  out.geometry = clamp_and_regularize(geometry_from_coefficients(p, problem.space, problem.plate.mean),
                                      problem.space.kappa, cfg.sigma);
  State initial{a.values.row(a.steps()).transpose(), a.derivatives.row(a.steps()).transpose()};
  out.result = integrate(initial, out.geometry, problem, a.steps(), cfg.integration);
  return out;
}

double periodicity_defect(const CoefficientTrajectory& b) {
  const int s = b.steps();
  return (b.values.row(s) - b.values.row(0)).cwiseAbs().sum() +
         (b.derivatives.row(s) - b.derivatives.row(0)).cwiseAbs().sum();
}

double coupling_defect(const GeometryTrajectory& geometry, const CoefficientTrajectory& b, const GalerkinSpace& space,
                       double mean, int samples) {
  const GeometryTrajectory eta = geometry_from_coefficients(b, space, mean);
  if (eta.steps() != geometry.steps()) throw std::invalid_argument("coupling_defect: grids differ");
  const auto x = uniform_nodes(samples);
  double d = 0.0;
  for (int i = 0; i <= eta.steps(); ++i) {
    const auto diff = (geometry.values()[i] - eta.values()[i]).sample(x);
    for (double v : diff) d = std::max(d, std::abs(v));
  }
  return d;
}

namespace {

Eigen::VectorXd flatten(const CoefficientTrajectory& a) {
  Eigen::VectorXd v(2 * a.values.size());
  v << Eigen::Map<const Eigen::VectorXd>(a.values.data(), a.values.size()),
      Eigen::Map<const Eigen::VectorXd>(a.derivatives.data(), a.derivatives.size());
  return v;
}

void unflatten(const Eigen::VectorXd& v, CoefficientTrajectory& a) {
  const Eigen::Index m = a.values.size();
  Eigen::Map<Eigen::VectorXd>(a.values.data(), m) = v.head(m);
  Eigen::Map<Eigen::VectorXd>(a.derivatives.data(), m) = v.tail(m);
}

}  // namespace

FixedPointResult find_fixed_point(const CoefficientTrajectory& initial, const DiscreteProblem& problem,
                                  const FixedPointConfig& cfg, const IterateObserver& observer,
                                  int first_iteration) {
  cfg.validate(initial.steps());
  FixedPointResult out;
  CoefficientTrajectory a = initial;
  AndersonAccelerator anderson(cfg.anderson ? cfg.anderson_depth : 0, cfg.omega);
  double best = std::numeric_limits<double>::infinity();

  for (int it = first_iteration;; ++it) {
    DecoupledSolve s;
    try {
      s = solve_decoupled(a, problem, cfg);
    } catch (const SolverError& e) {
      out.failure = e.what();
      out.iterations = it;
      break;
    }
    const CoefficientTrajectory& b = s.result.trajectory;
    const double dist = c1_distance(a, b);

    IterationRecord rec;
    rec.iteration = it;
    rec.distance = dist;
    rec.energy_start = s.result.energy.front();
    rec.energy_end = s.result.energy.back();
    rec.sup_energy = *std::max_element(s.result.energy.begin(), s.result.energy.end());
    out.history.push_back(rec);

    if (dist <= best || out.solution.values.size() == 0) {
      best = dist;
      out.solution = b;
      out.last = s;
      out.distance = dist;
      out.iterations = it;
    }
    if (dist <= cfg.tolerance) {
      out.converged = true;
      out.solution = b;
      out.last = std::move(s);
      out.distance = dist;
      out.iterations = it;
      break;
    }
    if (it - first_iteration >= cfg.max_iterations) break;

    if (cfg.anderson) {
      unflatten(anderson.update(flatten(a), flatten(b)), a);
    } else {
      a.values = (1.0 - cfg.omega) * a.values + cfg.omega * b.values;
      a.derivatives = (1.0 - cfg.omega) * a.derivatives + cfg.omega * b.derivatives;
    }
    if (observer) observer(it + 1, a);
  }

  if (out.solution.values.size() != 0) {
    out.periodicity_defect = periodicity_defect(out.solution);
    out.coupling_defect = coupling_defect(out.last.geometry, out.solution, problem.space, problem.plate.mean,
                                          std::max(64, 4 * problem.space.plate.kmax() + 4));
  }
  return out;
}

std::vector<LadderStep> refinement_ladder(const std::vector<LadderLevel>& levels, const ProblemFactory& problem,
                                          const FixedPointConfig& base) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const LadderLevel& p = levels[i - 1];
    const LadderLevel& q = levels[i];
    const double eps_p = static_cast<double>(p.eps_cells) / p.steps, eps_q = static_cast<double>(q.eps_cells) / q.steps;
    if (q.n < p.n || q.steps < p.steps || eps_q > eps_p + 1e-15 || q.sigma > p.sigma)
      throw std::invalid_argument("refinement_ladder: schedule must refine monotonically");
  }

  std::vector<LadderStep> out;
  CoefficientTrajectory previous;
  for (const LadderLevel& level : levels) {
    const DiscreteProblem prob = problem(level.n);
    FixedPointConfig cfg = base;
    cfg.sigma = level.sigma;
    cfg.eps = PeriodizationParams{level.eps_cells};

    CoefficientTrajectory start = previous.values.size() == 0
                                      ? CoefficientTrajectory::zero(prob.forcing.period, level.steps, level.n)
                                      : previous.resized(level.n).resampled(level.steps);
    LadderStep step;
    step.level = level;
    step.result = find_fixed_point(start, prob, cfg);

    const CoefficientTrajectory& sol = step.result.solution;
    if (!out.empty() && sol.values.size() != 0 && previous.values.size() != 0) {
      const LadderStep& prev = out.back();
      const CoefficientTrajectory moved = previous.resized(level.n).resampled(level.steps);
      const GeometryTrajectory g0 = geometry_from_coefficients(moved, prob.space, prob.plate.mean);
      step.eta_distance = coupling_defect(g0, sol, prob.space, prob.plate.mean,
                                          std::max(64, 4 * prob.space.plate.kmax() + 4));
      const auto& e0 = prev.result.last.result.energy;
      const auto& e1 = step.result.last.result.energy;
      const int s0 = static_cast<int>(e0.size()) - 1;
      for (int i = 0; i <= level.steps; ++i) {
        const double pos = static_cast<double>(i) * s0 / level.steps;
        const int j = std::min(static_cast<int>(pos), s0 - 1);
        const double u = pos - j;
        const double e = (1.0 - u) * e0[j] + u * e0[j + 1];
        step.energy_distance = std::max(step.energy_distance, std::abs(e1[i] - e));
      }
    }
    if (sol.values.size() != 0) previous = sol;
    out.push_back(std::move(step));
  }
  return out;
}

}  // namespace pfsi
