#include "pfsi/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "pfsi/diagnostics.hpp"
#include "pfsi/io.hpp"

namespace pfsi {

namespace {

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

bool report_ok(const EnergyReport& r) {
  return r.coercivity_ok && r.trace_ok && r.poincare_ok && r.mean_ok && r.diffusion.ok;
}

nlohmann::json config_json(const SolverConfig& c) {
  nlohmann::json j;
  j["mode"] = mode_name(c.mode);
  j["period"] = c.period;
  j["n"] = c.n;
  j["steps"] = c.steps;
  j["kappa"] = c.kappa;
  j["mean"] = c.mean;
  j["epsilon_cells"] = c.eps_cells();
  j["sigma"] = c.sigma;
  j["omega"] = c.omega;
  j["tolerance"] = c.tolerance;
  j["anderson"] = c.anderson;
  j["deterministic"] = c.deterministic;
  return j;
}

struct FixpointOutcome {
  FixedPointResult result;
  EnergyReport report;
};

FixpointOutcome run_fixpoint(const SolverConfig& c, const DiscreteProblem& problem, const std::string& dir,
                             std::ostream& log) {
  CoefficientTrajectory start = CoefficientTrajectory::zero(c.period, c.steps, problem.space.n);
  int first = 0;
  if (!c.resume.empty()) {
    Checkpoint ck = load_checkpoint(c.resume);
    if (ck.trajectory.size() != problem.space.n || ck.trajectory.steps() != c.steps)
      throw ConfigError("checkpoint.resume", "checkpoint shape does not match n and steps");
    start = std::move(ck.trajectory);
    first = ck.iteration;
    log << "resuming from " << c.resume << " at iteration " << first << "\n";
  }
  const std::string ckpt = path_in(dir, "checkpoint.bin");
  auto observer = [&](int it, const CoefficientTrajectory& a) {
    save_checkpoint(ckpt, Checkpoint{a, it, config_json(c)});
  };

  FixpointOutcome out;
  out.result = find_fixed_point(start, problem, c.fixed_point(), observer, first);
  for (const auto& h : out.result.history)
    log << "iteration " << h.iteration << "  |a - T(a)| = " << format_double(h.distance) << "\n";
  if (out.result.solution.values.size() != 0) {
    out.report = make_report(out.result.last.result, out.result.last.geometry, problem);
    save_checkpoint(path_in(dir, "solution.bin"),
                    Checkpoint{out.result.solution, out.result.iterations, config_json(c)});
  }
  return out;
}

int mode_solve(const SolverConfig& c, const std::string& dir, std::ostream& log) {
  const DiscreteProblem problem = c.problem();
  CoefficientTrajectory a = CoefficientTrajectory::zero(c.period, c.steps, problem.space.n);
  if (!c.resume.empty()) a = load_checkpoint(c.resume).trajectory;
  const DecoupledSolve s = solve_decoupled(a, problem, c.fixed_point());
  const EnergyReport r = make_report(s.result, s.geometry, problem);
  nlohmann::json j;
  j["config"] = config_json(c);
  j["report"] = to_json(r);
  write_json(path_in(dir, "report.json"), j);
  write_text(path_in(dir, "series.csv"), series_csv(r));
  save_checkpoint(path_in(dir, "solution.bin"), Checkpoint{s.result.trajectory, 0, config_json(c)});
  log << "solve: sup E = " << format_double(r.sup_energy) << ", max residual = " << format_double(r.residual_max)
      << "\n";
  return report_ok(r) ? 0 : 1;
}

int mode_fixpoint(const SolverConfig& c, const std::string& dir, std::ostream& log) {
  const DiscreteProblem problem = c.problem();
  const FixpointOutcome o = run_fixpoint(c, problem, dir, log);
  nlohmann::json j;
  j["config"] = config_json(c);
  j["fixed_point"] = fixed_point_json(o.result);
  bool ok = o.result.converged;
  if (o.result.solution.values.size() != 0) {
    j["report"] = to_json(o.report);
    write_text(path_in(dir, "series.csv"), series_csv(o.report));
    ok = ok && report_ok(o.report);
    if (c.bound_constant > 0.0) {
      const auto [pass, k] = check_uniform_bound(o.report, c.bound_constant);
      j["uniform_bound"] = {{"ok", pass}, {"constant", k}, {"limit", c.bound_constant}};
      ok = ok && pass;
    }
  }
  write_json(path_in(dir, "report.json"), j);
  log << "fixpoint: " << (o.result.converged ? "converged" : "not converged") << " after "
      << o.result.iterations << " iterations, |a - T(a)| = " << format_double(o.result.distance) << "\n";
  return ok ? 0 : 1;
}

int mode_ladder(const SolverConfig& c, const std::string& dir, std::ostream& log) {
  const auto steps = refinement_ladder(c.ladder, [&](int n) { return c.problem(n); }, c.fixed_point());
  std::ostringstream csv;
  csv << "level,n,steps,eps_cells,sigma,converged,iterations,distance,eta_distance,energy_distance\r\n";
  bool ok = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const LadderStep& s = steps[i];
    const std::string sub = path_in(dir, "level_" + std::to_string(i));
    nlohmann::json j;
    j["level"] = {{"n", s.level.n}, {"steps", s.level.steps}, {"eps_cells", s.level.eps_cells},
                  {"sigma", s.level.sigma}};
    j["fixed_point"] = fixed_point_json(s.result);
    ok = ok && s.result.converged;
    if (s.result.solution.values.size() != 0) {
      const DiscreteProblem p = c.problem(s.level.n);
      const EnergyReport r = make_report(s.result.last.result, s.result.last.geometry, p);
      j["report"] = to_json(r);
      write_text(path_in(sub, "series.csv"), series_csv(r));
      ok = ok && report_ok(r);
    }
    write_json(path_in(sub, "report.json"), j);
    csv << i << ',' << s.level.n << ',' << s.level.steps << ',' << s.level.eps_cells << ','
        << format_double(s.level.sigma) << ',' << (s.result.converged ? 1 : 0) << ',' << s.result.iterations << ','
        << format_double(s.result.distance) << ',' << format_double(s.eta_distance) << ','
        << format_double(s.energy_distance) << "\r\n";
    log << "level " << i << ": n = " << s.level.n << ", steps = " << s.level.steps << ", "
        << (s.result.converged ? "converged" : "not converged") << ", eta distance = "
        << format_double(s.eta_distance) << "\n";
  }
  write_text(path_in(dir, "ladder_distances.csv"), csv.str());
  return ok ? 0 : 1;
}

int mode_study(const SolverConfig& c, const std::string& dir, std::ostream& log) {
  std::vector<double> amps = c.amplitudes;
  std::sort(amps.begin(), amps.end(), std::greater<>());
  nlohmann::json runs = nlohmann::json::array();
  std::vector<double> sup_e, sup_eta, consts;
  bool ok = true;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    SolverConfig ci = c;
    ci.forcing = c.forcing.scaled(amps[i]);
    ci.resume.clear();
    const DiscreteProblem problem = ci.problem();
    const std::string sub = path_in(dir, "run_" + std::to_string(i));
    const FixpointOutcome o = run_fixpoint(ci, problem, sub, log);
    nlohmann::json j{{"scale", amps[i]}, {"fixed_point", fixed_point_json(o.result)}};
    ok = ok && o.result.converged;
    if (o.result.solution.values.size() != 0) {
      j["report"] = to_json(o.report);
      write_text(path_in(sub, "series.csv"), series_csv(o.report));
      sup_e.push_back(o.report.sup_energy);
      sup_eta.push_back(*std::max_element(o.report.sup_eta.begin(), o.report.sup_eta.end()));
      consts.push_back(o.report.bound_constant);
      ok = ok && report_ok(o.report);
    }
    runs.push_back(j);
  }
  nlohmann::json s;
  s["config"] = config_json(c);
  s["runs"] = runs;
  if (!consts.empty() && consts.size() == amps.size()) {
    const double shared = *std::max_element(consts.begin(), consts.end());
    s["shared_constant"] = shared;
    if (c.bound_constant > 0.0) {
      s["bound_ok"] = shared <= c.bound_constant;
      ok = ok && shared <= c.bound_constant;
    }
    bool positive = amps.size() >= 2;
    for (double e : sup_e) positive = positive && e > 0.0;
    if (positive) s["energy_exponent"] = fit_power_law(amps, sup_e);
    const SmallnessResult sm = check_smallness_regime(amps, sup_eta, c.kappa);
    s["smallness"] = {{"exponent", sm.exponent}, {"monotone", sm.monotone}, {"below_kappa", sm.below_kappa}};
    ok = ok && sm.below_kappa;
  }
  write_json(path_in(dir, "study.json"), s);
  log << "study: " << amps.size() << " runs, " << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

nlohmann::json fixed_point_json(const FixedPointResult& r) {
  nlohmann::json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["distance"] = r.distance;
  j["periodicity_defect"] = r.periodicity_defect;
  j["coupling_defect"] = r.coupling_defect;
  if (!r.failure.empty()) j["failure"] = r.failure;
  nlohmann::json h = nlohmann::json::array();
  for (const auto& rec : r.history)
    h.push_back({{"iteration", rec.iteration},
                 {"distance", rec.distance},
                 {"energy_start", rec.energy_start},
                 {"energy_end", rec.energy_end},
                 {"sup_energy", rec.sup_energy},
                 {"ball_case", rec.energy_end >= rec.energy_start}});
  j["history"] = h;
  return j;
}

int run(SolverConfig config, const RunOptions& options, std::ostream& log) {
  if (options.mode) config.mode = *options.mode;
  if (options.output) config.output = *options.output;
  if (options.deterministic) config.deterministic = *options.deterministic;
  config.finalize();
  const std::string& dir = config.output;
  std::filesystem::create_directories(dir);

  switch (config.mode) {
    case RunMode::Solve: return mode_solve(config, dir, log);
    case RunMode::Fixpoint: return mode_fixpoint(config, dir, log);
    case RunMode::Ladder: return mode_ladder(config, dir, log);
    case RunMode::Study: return mode_study(config, dir, log);
    case RunMode::Selftest: return run_selftest(options.seed, log) ? 0 : 1;
  }
  return 1;
}

}  // namespace pfsi
