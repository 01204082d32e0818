#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pfsi/forcing.hpp"
#include "pfsi/periodic_fixed_point.hpp"
#include "pfsi/plate_model.hpp"
#include "pfsi/time_integrator.hpp"

namespace pfsi {

/// Validation failure tied to one configuration field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class RunMode { Solve, Fixpoint, Ladder, Study, Selftest };

RunMode parse_mode(const std::string& s);
std::string mode_name(RunMode m);

struct SolverConfig {
  RunMode mode = RunMode::Fixpoint;
  double period = 1.0;
  int n = 8;
  int steps = 128;
  double kappa = kDefaultKappa;
  double mean = 0.0;

  int plate_kmax = 0;  // 0 selects the smallest value that holds n/2 plate entries
  int fluid_jmax = 0;
  int fluid_mmax = 0;
  int nx = 0;  // 0 selects the resolution rule
  int nz = 0;

  KoiterWeights weights;
  ForcingSpec forcing;

  double epsilon = 0.0;  // 0 selects two time cells
  double sigma = 0.0;
  double omega = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 200;
  bool anderson = false;
  int anderson_depth = 5;

  double step_tolerance = 1e-12;
  int step_max_iterations = 50;
  double energy_ceiling = 1e8;

  std::string output = "out";
  bool deterministic = true;
  std::string resume;  // checkpoint to resume from

  std::vector<LadderLevel> ladder;
  std::vector<double> amplitudes;  // study mode: forcing scale factors
  double bound_constant = 0.0;     // 0 disables the uniform-bound assertion

  /// Fills defaults that depend on other fields and checks every invariant.
  void finalize();

  FixedPointConfig fixed_point() const;
  DiscreteProblem problem() const;
  DiscreteProblem problem(int n) const;
  int eps_cells() const;
};

SolverConfig load_config(const std::string& path);
SolverConfig parse_config(const std::string& text);

}  // namespace pfsi
