#include "pfsi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

namespace pfsi {

RunMode parse_mode(const std::string& s) {
  if (s == "solve") return RunMode::Solve;
  if (s == "fixpoint") return RunMode::Fixpoint;
  if (s == "ladder") return RunMode::Ladder;
  if (s == "study") return RunMode::Study;
  if (s == "selftest") return RunMode::Selftest;
  throw ConfigError("mode", "unknown mode '" + s + "' (solve, fixpoint, ladder, study, selftest)");
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::Solve: return "solve";
    case RunMode::Fixpoint: return "fixpoint";
    case RunMode::Ladder: return "ladder";
    case RunMode::Study: return "study";
    case RunMode::Selftest: return "selftest";
  }
  return "?";
}

namespace {

void check_keys(const toml::table& t, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end())
      throw ConfigError(where.empty() ? std::string(k.str()) : where + "." + std::string(k.str()), "unknown key");
  }
}

std::string join(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

template <class T>
void read(const toml::table& t, const std::string& where, std::string_view key, T& out) {
  const toml::node* n = t.get(key);
  if (!n) return;
  if constexpr (std::is_same_v<T, bool>) {
    if (!n->is_boolean()) throw ConfigError(join(where, key), "expected a boolean");
    out = n->as_boolean()->get();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!n->is_integer()) throw ConfigError(join(where, key), "expected an integer");
    const auto v = n->as_integer()->get();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw ConfigError(join(where, key), "integer out of range");
    out = static_cast<int>(v);
  } else if constexpr (std::is_same_v<T, double>) {
    if (n->is_integer())
      out = static_cast<double>(n->as_integer()->get());
    else if (n->is_floating_point())
      out = n->as_floating_point()->get();
    else
      throw ConfigError(join(where, key), "expected a number");
  } else {
    if (!n->is_string()) throw ConfigError(join(where, key), "expected a string");
    out = n->as_string()->get();
  }
}

const toml::table* subtable(const toml::table& t, std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(std::string(key), "expected a table");
  return n->as_table();
}

template <class F>
void for_each_entry(const toml::table& t, const std::string& where, std::string_view key, F f) {
  const toml::node* n = t.get(key);
  if (!n) return;
  if (!n->is_array()) throw ConfigError(join(where, key), "expected an array of tables");
  int i = 0;
  for (const auto& e : *n->as_array()) {
    const std::string name = join(where, key) + "[" + std::to_string(i++) + "]";
    if (!e.is_table()) throw ConfigError(name, "expected a table");
    f(*e.as_table(), name);
  }
}

int even_at_least(int v) { return v % 2 == 0 ? v : v + 1; }

}  // namespace

SolverConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line;
    throw ConfigError("config", os.str());
  }
  check_keys(root, "", {"mode", "period", "n", "steps", "kappa", "mean", "basis", "quadrature", "plate", "forcing",
                        "periodization", "fixed_point", "integrator", "output", "ladder", "study", "checkpoint"});

  SolverConfig c;
  std::string mode;
  read(root, "", "mode", mode);
  if (!mode.empty()) c.mode = parse_mode(mode);
  read(root, "", "period", c.period);
  read(root, "", "n", c.n);
  read(root, "", "steps", c.steps);
  read(root, "", "kappa", c.kappa);
  read(root, "", "mean", c.mean);

  if (const auto* t = subtable(root, "basis")) {
    check_keys(*t, "basis", {"plate_kmax", "fluid_jmax", "fluid_mmax"});
    read(*t, "basis", "plate_kmax", c.plate_kmax);
    read(*t, "basis", "fluid_jmax", c.fluid_jmax);
    read(*t, "basis", "fluid_mmax", c.fluid_mmax);
  }
  if (const auto* t = subtable(root, "quadrature")) {
    check_keys(*t, "quadrature", {"nx", "nz"});
    read(*t, "quadrature", "nx", c.nx);
    read(*t, "quadrature", "nz", c.nz);
  }
  if (const auto* t = subtable(root, "plate")) {
    check_keys(*t, "plate", {"membrane", "bending"});
    read(*t, "plate", "membrane", c.weights.membrane);
    read(*t, "plate", "bending", c.weights.bending);
  }
  if (const auto* t = subtable(root, "forcing")) {
    check_keys(*t, "forcing", {"fluid", "plate"});
    for_each_entry(*t, "forcing", "fluid", [&](const toml::table& e, const std::string& w) {
      check_keys(e, w, {"component", "time", "x", "y", "amplitude"});
      FluidForcingMode m;
      read(e, w, "component", m.component);
      read(e, w, "time", m.time);
      read(e, w, "x", m.x);
      read(e, w, "y", m.y);
      read(e, w, "amplitude", m.amplitude);
      if (m.component != 0 && m.component != 1) throw ConfigError(w + ".component", "must be 0 or 1");
      if (m.y < 0) throw ConfigError(w + ".y", "must be non-negative");
      c.forcing.fluid.push_back(m);
    });
    for_each_entry(*t, "forcing", "plate", [&](const toml::table& e, const std::string& w) {
      check_keys(e, w, {"time", "x", "amplitude"});
      PlateForcingMode m;
      read(e, w, "time", m.time);
      read(e, w, "x", m.x);
      read(e, w, "amplitude", m.amplitude);
      if (m.x == 0) throw ConfigError(w + ".x", "the plate load must be mean-free (x index 0 is the constant)");
      c.forcing.plate.push_back(m);
    });
  }
  if (const auto* t = subtable(root, "periodization")) {
    check_keys(*t, "periodization", {"epsilon", "sigma"});
    read(*t, "periodization", "epsilon", c.epsilon);
    read(*t, "periodization", "sigma", c.sigma);
  }
  if (const auto* t = subtable(root, "fixed_point")) {
    check_keys(*t, "fixed_point", {"omega", "tolerance", "max_iterations", "anderson", "anderson_depth"});
    read(*t, "fixed_point", "omega", c.omega);
    read(*t, "fixed_point", "tolerance", c.tolerance);
    read(*t, "fixed_point", "max_iterations", c.max_iterations);
    read(*t, "fixed_point", "anderson", c.anderson);
    read(*t, "fixed_point", "anderson_depth", c.anderson_depth);
  }
  if (const auto* t = subtable(root, "integrator")) {
    check_keys(*t, "integrator", {"tolerance", "max_iterations", "energy_ceiling"});
    read(*t, "integrator", "tolerance", c.step_tolerance);
    read(*t, "integrator", "max_iterations", c.step_max_iterations);
    read(*t, "integrator", "energy_ceiling", c.energy_ceiling);
  }
  if (const auto* t = subtable(root, "output")) {
    check_keys(*t, "output", {"directory", "deterministic"});
    read(*t, "output", "directory", c.output);
    read(*t, "output", "deterministic", c.deterministic);
  }
  if (const auto* t = subtable(root, "checkpoint")) {
    check_keys(*t, "checkpoint", {"resume"});
    read(*t, "checkpoint", "resume", c.resume);
  }
  if (const auto* t = subtable(root, "ladder")) {
    check_keys(*t, "ladder", {"levels"});
    for_each_entry(*t, "ladder", "levels", [&](const toml::table& e, const std::string& w) {
      check_keys(e, w, {"n", "steps", "epsilon", "sigma"});
      LadderLevel l;
      double eps = 0.0;
      read(e, w, "n", l.n);
      read(e, w, "steps", l.steps);
      read(e, w, "epsilon", eps);
      read(e, w, "sigma", l.sigma);
      if (l.steps < 3) throw ConfigError(w + ".steps", "must be at least 3");
      try {
        l.eps_cells = eps == 0.0 ? 2 : PeriodizationParams::from_width(eps, c.period / l.steps).cells;
        PeriodizationParams{l.eps_cells}.validate(l.steps);
      } catch (const std::invalid_argument& err) {
        throw ConfigError(w + ".epsilon", err.what());
      }
      c.ladder.push_back(l);
    });
  }
  if (const auto* t = subtable(root, "study")) {
    check_keys(*t, "study", {"amplitudes", "bound_constant"});
    if (const toml::node* a = t->get("amplitudes")) {
      if (!a->is_array()) throw ConfigError("study.amplitudes", "expected an array of numbers");
      for (const auto& v : *a->as_array()) {
        if (v.is_integer())
          c.amplitudes.push_back(static_cast<double>(v.as_integer()->get()));
        else if (v.is_floating_point())
          c.amplitudes.push_back(v.as_floating_point()->get());
        else
          throw ConfigError("study.amplitudes", "expected an array of numbers");
      }
    }
    read(*t, "study", "bound_constant", c.bound_constant);
  }
  c.finalize();
  return c;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void SolverConfig::finalize() {
  if (!(period > 0.0)) throw ConfigError("period", "must be positive");
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa", "must lie in (0, 1)");
  if (n < 2 || n % 2 != 0) throw ConfigError("n", "must be even and at least 2");
  if (steps < 3) throw ConfigError("steps", "must be at least 3");
  if (!(std::abs(mean) < 0.5 * kappa)) throw ConfigError("mean", "must satisfy |mean| < kappa / 2");
  if (plate_kmax < 0) throw ConfigError("basis.plate_kmax", "must be non-negative");
  if (fluid_jmax < 0) throw ConfigError("basis.fluid_jmax", "must be non-negative");
  if (fluid_mmax < 0) throw ConfigError("basis.fluid_mmax", "must be non-negative");
  if (nx != 0 && (nx < 4 || nx % 2 != 0)) throw ConfigError("quadrature.nx", "must be even and at least 4");
  if (nz != 0 && nz < 4) throw ConfigError("quadrature.nz", "must be at least 4");
  if (!(weights.membrane >= 0.0)) throw ConfigError("plate.membrane", "must be non-negative");
  if (!(weights.bending > 0.0)) throw ConfigError("plate.bending", "must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("periodization.sigma", "must be non-negative");
  if (!(omega > 0.0 && omega <= 1.0)) throw ConfigError("fixed_point.omega", "must lie in (0, 1]");
  if (!(tolerance > 0.0)) throw ConfigError("fixed_point.tolerance", "must be positive");
  if (max_iterations < 0) throw ConfigError("fixed_point.max_iterations", "must be non-negative");
  if (anderson_depth < 1) throw ConfigError("fixed_point.anderson_depth", "must be positive");
  if (!(step_tolerance > 0.0)) throw ConfigError("integrator.tolerance", "must be positive");
  if (step_max_iterations < 1) throw ConfigError("integrator.max_iterations", "must be positive");
  if (!(energy_ceiling > 0.0)) throw ConfigError("integrator.energy_ceiling", "must be positive");
  if (output.empty()) throw ConfigError("output.directory", "must not be empty");
  for (double a : amplitudes)
    if (!(a > 0.0)) throw ConfigError("study.amplitudes", "must be positive");
  if (!(bound_constant >= 0.0)) throw ConfigError("study.bound_constant", "must be non-negative");
  forcing.period = period;

  try {
    const int cells = eps_cells();
    PeriodizationParams{cells}.validate(steps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("periodization.epsilon", e.what());
  }
  if (plate_kmax != 0 && n / 2 > 2 * plate_kmax)
    throw ConfigError("basis.plate_kmax", "too small for n/2 = " + std::to_string(n / 2) + " plate entries");
  if (fluid_jmax != 0 || fluid_mmax != 0) {
    const int j = fluid_jmax, m = std::max(fluid_mmax, 1);
    if ((2 * j + 1) * m < n / 2)
      throw ConfigError("basis", "fluid pool (2 fluid_jmax + 1) fluid_mmax is smaller than n/2");
  }
  if (mode == RunMode::Ladder && ladder.empty()) throw ConfigError("ladder.levels", "ladder mode needs levels");
  if (mode == RunMode::Study && amplitudes.empty()) throw ConfigError("study.amplitudes", "study mode needs amplitudes");
}

int SolverConfig::eps_cells() const {
  if (epsilon == 0.0) return 2;
  return PeriodizationParams::from_width(epsilon, period / steps).cells;
}

FixedPointConfig SolverConfig::fixed_point() const {
  FixedPointConfig f;
  f.omega = omega;
  f.max_iterations = max_iterations;
  f.tolerance = tolerance;
  f.sigma = sigma;
  f.eps = PeriodizationParams{eps_cells()};
  f.anderson = anderson;
  f.anderson_depth = anderson_depth;
  f.integration.step.tolerance = step_tolerance;
  f.integration.step.max_iterations = step_max_iterations;
  f.integration.energy_ceiling = energy_ceiling;
  return f;
}

DiscreteProblem SolverConfig::problem() const { return problem(n); }

DiscreteProblem SolverConfig::problem(int size) const {
  const int kp = plate_kmax != 0 ? plate_kmax : std::max(1, (size / 2 + 1) / 2);
  const int jf = fluid_jmax != 0 || fluid_mmax != 0 ? fluid_jmax : kp;
  const int mf = fluid_mmax != 0 ? fluid_mmax : std::max(1, kp);

  DiscreteProblem p;
  try {
    p.space = GalerkinSpace::make(size, kp, jf, mf, kappa);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("basis", e.what());
  }

  int kx = kp, mz = 1;
  for (int i = 0; i < p.space.fluid_count(); ++i) {
    const StreamMode& s = p.space.fluid->pool()[i];
    kx = std::max(kx, s.kx);
    mz = std::max(mz, s.m);
  }
  kx = std::max(kx, forcing.max_x_wavenumber());
  int ly = 0;
  for (const auto& f : forcing.fluid) ly = std::max(ly, f.y);

  const int rule_x = even_at_least(std::max(16, 4 * kx + 2));
  const int rule_z = std::max(8, 2 * std::max(mz, ly) + 4);
  if (nx != 0 && nx < 4 * kx + 1)
    throw ConfigError("quadrature.nx", "below the resolution rule 4 * (max wavenumber) + 1 = " +
                                           std::to_string(4 * kx + 1));
  if (nz != 0 && nz < 2 * mz + 4)
    throw ConfigError("quadrature.nz", "below the resolution rule 2 * (max vertical index) + 4 = " +
                                           std::to_string(2 * mz + 4));
  p.grid = ReferenceSlab::make(nx != 0 ? nx : rule_x, nz != 0 ? nz : rule_z);
  p.plate.weights = weights;
  p.plate.mean = mean;
  p.forcing = forcing;
  return p;
}

}  // namespace pfsi
