// Command-line front end: pfsi_cli --config run.toml [--mode fixpoint] [--out DIR]

#include <iostream>

#include <CLI11.hpp>

#include "pfsi/common.hpp"
#include "pfsi/config.hpp"
#include "pfsi/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-periodic fluid-plate Galerkin solver"};
  std::string config_path, mode, out;
  std::uint64_t seed = 12345;
  std::optional<bool> deterministic;
  app.add_option("--config", config_path, "TOML configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "solve | fixpoint | ladder | study | selftest");
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for the randomized self-test");
  app.add_option("--deterministic", deterministic, "deterministic reductions (true/false)");
  CLI11_PARSE(app, argc, argv);

  try {
    pfsi::SolverConfig cfg = pfsi::load_config(config_path);
    pfsi::RunOptions opt;
    if (!mode.empty()) opt.mode = pfsi::parse_mode(mode);
    if (!out.empty()) opt.output = out;
    opt.deterministic = deterministic;
    opt.seed = seed;
    return pfsi::run(std::move(cfg), opt, std::cout);
  } catch (const pfsi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pfsi::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
