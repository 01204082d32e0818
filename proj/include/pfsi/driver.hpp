#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "pfsi/config.hpp"
#include "pfsi/periodic_fixed_point.hpp"

namespace pfsi {

struct RunOptions {
  std::optional<RunMode> mode;        // overrides the config
  std::optional<std::string> output;  // overrides output.directory
  std::optional<bool> deterministic;
  std::uint64_t seed = 12345;
};

/// Executes the configured mode, writing artifacts under the output
/// directory. Returns 0 iff every enabled assertion passed.
int run(SolverConfig config, const RunOptions& options, std::ostream& log);

/// JSON summary of a fixed-point search (without the energy report).
nlohmann::json fixed_point_json(const FixedPointResult& r);

/// Randomized invariant suite; prints one line per check.
bool run_selftest(std::uint64_t seed, std::ostream& log);

}  // namespace pfsi
