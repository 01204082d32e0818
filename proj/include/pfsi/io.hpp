#pragma once

#include <string>

#include <json.hpp>

#include "pfsi/diagnostics.hpp"
#include "pfsi/time_integrator.hpp"

namespace pfsi {

/// Shortest-safe decimal form with 17 significant digits.
std::string format_double(double v);

/// CSV with columns t, E, dissipation, power, residual, mean_eta, sup_eta,
/// periodicity_defect. Interval columns are empty on the last row.
std::string series_csv(const EnergyReport& report);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);

struct Checkpoint {
  CoefficientTrajectory trajectory;
  int iteration = 0;
  nlohmann::json meta;  // free-form metadata stored in the sidecar
};

/// `path` gets the binary container, `path + ".json"` the sidecar.
void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace pfsi
