#include "pfsi/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "pfsi/common.hpp"

namespace pfsi {

double trig_factor(int index, double s) {
  if (index == 0) return 1.0;
  if (index > 0) return std::cos(kTwoPi * index * s);
  return std::sin(kTwoPi * (-index) * s);
}

double trig_factor_derivative(int index, double s) {
  if (index == 0) return 0.0;
  const double w = kTwoPi * std::abs(index);
  if (index > 0) return -w * std::sin(w * s);
  return w * std::cos(w * s);
}

bool ForcingSpec::is_zero() const {
  return std::all_of(fluid.begin(), fluid.end(), [](const auto& m) { return m.amplitude == 0.0; }) &&
         std::all_of(plate.begin(), plate.end(), [](const auto& m) { return m.amplitude == 0.0; });
}

ForcingSpec ForcingSpec::scaled(double factor) const {
  ForcingSpec out = *this;
  for (auto& m : out.fluid) m.amplitude *= factor;
  for (auto& m : out.plate) m.amplitude *= factor;
  return out;
}

std::pair<double, double> ForcingSpec::fluid_force(double t, double x, double y) const {
  double f[2] = {0.0, 0.0};
  for (const auto& m : fluid) {
    if (m.component != 0 && m.component != 1) throw std::invalid_argument("fluid forcing component must be 0 or 1");
    f[m.component] += m.amplitude * trig_factor(m.time, t / period) * trig_factor(m.x, x) * std::cos(kPi * m.y * y);
  }
  return {f[0], f[1]};
}

double ForcingSpec::plate_load(double t, double x) const {
  double g = 0.0;
  for (const auto& m : plate) g += m.amplitude * trig_factor(m.time, t / period) * trig_factor(m.x, x);
  return g;
}

int ForcingSpec::max_x_wavenumber() const {
  int k = 0;
  for (const auto& m : fluid) k = std::max(k, std::abs(m.x));
  for (const auto& m : plate) k = std::max(k, std::abs(m.x));
  return k;
}

}  // namespace pfsi
