#pragma once

#include <vector>

namespace pfsi {

/// One trigonometric factor: index k >= 0 means cos(2 pi k s) (k = 0 is the
/// constant 1), k < 0 means sin(2 pi |k| s). Time factors use s = t / T.
double trig_factor(int index, double s);
double trig_factor_derivative(int index, double s);

/// f(t, x, y) contribution A * tau(t) * X(x) * cos(pi l y) along one component.
struct FluidForcingMode {
  int component = 0;  // 0 = horizontal, 1 = vertical
  int time = 0;
  int x = 0;
  int y = 0;  // l >= 0
  double amplitude = 0.0;
};

/// g(t, x) contribution A * tau(t) * X(x).
struct PlateForcingMode {
  int time = 0;
  int x = 0;
  double amplitude = 0.0;
};

/// Time-periodic body force f on the fluid and load g on the plate, as
/// finite trigonometric sums. Integer time indices make both exactly T-periodic.
struct ForcingSpec {
  double period = 1.0;
  std::vector<FluidForcingMode> fluid;
  std::vector<PlateForcingMode> plate;

  bool is_zero() const;
  ForcingSpec scaled(double factor) const;

  /// Fluid force components at physical point (x, y).
  std::pair<double, double> fluid_force(double t, double x, double y) const;
  double plate_load(double t, double x) const;
  /// Highest horizontal wavenumber appearing in either sum.
  int max_x_wavenumber() const;
};

}  // namespace pfsi
