#include "pfsi/plate_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pfsi/common.hpp"

namespace pfsi {

BumpWeight::BumpWeight(PlateProfile psi) : psi_(std::move(psi)) {
  if (std::abs(psi_.mean() - 1.0) > 1e-14) throw std::invalid_argument("BumpWeight: integral must be 1");
}

int dealiased_node_count(const ReferenceSlab& grid, int kmax, int basis_kmax) {
  int n = 4 * std::max(kmax, basis_kmax) + 2;
  n = std::max(n, grid.nx());
  return n + (n % 2);
}

namespace {

std::vector<double> equispaced(int n) {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = static_cast<double>(j) / n;
  return x;
}

}  // namespace

std::pair<double, double> koiter_energy_parts(const PlateProfile& eta, const ReferenceSlab& grid) {
  const int n = dealiased_node_count(grid, eta.kmax());
  const auto x = equispaced(n);
  const auto slope = eta.sample(x, 1);
  const auto curv = eta.sample(x, 2);
  double quartic = 0.0, quadratic = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s2 = slope[j] * slope[j];
    quartic += s2 * s2;
    quadratic += curv[j] * curv[j];
  }
  return {quartic / n, quadratic / n};
}

double koiter_energy(const PlateProfile& eta, const ReferenceSlab& grid, const KoiterWeights& w) {
  const auto [quartic, quadratic] = koiter_energy_parts(eta, grid);
  return w.membrane * quartic + w.bending * quadratic;
}

std::vector<double> koiter_force(const PlateProfile& eta, const ReferenceSlab& grid, int basis_kmax,
                                 const KoiterWeights& w) {
  const int n = dealiased_node_count(grid, eta.kmax(), basis_kmax);
  const auto x = equispaced(n);
  const auto slope = eta.sample(x, 1);
  const auto curv = eta.sample(x, 2);

  // <K', Y> = int a(x) Y_x + b(x) Y_xx with a = 4 m eta_x^3, b = 2 b eta_xx.
  std::vector<double> a(n), b(n);
  for (int j = 0; j < n; ++j) {
    a[j] = 4.0 * w.membrane * slope[j] * slope[j] * slope[j];
    b[j] = 2.0 * w.bending * curv[j];
  }

  std::vector<double> out(2 * static_cast<std::size_t>(basis_kmax), 0.0);
  for (int k = 1; k <= basis_kmax; ++k) {
    const double wk = kTwoPi * k;
    double ac = 0.0, as = 0.0, bc = 0.0, bs = 0.0;
    for (int j = 0; j < n; ++j) {
      const double theta = kTwoPi * static_cast<double>((static_cast<long>(k) * j) % n) / n;
      const double c = std::cos(theta), s = std::sin(theta);
      ac += a[j] * c;
      as += a[j] * s;
      bc += b[j] * c;
      bs += b[j] * s;
    }
    // Y = sqrt2 cos: Y_x = -sqrt2 wk sin, Y_xx = -sqrt2 wk^2 cos.
    // Y = sqrt2 sin: Y_x =  sqrt2 wk cos, Y_xx = -sqrt2 wk^2 sin.
    out[2 * (k - 1)] = std::numbers::sqrt2 * (-wk * as - wk * wk * bc) / n;
    out[2 * (k - 1) + 1] = std::numbers::sqrt2 * (wk * ac - wk * wk * bs) / n;
  }
  return out;
}

double koiter_directional(const PlateProfile& eta, const PlateProfile& xi, const ReferenceSlab& grid,
                          const KoiterWeights& w) {
  const int n = dealiased_node_count(grid, eta.kmax(), xi.kmax());
  const auto x = equispaced(n);
  const auto slope = eta.sample(x, 1);
  const auto curv = eta.sample(x, 2);
  const auto xi_x = xi.sample(x, 1);
  const auto xi_xx = xi.sample(x, 2);
  double sum = 0.0;
  for (int j = 0; j < n; ++j)
    sum += 4.0 * w.membrane * slope[j] * slope[j] * slope[j] * xi_x[j] + 2.0 * w.bending * curv[j] * xi_xx[j];
  return sum / n;
}

double coercivity_gap(const PlateProfile& eta, const ReferenceSlab& grid, const KoiterWeights& w) {
  return koiter_directional(eta, eta, grid, w) - 2.0 * koiter_energy(eta, grid, w);
}

PlateProfile mean_free_project(const PlateProfile& xi, const BumpWeight& psi) {
  PlateProfile out = xi - xi.mean() * psi.profile();
  // The bump has unit mean, so the result is mean-free up to rounding; pin it.
  out.set_mean(0.0);
  return out;
}

}  // namespace pfsi
