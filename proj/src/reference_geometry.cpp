#include "pfsi/reference_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pfsi/common.hpp"

namespace pfsi {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_unit: need at least one node");
  std::vector<double> nodes(n), weights(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * x * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = weights[n - 1 - i] = 0.5 * w;
  }
  return {nodes, weights};
}

ReferenceSlab ReferenceSlab::make(int nx, int nz) {
  if (nx < 4 || nz < 4) throw std::invalid_argument("ReferenceSlab: need at least 4 nodes per direction");
  if (nx % 2 != 0) throw std::invalid_argument("ReferenceSlab: x node count must be even");
  ReferenceSlab g;
  g.x_nodes.resize(nx);
  g.x_weights.assign(nx, 1.0 / nx);
  for (int i = 0; i < nx; ++i) g.x_nodes[i] = static_cast<double>(i) / nx;
  std::tie(g.z_nodes, g.z_weights) = gauss_legendre_unit(nz);
  return g;
}

double admissibility_norm(const PlateProfile& delta) {
  return delta.sup_norm(std::max(64, 8 * (delta.kmax() + 1)));
}

void DeformationMap::validate(double kappa) const {
  const double s = admissibility_norm(delta);
  if (!(s < kappa))
    throw std::invalid_argument("inadmissible deformation: sup|delta| = " + std::to_string(s) +
                                " >= kappa = " + std::to_string(kappa));
}

std::pair<double, double> push_forward_point(const DeformationMap& map, double x, double z, double kappa) {
  map.validate(kappa);
  if (z < 0.0 || z > 1.0) throw std::invalid_argument("push_forward_point: z outside [0,1]");
  const double xr = x - std::floor(x);
  return {xr, z * (1.0 + map.delta.evaluate(xr))};
}

double integrate_moving_domain(const DeformationMap& map, const ReferenceSlab& grid,
                               std::span<const double> integrand, double kappa) {
  map.validate(kappa);
  if (integrand.size() != grid.size())
    throw std::invalid_argument("integrate_moving_domain: integrand size does not match grid");
  const auto height = map.delta.sample(grid.x_nodes);
  double total = 0.0;
  for (int ix = 0; ix < grid.nx(); ++ix) {
    double column = 0.0;
    for (int iz = 0; iz < grid.nz(); ++iz) column += grid.z_weights[iz] * integrand[grid.index(ix, iz)];
    total += grid.x_weights[ix] * (1.0 + height[ix]) * column;
  }
  return total;
}

BoundaryJacobian boundary_jacobian(const PlateProfile& delta, const ReferenceSlab& grid) {
  const auto slope = delta.sample(grid.x_nodes, 1);
  BoundaryJacobian j;
  j.values.resize(slope.size());
  for (std::size_t i = 0; i < slope.size(); ++i) j.values[i] = std::sqrt(slope[i] * slope[i] + 1.0);
  return j;
}

DomainQuadrature DomainQuadrature::build(const PlateProfile& delta, const ReferenceSlab& grid,
                                         std::span<const double> breaks) {
  const auto height = delta.sample(grid.x_nodes);
  DomainQuadrature q;
  const std::size_t panels = breaks.size() + 1;
  q.x.reserve(grid.nx() * grid.nz() * panels);
  q.y.reserve(q.x.capacity());
  q.w.reserve(q.x.capacity());
  q.column.reserve(q.x.capacity());
  for (int ix = 0; ix < grid.nx(); ++ix) {
    const double top = 1.0 + height[ix];
    double lo = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double hi = (p < breaks.size()) ? breaks[p] : top;
      if (!(hi > lo))
        throw std::invalid_argument("DomainQuadrature: panel break above the deformed top boundary");
      for (int iz = 0; iz < grid.nz(); ++iz) {
        q.x.push_back(grid.x_nodes[ix]);
        q.y.push_back(lo + (hi - lo) * grid.z_nodes[iz]);
        q.w.push_back(grid.x_weights[ix] * (hi - lo) * grid.z_weights[iz]);
        q.column.push_back(ix);
      }
      lo = hi;
    }
    q.top_x.push_back(grid.x_nodes[ix]);
    q.top_y.push_back(top);
    q.top_w.push_back(grid.x_weights[ix]);
  }
  return q;
}

GeometryTrajectory::GeometryTrajectory(double period, std::vector<PlateProfile> values,
                                       std::vector<PlateProfile> rates)
    : period_(period), values_(std::move(values)), rates_(std::move(rates)) {
  if (!(period_ > 0.0)) throw std::invalid_argument("GeometryTrajectory: period must be positive");
  if (values_.size() < 2 || values_.size() != rates_.size())
    throw std::invalid_argument("GeometryTrajectory: need matching value/rate samples (at least 2)");
}

GeometryTrajectory GeometryTrajectory::sample(double period, int steps,
                                              const std::function<DeformationMap(double)>& geometry) {
  std::vector<PlateProfile> v, r;
  v.reserve(steps + 1);
  r.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    auto m = geometry(period * i / steps);
    v.push_back(std::move(m.delta));
    r.push_back(std::move(m.delta_t));
  }
  return GeometryTrajectory(period, std::move(v), std::move(r));
}

GeometryTrajectory GeometryTrajectory::constant(double period, int steps, const PlateProfile& delta) {
  return GeometryTrajectory(period, std::vector<PlateProfile>(steps + 1, delta),
                            std::vector<PlateProfile>(steps + 1, PlateProfile(delta.kmax())));
}

DeformationMap GeometryTrajectory::at(double t) const {
  const int n = steps();
  const double h = dt();
  double s = std::clamp(t / h, 0.0, static_cast<double>(n));
  int i = std::min(static_cast<int>(std::floor(s)), n - 1);
  const double u = s - i;
  const PlateProfile& v0 = values_[i];
  const PlateProfile& v1 = values_[i + 1];
  const PlateProfile& r0 = rates_[i];
  const PlateProfile& r1 = rates_[i + 1];

  if (u == 0.0) return {v0, r0};
  if (u == 1.0) return {v1, r1};

  // Cubic Hermite basis and derivatives on [0,1].
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1;
  const double d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;

  DeformationMap m;
  m.delta = h00 * v0 + (h10 * h) * r0;
  m.delta += h01 * v1;
  m.delta += (h11 * h) * r1;
  m.delta_t = (d00 / h) * v0 + d10 * r0;
  m.delta_t += (d01 / h) * v1;
  m.delta_t += d11 * r1;
  return m;
}

std::pair<double, double> reynolds_transport_check(const GeometryTrajectory& path, const SpaceTimeField& g,
                                                   double t, double dt, const ReferenceSlab& grid,
                                                   double kappa) {
  if (t - dt < 0.0 || t + dt > path.period())
    throw std::invalid_argument("reynolds_transport_check: t +- dt outside [0, T]");

  auto volume_integral = [&](double time, const std::function<double(double, double, double)>& f) {
    const DeformationMap map = path.at(time);
    const auto height = map.delta.sample(grid.x_nodes);
    std::vector<double> samples(grid.size());
    for (int ix = 0; ix < grid.nx(); ++ix)
      for (int iz = 0; iz < grid.nz(); ++iz)
        samples[grid.index(ix, iz)] = f(time, grid.x_nodes[ix], grid.z_nodes[iz] * (1.0 + height[ix]));
    return integrate_moving_domain(map, grid, samples, kappa);
  };

  const double lhs = (volume_integral(t + dt, g.value) - volume_integral(t - dt, g.value)) / (2.0 * dt);

  const DeformationMap map = path.at(t);
  const auto height = map.delta.sample(grid.x_nodes);
  const auto rate = map.delta_t.sample(grid.x_nodes);
  double flux = 0.0;
  for (int ix = 0; ix < grid.nx(); ++ix)
    flux += grid.x_weights[ix] * g.value(t, grid.x_nodes[ix], 1.0 + height[ix]) * rate[ix];
  const double rhs = volume_integral(t, g.time_derivative) + flux;
  return {lhs, rhs};
}

}  // namespace pfsi
