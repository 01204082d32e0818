#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "pfsi/plate_profile.hpp"

namespace pfsi {

/// Tensor quadrature on the reference slab torus x (0,1): equispaced
/// trapezoid nodes in x, Gauss-Legendre nodes in z. Both weight sets sum to 1.
struct ReferenceSlab {
  std::vector<double> x_nodes;
  std::vector<double> x_weights;
  std::vector<double> z_nodes;
  std::vector<double> z_weights;

  static ReferenceSlab make(int nx, int nz);

  int nx() const { return static_cast<int>(x_nodes.size()); }
  int nz() const { return static_cast<int>(z_nodes.size()); }
  std::size_t size() const { return x_nodes.size() * z_nodes.size(); }
  /// Flat index of node (ix, iz); z runs fastest.
  std::size_t index(int ix, int iz) const { return static_cast<std::size_t>(ix) * z_nodes.size() + iz; }
};

/// Gauss-Legendre rule on (0,1) with weights summing to 1.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_unit(int n);

inline constexpr double kDefaultKappa = 0.5;

/// Graph deformation psi(x,z) = (x, z (1 + delta(x))) of the reference slab,
/// together with the displacement rate.
struct DeformationMap {
  PlateProfile delta;
  PlateProfile delta_t;

  /// Throws std::invalid_argument if sup|delta| >= kappa.
  void validate(double kappa) const;
};

/// Oversampled sup-norm used for the admissibility guard.
double admissibility_norm(const PlateProfile& delta);

std::pair<double, double> push_forward_point(const DeformationMap& map, double x, double z,
                                             double kappa = kDefaultKappa);

/// Integral over the deformed domain of an integrand sampled at the
/// reference nodes (flat layout of ReferenceSlab::index), via the pull-back
/// dx = (1 + delta) dx_ref.
double integrate_moving_domain(const DeformationMap& map, const ReferenceSlab& grid,
                               std::span<const double> integrand, double kappa = kDefaultKappa);

struct BoundaryJacobian {
  std::vector<double> values;
};

BoundaryJacobian boundary_jacobian(const PlateProfile& delta, const ReferenceSlab& grid);

/// Quadrature on the deformed domain {0 < y < 1 + delta(x)} in physical
/// coordinates. Each x column is split at fixed heights `breaks` (which
/// must lie below the lowest admissible top) and the slab's z rule is
/// mapped onto every panel, so integrands that are only piecewise smooth
/// across those heights are still integrated spectrally.
struct DomainQuadrature {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
  std::vector<int> column;  // owning x column of each point

  // Top boundary, one entry per x column.
  std::vector<double> top_x;
  std::vector<double> top_y;
  std::vector<double> top_w;

  std::size_t size() const { return x.size(); }
  std::size_t columns() const { return top_x.size(); }

  static DomainQuadrature build(const PlateProfile& delta, const ReferenceSlab& grid,
                                std::span<const double> breaks);
};

/// Scalar field g(t, x, y) on physical space-time with its time derivative.
struct SpaceTimeField {
  std::function<double(double, double, double)> value;
  std::function<double(double, double, double)> time_derivative;
};

/// Uniformly time-sampled geometry with displacement-rate samples. Values
/// between samples are cubic Hermite interpolants of the Fourier
/// coefficients, so the geometry is C^1 in time.
class GeometryTrajectory {
 public:
  GeometryTrajectory() = default;
  GeometryTrajectory(double period, std::vector<PlateProfile> values, std::vector<PlateProfile> rates);

  static GeometryTrajectory sample(double period, int steps,
                                   const std::function<DeformationMap(double)>& geometry);
  static GeometryTrajectory constant(double period, int steps, const PlateProfile& delta);

  double period() const { return period_; }
  int steps() const { return static_cast<int>(values_.size()) - 1; }
  double dt() const { return period_ / steps(); }
  double time(int i) const { return period_ * i / steps(); }

  const std::vector<PlateProfile>& values() const { return values_; }
  const std::vector<PlateProfile>& rates() const { return rates_; }

  DeformationMap at(double t) const;

 private:
  double period_ = 1.0;
  std::vector<PlateProfile> values_;
  std::vector<PlateProfile> rates_;
};

/// Returns (central difference of t -> int_{Omega(t)} g, int dg/dt + int_top g d_t delta).
std::pair<double, double> reynolds_transport_check(const GeometryTrajectory& path,
                                                   const SpaceTimeField& g, double t, double dt,
                                                   const ReferenceSlab& grid,
                                                   double kappa = kDefaultKappa);

}  // namespace pfsi
