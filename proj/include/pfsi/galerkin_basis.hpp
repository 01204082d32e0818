#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pfsi/plate_profile.hpp"
#include "pfsi/reference_geometry.hpp"

namespace pfsi {

/// Velocity value and gradient at one point. Derivatives are with respect to
/// whatever coordinates the producer works in: (x, z) for reference-slab
/// fields, physical (x, y) for fields living on a deformed domain.
struct VectorSample {
  double u1 = 0.0, u2 = 0.0;
  double du1dx = 0.0, du1dy = 0.0;
  double du2dx = 0.0, du2dy = 0.0;

  double divergence() const { return du1dx + du2dy; }
};

/// Normalized mean-zero plate modes sqrt2 cos(2 pi k x), sqrt2 sin(2 pi k x),
/// k = 1..kmax, ordered [cos1, sin1, cos2, sin2, ...]. L2-orthonormal on the torus.
class PlateBasis {
 public:
  explicit PlateBasis(int kmax = 0) : kmax_(kmax) {}

  int kmax() const { return kmax_; }
  int size() const { return 2 * kmax_; }
  int wavenumber(int i) const { return i / 2 + 1; }
  bool is_sine(int i) const { return i % 2 == 1; }

  PlateProfile mode(int i) const;
  /// sum_i c_i Y_i as a profile with the given mean.
  PlateProfile combine(std::span<const double> coefficients, double mean = 0.0) const;
  /// Coefficients of a mean-zero profile against the modes (inverse of combine).
  std::vector<double> project(const PlateProfile& p) const;

 private:
  int kmax_;
};

/// Vertical cutoff sigma(y) of the divergence-free extension: 0 below
/// (1 - kappa)/2, 1 above 1 - kappa, quintic smoothstep in between (C^2).
class CutoffProfile {
 public:
  explicit CutoffProfile(double kappa);

  double kappa() const { return kappa_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  /// sigma and its first two derivatives at height y.
  std::array<double, 3> evaluate(double y) const;

 private:
  double kappa_, lo_, hi_;
};

/// Divergence-free lift of a mean-zero plate datum xi onto the slab
/// torus x (0, 2):
///   F xi = (-phi(x) sigma'(y), xi(x) sigma(y)),  phi' = xi, int phi = 0.
/// Equals (0, xi) on the band 1 - kappa < y < 1 + kappa and vanishes below
/// (1 - kappa)/2, so its trace on any admissible top is xi e_y.
class ExtensionField {
 public:
  ExtensionField(PlateProfile xi, double kappa);

  /// Physical-coordinate value and gradient at (x, y), 0 <= y <= 2.
  VectorSample at(double x, double y) const;
  const CutoffProfile& cutoff() const { return cutoff_; }

 private:
  PlateProfile xi_, xi_x_, phi_;
  CutoffProfile cutoff_;
};

ExtensionField extend_divergence_free(const PlateProfile& xi, double kappa = kDefaultKappa);

/// Stream function e(x) s_m(z) with e in {1, sqrt2 cos(2 pi k x), sqrt2 sin(2 pi k x)}
/// and s_m(z) = sin^2(pi m z).
struct StreamMode {
  int kx = 0;
  bool sine = false;
  int m = 1;
};

/// Interior divergence-free fluid modes on the reference slab, built from the
/// stream functions above and L2(Omega)-orthonormalized (modified Gram-Schmidt
/// with one re-orthogonalization pass, in the pool order).
class FluidInteriorBasis {
 public:
  FluidInteriorBasis(int jmax, int mmax);

  int jmax() const { return jmax_; }
  int mmax() const { return mmax_; }
  int size() const { return static_cast<int>(pool_.size()); }
  const std::vector<StreamMode>& pool() const { return pool_; }
  /// Row i holds the pool coefficients of orthonormal mode i (lower triangular).
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

  /// Exact L2(Omega) Gram matrix of the raw pool velocity fields.
  Eigen::MatrixXd pool_gram() const;

  /// Raw pool field l in reference coordinates (derivatives in x and z).
  VectorSample raw_sample(int l, double x, double z) const;
  /// Orthonormal mode i in reference coordinates.
  VectorSample sample(int i, double x, double z) const;

 private:
  int jmax_, mmax_;
  std::vector<StreamMode> pool_;
  Eigen::MatrixXd coeffs_;
};

/// Geometry at one x location: delta and its derivatives.
struct ColumnGeometry {
  double d = 0.0;    // delta
  double dx = 0.0;   // d_x delta
  double dxx = 0.0;  // d_xx delta
  double dt = 0.0;   // d_t delta
  double dxt = 0.0;  // d_x d_t delta

  static ColumnGeometry at(const PlateProfile& delta, const PlateProfile* delta_t, double x);
};

/// Piola image of a reference sample g taken at (x, z), evaluated at the
/// physical point (x, z (1 + delta)). Gradient returned in physical coordinates.
VectorSample piola_map(const ColumnGeometry& geo, double z, const VectorSample& g);

/// Eulerian time derivative at a fixed physical point of the Piola image of g
/// (g itself held fixed). Only the two velocity components are returned.
std::array<double, 2> piola_rate(const ColumnGeometry& geo, double z, const VectorSample& g);

using ReferenceField = std::function<VectorSample(double x, double z)>;

/// Piola transform J_delta g = (grad psi (det grad psi)^-1 g) o psi^-1 with
/// psi(x,z) = (x, z (1 + delta(x))), evaluable at physical points.
class PiolaField {
 public:
  PiolaField(PlateProfile delta, ReferenceField g, double kappa = kDefaultKappa);
  VectorSample at(double x, double y) const;

 private:
  PlateProfile delta_;
  ReferenceField g_;
};

PiolaField piola_transform(const PlateProfile& delta, ReferenceField g, double kappa = kDefaultKappa);

/// d/dt of t -> J_{delta(t)} g at fixed physical points, as a callable (x, y) -> (v1_t, v2_t).
std::function<std::array<double, 2>(double, double)> piola_time_derivative(const PlateProfile& delta,
                                                                           const PlateProfile& delta_t,
                                                                           ReferenceField g,
                                                                           double kappa = kDefaultKappa);

/// Basis fields sampled at a list of physical points. Column j of each
/// matrix belongs to basis entry j.
struct BasisSamples {
  Eigen::MatrixXd u1, u2, u1x, u1y, u2x, u2y;
  Eigen::MatrixXd rate1, rate2;  // Eulerian time derivatives (empty unless requested)
};

/// Interleaved Galerkin basis bound to one geometry delta. Entries use
/// 0-based indices: even entries 0, 2, 4, ... are plate entries
/// (extension of Y_{i/2}, Y_{i/2}); odd entries are fluid entries
/// (Piola image of Z_{i/2}, 0).
class InterleavedBasis {
 public:
  InterleavedBasis(int n, std::shared_ptr<const FluidInteriorBasis> fluid, PlateBasis plate, double kappa,
                   PlateProfile delta);

  int size() const { return n_; }
  bool is_plate(int i) const { return i % 2 == 0; }
  int family_index(int i) const { return i / 2; }
  double kappa() const { return cutoff_.kappa(); }
  const PlateProfile& delta() const { return delta_; }
  const PlateBasis& plate_basis() const { return plate_; }
  const FluidInteriorBasis& fluid_basis() const { return *fluid_; }
  const CutoffProfile& cutoff() const { return cutoff_; }

  /// Heights at which the fluid fields are only piecewise smooth.
  std::array<double, 2> panel_breaks() const { return {cutoff_.lower(), cutoff_.upper()}; }

  /// Plate part X_i (zero profile for fluid entries).
  PlateProfile plate_part(int i) const;
  /// Plate displacement sum_i b_i X_i + mean.
  PlateProfile plate_displacement(std::span<const double> b, double mean) const;

  /// Fluid part at a physical point (x, y) of the deformed domain.
  VectorSample fluid_part(int i, double x, double y) const;
  /// Eulerian time derivative of the fluid part given d_t delta. Zero for plate entries.
  std::array<double, 2> fluid_rate(int i, const PlateProfile& delta_t, double x, double y) const;

  /// Bulk evaluation at physical points (x[q], y[q]). Rates are computed when delta_t is given.
  BasisSamples evaluate(std::span<const double> x, std::span<const double> y,
                        const PlateProfile* delta_t = nullptr) const;

  /// Domain quadrature for the bound geometry, split at panel_breaks().
  DomainQuadrature quadrature(const ReferenceSlab& grid) const;

 private:
  int n_;
  std::shared_ptr<const FluidInteriorBasis> fluid_;
  PlateBasis plate_;
  CutoffProfile cutoff_;
  PlateProfile delta_;
  PlateProfile delta_x_, delta_xx_;
};

/// Mode pools shared by every geometry: normalized plate modes and the
/// orthonormalized fluid interior modes.
struct GalerkinSpace {
  int n = 2;
  double kappa = kDefaultKappa;
  PlateBasis plate;
  std::shared_ptr<const FluidInteriorBasis> fluid;

  /// Throws std::invalid_argument when n is odd or exceeds the mode pools.
  static GalerkinSpace make(int n, int plate_kmax, int fluid_jmax, int fluid_mmax, double kappa = kDefaultKappa);

  int plate_count() const { return n / 2; }
  int fluid_count() const { return n / 2; }
};

InterleavedBasis build_interleaved_basis(const GalerkinSpace& space, const PlateProfile& delta);

}  // namespace pfsi
