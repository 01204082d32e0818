#pragma once

#include <vector>

#include "pfsi/common.hpp"
#include "pfsi/plate_profile.hpp"
#include "pfsi/reference_geometry.hpp"

namespace pfsi {

/// Scalar weights of the reduced Koiter energy
///   K(eta) = membrane * int (eta_x)^4 + bending * int (eta_xx)^2.
/// Both default to 1.
struct KoiterWeights {
  double membrane = 1.0;
  double bending = 1.0;
};

/// Weight function psi with unit integral over the torus.
class BumpWeight {
 public:
  /// The constant function 1.
  BumpWeight() : psi_(PlateProfile::constant(1.0)) {}
  /// Throws std::invalid_argument unless the integral of psi is 1.
  explicit BumpWeight(PlateProfile psi);

  const PlateProfile& profile() const { return psi_; }

 private:
  PlateProfile psi_;
};

/// Number of equispaced nodes that integrates every product appearing in the
/// energy and its derivative exactly: at least 4 * max(kmax, basis_kmax) + 2,
/// and never fewer than the slab's own x nodes.
int dealiased_node_count(const ReferenceSlab& grid, int kmax, int basis_kmax = 0);

double koiter_energy(const PlateProfile& eta, const ReferenceSlab& grid, const KoiterWeights& w = {});

/// The two parts of the energy separately: {int (eta_x)^4, int (eta_xx)^2}.
std::pair<double, double> koiter_energy_parts(const PlateProfile& eta, const ReferenceSlab& grid);

/// <K'(eta), Y_k> for the normalized plate modes Y = sqrt2 cos(2 pi k x),
/// sqrt2 sin(2 pi k x), k = 1..basis_kmax, in the order [cos1, sin1, cos2, ...].
std::vector<double> koiter_force(const PlateProfile& eta, const ReferenceSlab& grid, int basis_kmax,
                                 const KoiterWeights& w = {});

/// <K'(eta), xi> for an arbitrary direction.
double koiter_directional(const PlateProfile& eta, const PlateProfile& xi, const ReferenceSlab& grid,
                          const KoiterWeights& w = {});

/// <K'(eta), eta> - 2 K(eta) = 2 membrane int (eta_x)^4 >= 0.
double coercivity_gap(const PlateProfile& eta, const ReferenceSlab& grid, const KoiterWeights& w = {});

/// Diagonal of the linear (bending) part of the force on normalized mode k.
inline double bending_stiffness(int k, const KoiterWeights& w = {}) {
  const double wk = kTwoPi * k;
  return 2.0 * w.bending * wk * wk * wk * wk;
}

/// xi - psi * int xi.
PlateProfile mean_free_project(const PlateProfile& xi, const BumpWeight& psi = {});

}  // namespace pfsi
