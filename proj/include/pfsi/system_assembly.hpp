#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "pfsi/forcing.hpp"
#include "pfsi/galerkin_basis.hpp"
#include "pfsi/plate_model.hpp"
#include "pfsi/reference_geometry.hpp"

namespace pfsi {

/// Plate data that is not part of the geometry: energy weights and the
/// conserved mean displacement m (carried by m * psi with psi = 1).
struct PlateParams {
  KoiterWeights weights;
  double mean = 0.0;
};

/// Basis fields on a domain quadrature plus the weights; everything the
/// matrix-free convective evaluation needs.
struct QuadratureFields {
  DomainQuadrature quadrature;
  BasisSamples fields;
  Eigen::VectorXd weights;
};

/// Skew-symmetric convective term
///   c_k(beta) = 1/2 int (u.grad)u . X_k - 1/2 int (u.grad)X_k . u,  u = sum beta_j X_j,
/// evaluated without forming the rank-3 tensor.
class ConvectiveOperator {
 public:
  explicit ConvectiveOperator(std::shared_ptr<const QuadratureFields> data) : data_(std::move(data)) {}
  Eigen::VectorXd operator()(const Eigen::VectorXd& beta) const;

 private:
  std::shared_ptr<const QuadratureFields> data_;
};

/// All terms of the Galerkin system at one time:
///   mass beta' + (basis_motion + viscous + coupling) beta + convective(beta)
///     + plate_force(b) = load,     b' = beta.
struct AssembledSystem {
  double time = 0.0;
  Eigen::MatrixXd mass;           // fluid Gram + plate Gram
  Eigen::MatrixXd fluid_gram;     // fluid part of the mass matrix
  Eigen::MatrixXd basis_motion;   // int d_t X_j . X_k
  Eigen::MatrixXd viscous;        // int grad X_j : grad X_k
  Eigen::MatrixXd coupling;       // 1/2 int_omega X_j d_t delta X_k
  Eigen::MatrixXd plate_stiffness;  // linear (bending) part of plate_force
  Eigen::VectorXd load;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> convective;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> plate_force;

  int size() const { return static_cast<int>(mass.rows()); }
  Eigen::MatrixXd damping() const { return basis_motion + viscous + coupling; }
};

/// Builds every term at time t. The basis must be bound to `delta`.
AssembledSystem assemble(const InterleavedBasis& basis, const PlateProfile& delta, const PlateProfile& delta_t,
                         const ForcingSpec& forcing, double t, const ReferenceSlab& grid,
                         const PlateParams& plate = {});

/// Samples the basis (and optionally its time derivative) on the domain quadrature.
std::shared_ptr<const QuadratureFields> sample_on_quadrature(const InterleavedBasis& basis, const ReferenceSlab& grid,
                                                             const PlateProfile* delta_t = nullptr);

/// Fluid Gram matrix int X_j . X_k over the bound deformed domain.
Eigen::MatrixXd fluid_gram(const InterleavedBasis& basis, const ReferenceSlab& grid);

/// <K'(eta), X_k> on every entry (zero on fluid entries) for eta = sum b_j X_j + m.
Eigen::VectorXd plate_force(const InterleavedBasis& basis, const Eigen::VectorXd& b, const ReferenceSlab& grid,
                            const PlateParams& plate = {});

/// Discrete energy 1/2 int |u|^2 + 1/2 int |d_t eta|^2 + K(eta).
double energy_of_state(const Eigen::VectorXd& b, const Eigen::VectorXd& beta, const InterleavedBasis& basis,
                       const ReferenceSlab& grid, const PlateParams& plate = {});

/// Same energy with a precomputed fluid Gram.
double energy_of_state(const Eigen::VectorXd& b, const Eigen::VectorXd& beta, const Eigen::MatrixXd& gram,
                       const InterleavedBasis& basis, const ReferenceSlab& grid, const PlateParams& plate = {});

/// beta . [convective(beta) + coupling beta] - 1/2 int_top |u|^2 d_t delta.
/// The last term is the boundary flux of the kinetic energy on the moving
/// top, sampled from the fluid fields themselves; the defect vanishes when
/// the skew form is exact and the fluid trace equals the plate velocity.
double skew_symmetry_defect(const InterleavedBasis& basis, const PlateProfile& delta_t, const Eigen::VectorXd& beta,
                            const ReferenceSlab& grid);

}  // namespace pfsi
