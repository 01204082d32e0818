#include "pfsi/system_assembly.hpp"

#include <stdexcept>

namespace pfsi {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// sum_q w_q A(q, :)^T B(q, :)
Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& a, const Eigen::VectorXd& w, const Eigen::MatrixXd& b) {
  return a.transpose() * (w.asDiagonal() * b);
}

// Plate modes of the basis sampled at the slab x nodes; column i is entry i
// (zero columns for fluid entries).
Eigen::MatrixXd plate_modes_on_grid(const InterleavedBasis& basis, const ReferenceSlab& grid) {
  const int n = basis.size();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(grid.nx(), n);
  for (int i = 0; i < n; i += 2) {
    const auto s = basis.plate_part(i).sample(grid.x_nodes);
    y.col(i) = as_vector(s);
  }
  return y;
}

}  // namespace

Eigen::VectorXd ConvectiveOperator::operator()(const Eigen::VectorXd& beta) const {
  const BasisSamples& f = data_->fields;
  const Eigen::VectorXd& w = data_->weights;
  const Eigen::VectorXd u1 = f.u1 * beta, u2 = f.u2 * beta;
  const Eigen::VectorXd u1x = f.u1x * beta, u1y = f.u1y * beta;
  const Eigen::VectorXd u2x = f.u2x * beta, u2y = f.u2y * beta;

  // (u.grad)u
  const Eigen::VectorXd a1 = w.cwiseProduct(u1.cwiseProduct(u1x) + u2.cwiseProduct(u1y));
  const Eigen::VectorXd a2 = w.cwiseProduct(u1.cwiseProduct(u2x) + u2.cwiseProduct(u2y));
  // (u.grad)X_k . u = sum_{a,b} u_a u_b d_a X_k,b
  const Eigen::VectorXd w11 = w.cwiseProduct(u1.cwiseProduct(u1));
  const Eigen::VectorXd w12 = w.cwiseProduct(u1.cwiseProduct(u2));
  const Eigen::VectorXd w22 = w.cwiseProduct(u2.cwiseProduct(u2));

  const Eigen::VectorXd advect = f.u1.transpose() * a1 + f.u2.transpose() * a2;
  const Eigen::VectorXd transport =
      f.u1x.transpose() * w11 + f.u2x.transpose() * w12 + f.u1y.transpose() * w12 + f.u2y.transpose() * w22;
  return 0.5 * (advect - transport);
}

std::shared_ptr<const QuadratureFields> sample_on_quadrature(const InterleavedBasis& basis, const ReferenceSlab& grid,
                                                             const PlateProfile* delta_t) {
  auto data = std::make_shared<QuadratureFields>();
  data->quadrature = basis.quadrature(grid);
  data->fields = basis.evaluate(data->quadrature.x, data->quadrature.y, delta_t);
  data->weights = as_vector(data->quadrature.w);
  return data;
}

Eigen::MatrixXd fluid_gram(const InterleavedBasis& basis, const ReferenceSlab& grid) {
  const auto data = sample_on_quadrature(basis, grid);
  const BasisSamples& f = data->fields;
  return weighted_product(f.u1, data->weights, f.u1) + weighted_product(f.u2, data->weights, f.u2);
}

Eigen::VectorXd plate_force(const InterleavedBasis& basis, const Eigen::VectorXd& b, const ReferenceSlab& grid,
                            const PlateParams& plate) {
  const int n = basis.size();
  if (b.size() != n) throw std::invalid_argument("plate_force: coefficient size mismatch");
  const PlateProfile eta = basis.plate_displacement(std::span<const double>(b.data(), n), plate.mean);
  const auto force = koiter_force(eta, grid, basis.plate_basis().kmax(), plate.weights);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; i += 2) out(i) = force[i / 2];
  return out;
}

AssembledSystem assemble(const InterleavedBasis& basis, const PlateProfile& delta, const PlateProfile& delta_t,
                         const ForcingSpec& forcing, double t, const ReferenceSlab& grid, const PlateParams& plate) {
  if (!(basis.delta() == delta)) throw std::invalid_argument("assemble: basis is bound to a different geometry");
  DeformationMap{delta, delta_t}.validate(basis.kappa());

  const int n = basis.size();
  const auto data = sample_on_quadrature(basis, grid, &delta_t);
  const BasisSamples& f = data->fields;
  const Eigen::VectorXd& w = data->weights;
  const DomainQuadrature& q = data->quadrature;

  AssembledSystem sys;
  sys.time = t;
  sys.fluid_gram = weighted_product(f.u1, w, f.u1) + weighted_product(f.u2, w, f.u2);
  sys.viscous = weighted_product(f.u1x, w, f.u1x) + weighted_product(f.u1y, w, f.u1y) +
                weighted_product(f.u2x, w, f.u2x) + weighted_product(f.u2y, w, f.u2y);
  // basis_motion(k, j) = int d_t X_j . X_k
  sys.basis_motion = weighted_product(f.u1, w, f.rate1) + weighted_product(f.u2, w, f.rate2);

  const Eigen::MatrixXd y = plate_modes_on_grid(basis, grid);
  const Eigen::VectorXd wx = as_vector(grid.x_weights);
  const Eigen::VectorXd rate = as_vector(delta_t.sample(grid.x_nodes));
  sys.mass = sys.fluid_gram + weighted_product(y, wx, y);
  sys.coupling = 0.5 * weighted_product(y, wx.cwiseProduct(rate), y);

  sys.plate_stiffness = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; i += 2)
    sys.plate_stiffness(i, i) = bending_stiffness(basis.plate_basis().wavenumber(basis.family_index(i)), plate.weights);

  sys.load = Eigen::VectorXd::Zero(n);
  if (!forcing.fluid.empty()) {
    Eigen::VectorXd f1(q.size()), f2(q.size());
    for (std::size_t p = 0; p < q.size(); ++p) {
      const auto [a, b] = forcing.fluid_force(t, q.x[p], q.y[p]);
      f1(p) = a * w(p);
      f2(p) = b * w(p);
    }
    sys.load += f.u1.transpose() * f1 + f.u2.transpose() * f2;
  }
  if (!forcing.plate.empty()) {
    Eigen::VectorXd g(grid.nx());
    for (int ix = 0; ix < grid.nx(); ++ix) g(ix) = forcing.plate_load(t, grid.x_nodes[ix]) * wx(ix);
    sys.load += y.transpose() * g;
  }

  sys.convective = ConvectiveOperator(data);
  sys.plate_force = [basis, grid, plate](const Eigen::VectorXd& b) { return plate_force(basis, b, grid, plate); };
  return sys;
}

double energy_of_state(const Eigen::VectorXd& b, const Eigen::VectorXd& beta, const Eigen::MatrixXd& gram,
                       const InterleavedBasis& basis, const ReferenceSlab& grid, const PlateParams& plate) {
  const int n = basis.size();
  if (b.size() != n || beta.size() != n || gram.rows() != n)
    throw std::invalid_argument("energy_of_state: dimension mismatch");
  double plate_kinetic = 0.0;
  for (int i = 0; i < n; i += 2) plate_kinetic += beta(i) * beta(i);
  const PlateProfile eta = basis.plate_displacement(std::span<const double>(b.data(), n), plate.mean);
  return 0.5 * beta.dot(gram * beta) + 0.5 * plate_kinetic + koiter_energy(eta, grid, plate.weights);
}

double energy_of_state(const Eigen::VectorXd& b, const Eigen::VectorXd& beta, const InterleavedBasis& basis,
                       const ReferenceSlab& grid, const PlateParams& plate) {
  return energy_of_state(b, beta, fluid_gram(basis, grid), basis, grid, plate);
}

double skew_symmetry_defect(const InterleavedBasis& basis, const PlateProfile& delta_t, const Eigen::VectorXd& beta,
                            const ReferenceSlab& grid) {
  const int n = basis.size();
  if (beta.size() != n) throw std::invalid_argument("skew_symmetry_defect: dimension mismatch");
  const auto data = sample_on_quadrature(basis, grid);
  const Eigen::VectorXd conv = ConvectiveOperator(data)(beta);

  const Eigen::MatrixXd y = plate_modes_on_grid(basis, grid);
  const Eigen::VectorXd wx = as_vector(grid.x_weights);
  const Eigen::VectorXd rate = as_vector(delta_t.sample(grid.x_nodes));
  const Eigen::MatrixXd coupling = 0.5 * weighted_product(y, wx.cwiseProduct(rate), y);

  const DomainQuadrature& q = data->quadrature;
  const BasisSamples top = basis.evaluate(q.top_x, q.top_y);
  const Eigen::VectorXd t1 = top.u1 * beta, t2 = top.u2 * beta;
  const double flux = 0.5 * (t1.cwiseAbs2() + t2.cwiseAbs2()).dot(wx.cwiseProduct(rate));

  return beta.dot(conv) + beta.dot(coupling * beta) - flux;
}

}  // namespace pfsi
