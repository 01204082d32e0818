#include "pfsi/galerkin_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <limits>
#include <tuple>

#include "pfsi/common.hpp"

namespace pfsi {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// e(x), e'(x), e''(x) for the horizontal factor of a stream mode.
std::array<double, 3> horizontal_factor(int kx, bool sine, double x) {
  if (kx == 0) return {1.0, 0.0, 0.0};
  const double w = kTwoPi * kx;
  const double c = std::cos(w * x), s = std::sin(w * x);
  if (sine) return {kSqrt2 * s, kSqrt2 * w * c, -kSqrt2 * w * w * s};
  return {kSqrt2 * c, -kSqrt2 * w * s, -kSqrt2 * w * w * c};
}

// s(z) = sin^2(pi m z), s'(z), s''(z).
std::array<double, 3> vertical_factor(int m, double z) {
  const double a = kPi * m * z;
  const double s = std::sin(a);
  return {s * s, kPi * m * std::sin(2.0 * a), 2.0 * kPi * kPi * m * m * std::cos(2.0 * a)};
}

VectorSample stream_velocity(const std::array<double, 3>& e, const std::array<double, 3>& s) {
  VectorSample g;
  g.u1 = -e[0] * s[1];
  g.u2 = e[1] * s[0];
  g.du1dx = -e[1] * s[1];
  g.du1dy = -e[0] * s[2];
  g.du2dx = e[2] * s[0];
  g.du2dy = e[1] * s[1];
  return g;
}

void accumulate(VectorSample& acc, double c, const VectorSample& g) {
  acc.u1 += c * g.u1;
  acc.u2 += c * g.u2;
  acc.du1dx += c * g.du1dx;
  acc.du1dy += c * g.du1dy;
  acc.du2dx += c * g.du2dx;
  acc.du2dy += c * g.du2dy;
}

// Plate mode value, slope and mean-zero antiderivative at x.
struct PlateModeValues {
  double xi, xi_x, phi;
};

PlateModeValues plate_mode_values(int k, bool sine, double x) {
  const double w = kTwoPi * k;
  const double c = std::cos(w * x), s = std::sin(w * x);
  if (sine) return {kSqrt2 * s, kSqrt2 * w * c, -kSqrt2 * c / w};
  return {kSqrt2 * c, -kSqrt2 * w * s, kSqrt2 * s / w};
}

VectorSample extension_sample(const PlateModeValues& v, const std::array<double, 3>& sigma) {
  VectorSample f;
  f.u1 = -v.phi * sigma[1];
  f.u2 = v.xi * sigma[0];
  f.du1dx = -v.xi * sigma[1];
  f.du1dy = -v.phi * sigma[2];
  f.du2dx = v.xi_x * sigma[0];
  f.du2dy = v.xi * sigma[1];
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------

PlateProfile PlateBasis::mode(int i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("PlateBasis::mode");
  const int k = wavenumber(i);
  return is_sine(i) ? PlateProfile::sine(k, kSqrt2, kmax_) : PlateProfile::cosine(k, kSqrt2, kmax_);
}

PlateProfile PlateBasis::combine(std::span<const double> coefficients, double mean) const {
  if (static_cast<int>(coefficients.size()) > size()) throw std::invalid_argument("PlateBasis::combine: too many coefficients");
  PlateProfile p(kmax_, mean);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const int k = wavenumber(static_cast<int>(i));
    if (is_sine(static_cast<int>(i)))
      p.set_sin_coeff(k, kSqrt2 * coefficients[i]);
    else
      p.set_cos_coeff(k, kSqrt2 * coefficients[i]);
  }
  return p;
}

std::vector<double> PlateBasis::project(const PlateProfile& p) const {
  std::vector<double> c(size());
  for (int i = 0; i < size(); ++i) {
    const int k = wavenumber(i);
    c[i] = (is_sine(i) ? p.sin_coeff(k) : p.cos_coeff(k)) / kSqrt2;
  }
  return c;
}

// ---------------------------------------------------------------------------

CutoffProfile::CutoffProfile(double kappa) : kappa_(kappa), lo_(0.5 * (1.0 - kappa)), hi_(1.0 - kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("CutoffProfile: kappa must lie in (0,1)");
}

std::array<double, 3> CutoffProfile::evaluate(double y) const {
  if (y <= lo_) return {0.0, 0.0, 0.0};
  if (y >= hi_) return {1.0, 0.0, 0.0};
  const double len = hi_ - lo_;
  const double t = (y - lo_) / len;
  const double u = 1.0 - t;
  return {t * t * t * (10.0 - 15.0 * t + 6.0 * t * t), 30.0 * t * t * u * u / len,
          60.0 * t * u * (1.0 - 2.0 * t) / (len * len)};
}

ExtensionField::ExtensionField(PlateProfile xi, double kappa)
    : xi_(std::move(xi)), cutoff_(kappa) {
  if (std::abs(xi_.mean()) > 1e-13)
    throw std::invalid_argument("extend_divergence_free: datum must have zero mean (no periodic antiderivative)");
  xi_.set_mean(0.0);
  xi_x_ = xi_.derivative();
  phi_ = xi_.antiderivative();
}

VectorSample ExtensionField::at(double x, double y) const {
  if (y < 0.0 || y > 2.0) throw std::invalid_argument("ExtensionField: y outside the slab (0, 2)");
  const PlateModeValues v{xi_.evaluate(x), xi_x_.evaluate(x), phi_.evaluate(x)};
  return extension_sample(v, cutoff_.evaluate(y));
}

ExtensionField extend_divergence_free(const PlateProfile& xi, double kappa) { return ExtensionField(xi, kappa); }

// ---------------------------------------------------------------------------

FluidInteriorBasis::FluidInteriorBasis(int jmax, int mmax) : jmax_(jmax), mmax_(mmax) {
  if (jmax < 0 || mmax < 1) throw std::invalid_argument("FluidInteriorBasis: need jmax >= 0 and mmax >= 1");
  for (int kx = 0; kx <= jmax; ++kx)
    for (int sine = 0; sine < (kx == 0 ? 1 : 2); ++sine)
      for (int m = 1; m <= mmax; ++m) pool_.push_back({kx, sine == 1, m});
  std::stable_sort(pool_.begin(), pool_.end(), [](const StreamMode& a, const StreamMode& b) {
    return std::make_tuple(a.kx + a.m, a.m, a.kx, a.sine) < std::make_tuple(b.kx + b.m, b.m, b.kx, b.sine);
  });

  const Eigen::MatrixXd gram = pool_gram();
  const int n = size();
  coeffs_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        const Eigen::VectorXd q = coeffs_.row(j).transpose();
        v -= q.dot(gram * v) * q;
      }
    }
    const double norm = std::sqrt(v.dot(gram * v));
    if (!(norm > 1e-12)) throw SolverError("FluidInteriorBasis: linearly dependent stream modes");
    coeffs_.row(i) = (v / norm).transpose();
  }
}

Eigen::MatrixXd FluidInteriorBasis::pool_gram() const {
  const int n = size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const StreamMode& p = pool_[a];
      const StreamMode& q = pool_[b];
      if (p.kx != q.kx || p.sine != q.sine) continue;
      const double w = kTwoPi * p.kx;
      // int s_m' s_n' = pi^2 m^2 / 2 [m == n];  int s_m s_n = 1/4 + [m == n] / 8.
      const double same = (p.m == q.m) ? 1.0 : 0.0;
      g(a, b) = kPi * kPi * p.m * p.m * 0.5 * same + w * w * (0.25 + 0.125 * same);
    }
  return g;
}

VectorSample FluidInteriorBasis::raw_sample(int l, double x, double z) const {
  const StreamMode& mode = pool_.at(l);
  return stream_velocity(horizontal_factor(mode.kx, mode.sine, x), vertical_factor(mode.m, z));
}

VectorSample FluidInteriorBasis::sample(int i, double x, double z) const {
  VectorSample acc;
  for (int l = 0; l <= i; ++l) {
    const double c = coeffs_(i, l);
    if (c != 0.0) accumulate(acc, c, raw_sample(l, x, z));
  }
  return acc;
}

// ---------------------------------------------------------------------------

ColumnGeometry ColumnGeometry::at(const PlateProfile& delta, const PlateProfile* delta_t, double x) {
  ColumnGeometry g;
  g.d = delta.evaluate(x);
  g.dx = delta.evaluate(x, 1);
  g.dxx = delta.evaluate(x, 2);
  if (delta_t) {
    g.dt = delta_t->evaluate(x);
    g.dxt = delta_t->evaluate(x, 1);
  }
  return g;
}

VectorSample piola_map(const ColumnGeometry& geo, double z, const VectorSample& g) {
  const double D = 1.0 + geo.d;
  const double zx = -z * geo.dx / D;  // d z / d x at fixed physical y
  const double zy = 1.0 / D;
  VectorSample v;
  v.u1 = g.u1 / D;
  v.du1dx = (g.du1dx + g.du1dy * zx) / D - g.u1 * geo.dx / (D * D);
  v.du1dy = g.du1dy * zy / D;
  v.u2 = z * geo.dx * v.u1 + g.u2;
  v.du2dx = zx * geo.dx * v.u1 + z * geo.dxx * v.u1 + z * geo.dx * v.du1dx + g.du2dx + g.du2dy * zx;
  v.du2dy = zy * geo.dx * v.u1 + z * geo.dx * v.du1dy + g.du2dy * zy;
  return v;
}

std::array<double, 2> piola_rate(const ColumnGeometry& geo, double z, const VectorSample& g) {
  const double D = 1.0 + geo.d;
  const double zt = -z * geo.dt / D;  // d z / d t at fixed physical point
  const double v1 = g.u1 / D;
  const double v1t = g.du1dy * zt / D - g.u1 * geo.dt / (D * D);
  const double v2t = zt * geo.dx * v1 + z * geo.dxt * v1 + z * geo.dx * v1t + g.du2dy * zt;
  return {v1t, v2t};
}

PiolaField::PiolaField(PlateProfile delta, ReferenceField g, double kappa)
    : delta_(std::move(delta)), g_(std::move(g)) {
  DeformationMap{delta_, PlateProfile()}.validate(kappa);
}

VectorSample PiolaField::at(double x, double y) const {
  const ColumnGeometry geo = ColumnGeometry::at(delta_, nullptr, x);
  const double z = y / (1.0 + geo.d);
  return piola_map(geo, z, g_(x, z));
}

PiolaField piola_transform(const PlateProfile& delta, ReferenceField g, double kappa) {
  return PiolaField(delta, std::move(g), kappa);
}

std::function<std::array<double, 2>(double, double)> piola_time_derivative(const PlateProfile& delta,
                                                                           const PlateProfile& delta_t,
                                                                           ReferenceField g, double kappa) {
  DeformationMap{delta, delta_t}.validate(kappa);
  return [delta, delta_t, g = std::move(g)](double x, double y) {
    const ColumnGeometry geo = ColumnGeometry::at(delta, &delta_t, x);
    const double z = y / (1.0 + geo.d);
    return piola_rate(geo, z, g(x, z));
  };
}

// ---------------------------------------------------------------------------

InterleavedBasis::InterleavedBasis(int n, std::shared_ptr<const FluidInteriorBasis> fluid, PlateBasis plate,
                                   double kappa, PlateProfile delta)
    : n_(n), fluid_(std::move(fluid)), plate_(plate), cutoff_(kappa), delta_(std::move(delta)) {
  if (n_ < 2 || n_ % 2 != 0) throw std::invalid_argument("InterleavedBasis: n must be even and positive");
  if (n_ / 2 > plate_.size())
    throw std::invalid_argument("InterleavedBasis: n = " + std::to_string(n_) + " exceeds the plate mode pool");
  if (!fluid_ || n_ / 2 > fluid_->size())
    throw std::invalid_argument("InterleavedBasis: n = " + std::to_string(n_) + " exceeds the fluid mode pool");
  DeformationMap{delta_, PlateProfile()}.validate(kappa);
  delta_x_ = delta_.derivative(1);
  delta_xx_ = delta_.derivative(2);
}

PlateProfile InterleavedBasis::plate_part(int i) const {
  if (!is_plate(i)) return PlateProfile(plate_.kmax());
  return plate_.mode(family_index(i));
}

PlateProfile InterleavedBasis::plate_displacement(std::span<const double> b, double mean) const {
  if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("plate_displacement: size mismatch");
  std::vector<double> c(n_ / 2);
  for (int i = 0; i < n_; i += 2) c[i / 2] = b[i];
  return plate_.combine(c, mean);
}

VectorSample InterleavedBasis::fluid_part(int i, double x, double y) const {
  if (is_plate(i)) {
    const int j = family_index(i);
    return extension_sample(plate_mode_values(plate_.wavenumber(j), plate_.is_sine(j), x), cutoff_.evaluate(y));
  }
  const ColumnGeometry geo = ColumnGeometry::at(delta_, nullptr, x);
  const double z = y / (1.0 + geo.d);
  return piola_map(geo, z, fluid_->sample(family_index(i), x, z));
}

std::array<double, 2> InterleavedBasis::fluid_rate(int i, const PlateProfile& delta_t, double x, double y) const {
  if (is_plate(i)) return {0.0, 0.0};
  const ColumnGeometry geo = ColumnGeometry::at(delta_, &delta_t, x);
  const double z = y / (1.0 + geo.d);
  return piola_rate(geo, z, fluid_->sample(family_index(i), x, z));
}

BasisSamples InterleavedBasis::evaluate(std::span<const double> x, std::span<const double> y,
                                        const PlateProfile* delta_t) const {
  if (x.size() != y.size()) throw std::invalid_argument("InterleavedBasis::evaluate: x/y size mismatch");
  const Eigen::Index np = static_cast<Eigen::Index>(x.size());
  BasisSamples s;
  for (Eigen::MatrixXd* m : {&s.u1, &s.u2, &s.u1x, &s.u1y, &s.u2x, &s.u2y}) m->setZero(np, n_);
  if (delta_t) {
    s.rate1.setZero(np, n_);
    s.rate2.setZero(np, n_);
  }

  const int nf = n_ / 2;
  const int np_plate = n_ / 2;
  const Eigen::MatrixXd& C = fluid_->coefficients();
  const auto& pool = fluid_->pool();

  std::vector<std::array<double, 3>> e(nf);
  std::vector<PlateModeValues> plate_vals(np_plate);
  std::vector<std::array<double, 3>> s_m(fluid_->mmax() + 1);
  std::vector<VectorSample> raw(nf);
  ColumnGeometry geo;
  double last_x = std::numeric_limits<double>::quiet_NaN();

  for (Eigen::Index q = 0; q < np; ++q) {
    const double xq = x[q];
    if (xq != last_x) {
      last_x = xq;
      geo.d = delta_.evaluate(xq);
      geo.dx = delta_x_.evaluate(xq);
      geo.dxx = delta_xx_.evaluate(xq);
      if (delta_t) {
        geo.dt = delta_t->evaluate(xq);
        geo.dxt = delta_t->evaluate(xq, 1);
      }
      for (int l = 0; l < nf; ++l) e[l] = horizontal_factor(pool[l].kx, pool[l].sine, xq);
      for (int j = 0; j < np_plate; ++j) plate_vals[j] = plate_mode_values(plate_.wavenumber(j), plate_.is_sine(j), xq);
    }
    const double yq = y[q];
    const double z = yq / (1.0 + geo.d);

    const auto sigma = cutoff_.evaluate(yq);
    for (int j = 0; j < np_plate; ++j) {
      const VectorSample f = extension_sample(plate_vals[j], sigma);
      const Eigen::Index col = 2 * j;
      s.u1(q, col) = f.u1;
      s.u2(q, col) = f.u2;
      s.u1x(q, col) = f.du1dx;
      s.u1y(q, col) = f.du1dy;
      s.u2x(q, col) = f.du2dx;
      s.u2y(q, col) = f.du2dy;
    }

    for (int m = 1; m <= fluid_->mmax(); ++m) s_m[m] = vertical_factor(m, z);
    for (int l = 0; l < nf; ++l) raw[l] = stream_velocity(e[l], s_m[pool[l].m]);
    for (int i = 0; i < nf; ++i) {
      VectorSample g;
      for (int l = 0; l <= i; ++l) accumulate(g, C(i, l), raw[l]);
      const VectorSample v = piola_map(geo, z, g);
      const Eigen::Index col = 2 * i + 1;
      s.u1(q, col) = v.u1;
      s.u2(q, col) = v.u2;
      s.u1x(q, col) = v.du1dx;
      s.u1y(q, col) = v.du1dy;
      s.u2x(q, col) = v.du2dx;
      s.u2y(q, col) = v.du2dy;
      if (delta_t) {
        const auto r = piola_rate(geo, z, g);
        s.rate1(q, col) = r[0];
        s.rate2(q, col) = r[1];
      }
    }
  }
  return s;
}

DomainQuadrature InterleavedBasis::quadrature(const ReferenceSlab& grid) const {
  const auto breaks = panel_breaks();
  return DomainQuadrature::build(delta_, grid, breaks);
}

GalerkinSpace GalerkinSpace::make(int n, int plate_kmax, int fluid_jmax, int fluid_mmax, double kappa) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("GalerkinSpace: n must be even and positive");
  GalerkinSpace s;
  s.n = n;
  s.kappa = kappa;
  s.plate = PlateBasis(plate_kmax);
  s.fluid = std::make_shared<const FluidInteriorBasis>(fluid_jmax, fluid_mmax);
  if (s.plate_count() > s.plate.size())
    throw std::invalid_argument("GalerkinSpace: n/2 = " + std::to_string(n / 2) + " exceeds 2*plate_kmax = " +
                                std::to_string(s.plate.size()));
  if (s.fluid_count() > s.fluid->size())
    throw std::invalid_argument("GalerkinSpace: n/2 = " + std::to_string(n / 2) + " exceeds the fluid pool size " +
                                std::to_string(s.fluid->size()));
  return s;
}

InterleavedBasis build_interleaved_basis(const GalerkinSpace& space, const PlateProfile& delta) {
  return InterleavedBasis(space.n, space.fluid, space.plate, space.kappa, delta);
}

}  // namespace pfsi
