#include "pfsi/plate_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pfsi/common.hpp"

namespace pfsi {

PlateProfile::PlateProfile(int kmax, double mean) : mean_(mean) {
  if (kmax < 0) throw std::invalid_argument("PlateProfile: negative kmax");
  coeffs_.assign(2 * static_cast<std::size_t>(kmax), 0.0);
}

PlateProfile::PlateProfile(double mean, std::vector<double> coefficients)
    : mean_(mean), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() % 2 != 0)
    throw std::invalid_argument("PlateProfile: coefficient list must hold cos/sin pairs");
}

PlateProfile PlateProfile::cosine(int k, double amplitude, int kmax) {
  PlateProfile p(std::max(k, kmax));
  p.set_cos_coeff(k, amplitude);
  return p;
}

PlateProfile PlateProfile::sine(int k, double amplitude, int kmax) {
  PlateProfile p(std::max(k, kmax));
  p.set_sin_coeff(k, amplitude);
  return p;
}

PlateProfile PlateProfile::from_samples(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  if (n == 0) throw std::invalid_argument("PlateProfile::from_samples: no samples");
  const int kmax = n / 2;
  PlateProfile p(kmax);
  double sum = 0.0;
  for (double v : samples) sum += v;
  p.mean_ = sum / n;
  for (int k = 1; k <= kmax; ++k) {
    double c = 0.0, s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double theta = kTwoPi * static_cast<double>((static_cast<long>(k) * j) % n) / n;
      c += samples[j] * std::cos(theta);
      s += samples[j] * std::sin(theta);
    }
    const bool nyquist = (2 * k == n);
    p.set_cos_coeff(k, (nyquist ? 1.0 : 2.0) * c / n);
    p.set_sin_coeff(k, nyquist ? 0.0 : 2.0 * s / n);
  }
  return p;
}

double PlateProfile::cos_coeff(int k) const {
  if (k < 1 || k > kmax()) return 0.0;
  return coeffs_[2 * (k - 1)];
}

double PlateProfile::sin_coeff(int k) const {
  if (k < 1 || k > kmax()) return 0.0;
  return coeffs_[2 * (k - 1) + 1];
}

void PlateProfile::set_cos_coeff(int k, double v) {
  if (k < 1) throw std::invalid_argument("PlateProfile: wavenumber must be >= 1");
  if (k > kmax()) coeffs_.resize(2 * static_cast<std::size_t>(k), 0.0);
  coeffs_[2 * (k - 1)] = v;
}

void PlateProfile::set_sin_coeff(int k, double v) {
  if (k < 1) throw std::invalid_argument("PlateProfile: wavenumber must be >= 1");
  if (k > kmax()) coeffs_.resize(2 * static_cast<std::size_t>(k), 0.0);
  coeffs_[2 * (k - 1) + 1] = v;
}

namespace {

// d/dx of c cos(wx) + s sin(wx) is (w s) cos(wx) + (-w c) sin(wx).
inline void differentiate_pair(double w, int order, double& c, double& s) {
  for (int i = 0; i < order; ++i) {
    const double nc = w * s;
    const double ns = -w * c;
    c = nc;
    s = ns;
  }
}

}  // namespace

double PlateProfile::evaluate(double x, int order) const {
  double value = (order == 0) ? mean_ : 0.0;
  const double theta = kTwoPi * x;
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  double ck = c1, sk = s1;
  for (int k = 1; k <= kmax(); ++k) {
    double a = cos_coeff(k), b = sin_coeff(k);
    differentiate_pair(kTwoPi * k, order, a, b);
    value += a * ck + b * sk;
    const double next_c = ck * c1 - sk * s1;
    const double next_s = sk * c1 + ck * s1;
    ck = next_c;
    sk = next_s;
  }
  return value;
}

std::vector<double> PlateProfile::sample(std::span<const double> x, int order) const {
  std::vector<double> out(x.size());
  if (kmax() == 0) {
    std::fill(out.begin(), out.end(), order == 0 ? mean_ : 0.0);
    return out;
  }
  std::vector<double> a(kmax()), b(kmax());
  for (int k = 1; k <= kmax(); ++k) {
    a[k - 1] = cos_coeff(k);
    b[k - 1] = sin_coeff(k);
    differentiate_pair(kTwoPi * k, order, a[k - 1], b[k - 1]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double theta = kTwoPi * x[i];
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    double ck = c1, sk = s1;
    double value = (order == 0) ? mean_ : 0.0;
    for (int k = 0; k < kmax(); ++k) {
      value += a[k] * ck + b[k] * sk;
      const double next_c = ck * c1 - sk * s1;
      sk = sk * c1 + ck * s1;
      ck = next_c;
    }
    out[i] = value;
  }
  return out;
}

PlateProfile PlateProfile::derivative(int order) const {
  PlateProfile d(kmax(), order == 0 ? mean_ : 0.0);
  for (int k = 1; k <= kmax(); ++k) {
    double a = cos_coeff(k), b = sin_coeff(k);
    differentiate_pair(kTwoPi * k, order, a, b);
    d.set_cos_coeff(k, a);
    d.set_sin_coeff(k, b);
  }
  return d;
}

PlateProfile PlateProfile::antiderivative() const {
  if (mean_ != 0.0)
    throw std::invalid_argument("antiderivative: profile has nonzero mean, no periodic antiderivative");
  // Inverse of differentiate_pair: (c, s) = (w s', -w c')  =>  c' = -s / w, s' = c / w.
  PlateProfile p(kmax());
  for (int k = 1; k <= kmax(); ++k) {
    const double w = kTwoPi * k;
    p.set_cos_coeff(k, -sin_coeff(k) / w);
    p.set_sin_coeff(k, cos_coeff(k) / w);
  }
  return p;
}

PlateProfile PlateProfile::resized(int kmax) const {
  PlateProfile p(kmax, mean_);
  const int kk = std::min(kmax, this->kmax());
  std::copy(coeffs_.begin(), coeffs_.begin() + 2 * kk, p.coeffs_.begin());
  return p;
}

double PlateProfile::sup_norm(int samples) const {
  std::vector<double> x(samples);
  for (int j = 0; j < samples; ++j) x[j] = static_cast<double>(j) / samples;
  double m = 0.0;
  for (double v : sample(x)) m = std::max(m, std::abs(v));
  return m;
}

PlateProfile& PlateProfile::operator+=(const PlateProfile& other) {
  if (other.kmax() > kmax()) coeffs_.resize(other.coeffs_.size(), 0.0);
  mean_ += other.mean_;
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

PlateProfile& PlateProfile::operator-=(const PlateProfile& other) {
  if (other.kmax() > kmax()) coeffs_.resize(other.coeffs_.size(), 0.0);
  mean_ -= other.mean_;
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

PlateProfile& PlateProfile::operator*=(double s) {
  mean_ *= s;
  for (double& c : coeffs_) c *= s;
  return *this;
}

PlateProfile axpy(const PlateProfile& a, double s, const PlateProfile& b) {
  PlateProfile out = a;
  out += s * b;
  return out;
}

}  // namespace pfsi
