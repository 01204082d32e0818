#pragma once

#include <span>
#include <vector>

namespace pfsi {

/// Periodic field on the unit torus, stored as a mean value plus the
/// real Fourier coefficients of its mean-zero part:
///
///   f(x) = mean + sum_{k=1}^{K} c_k cos(2 pi k x) + s_k sin(2 pi k x).
///
/// Coefficients are interleaved as [c_1, s_1, c_2, s_2, ...].
class PlateProfile {
 public:
  PlateProfile() = default;
  explicit PlateProfile(int kmax, double mean = 0.0);
  PlateProfile(double mean, std::vector<double> coefficients);

  static PlateProfile constant(double value) { return PlateProfile(0, value); }
  static PlateProfile cosine(int k, double amplitude, int kmax = 0);
  static PlateProfile sine(int k, double amplitude, int kmax = 0);

  /// Trigonometric interpolant of equispaced samples at x_j = j / N.
  /// For even N the Nyquist term is carried as a cosine coefficient.
  static PlateProfile from_samples(std::span<const double> samples);

  int kmax() const { return static_cast<int>(coeffs_.size() / 2); }
  double mean() const { return mean_; }
  void set_mean(double m) { mean_ = m; }

  double cos_coeff(int k) const;
  double sin_coeff(int k) const;
  void set_cos_coeff(int k, double v);
  void set_sin_coeff(int k, double v);
  const std::vector<double>& coefficients() const { return coeffs_; }

  /// The mean-zero part as a profile (mean set to 0).
  PlateProfile fluctuation() const { return PlateProfile(0.0, coeffs_); }

  /// Value of the order-th x-derivative at x. order = 0 is the value itself.
  double evaluate(double x, int order = 0) const;
  std::vector<double> sample(std::span<const double> x, int order = 0) const;

  PlateProfile derivative(int order = 1) const;
  /// Unique mean-zero periodic antiderivative. Throws if mean != 0.
  PlateProfile antiderivative() const;

  /// Returns a copy padded or truncated to kmax modes.
  PlateProfile resized(int kmax) const;

  /// Max |f| over equispaced samples with the given count.
  double sup_norm(int samples) const;

  PlateProfile& operator+=(const PlateProfile& other);
  PlateProfile& operator-=(const PlateProfile& other);
  PlateProfile& operator*=(double s);

  friend PlateProfile operator+(PlateProfile a, const PlateProfile& b) { return a += b; }
  friend PlateProfile operator-(PlateProfile a, const PlateProfile& b) { return a -= b; }
  friend PlateProfile operator*(double s, PlateProfile a) { return a *= s; }
  friend PlateProfile operator*(PlateProfile a, double s) { return a *= s; }

  bool operator==(const PlateProfile&) const = default;

 private:
  double mean_ = 0.0;
  std::vector<double> coeffs_;
};

/// a + s * b, coefficient-wise.
PlateProfile axpy(const PlateProfile& a, double s, const PlateProfile& b);

}  // namespace pfsi
