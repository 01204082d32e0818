#pragma once

#include <deque>

#include <Eigen/Dense>

namespace pfsi {

/// Anderson mixing for a fixed-point problem x = G(x), type II, with a
/// sliding window of past residual differences. Each call takes the current
/// iterate x and G(x) and returns the next iterate.
class AndersonAccelerator {
 public:
  explicit AndersonAccelerator(int depth = 5, double relaxation = 1.0) : depth_(depth), relaxation_(relaxation) {}

  Eigen::VectorXd update(const Eigen::VectorXd& x, const Eigen::VectorXd& gx);
  void reset();

 private:
  int depth_;
  double relaxation_;
  Eigen::VectorXd last_x_, last_f_;
  std::deque<Eigen::VectorXd> dx_, df_;
};

}  // namespace pfsi
