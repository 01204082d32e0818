#include "pfsi/anderson.hpp"

namespace pfsi {

void AndersonAccelerator::reset() {
  last_x_.resize(0);
  last_f_.resize(0);
  dx_.clear();
  df_.clear();
}

Eigen::VectorXd AndersonAccelerator::update(const Eigen::VectorXd& x, const Eigen::VectorXd& gx) {
  const Eigen::VectorXd f = gx - x;
  if (last_f_.size() == f.size()) {
    dx_.push_back(x - last_x_);
    df_.push_back(f - last_f_);
    if (static_cast<int>(df_.size()) > depth_) {
      dx_.pop_front();
      df_.pop_front();
    }
  }
  last_x_ = x;
  last_f_ = f;

  if (depth_ <= 0 || df_.empty()) return x + relaxation_ * f;

  const Eigen::Index m = static_cast<Eigen::Index>(df_.size());
  Eigen::MatrixXd F(f.size(), m), X(f.size(), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    F.col(j) = df_[j];
    X.col(j) = dx_[j];
  }
  const Eigen::VectorXd gamma = F.colPivHouseholderQr().solve(f);
  return x + relaxation_ * f - (X + relaxation_ * F) * gamma;
}

}  // namespace pfsi
