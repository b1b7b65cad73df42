#include "helmfc/kernels.hpp"

namespace helmfc::kernels {

namespace {

inline void activate_column(Eigen::MatrixXd& pre, double bias, Activation act, Eigen::Index j) {
  double* col = pre.col(j).data();
  for (Eigen::Index i = 0; i < pre.rows(); ++i) col[i] = activate(act, col[i] + bias);
}

}  // namespace

void bias_activate(Eigen::MatrixXd& pre, const Eigen::VectorXd& bias, Activation act, int jobs) {
  const Eigen::Index cols = pre.cols();
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(jobs))
  for (Eigen::Index j = 0; j < cols; ++j) activate_column(pre, bias(j), act, j);
}

namespace serial {

void bias_activate(Eigen::MatrixXd& pre, const Eigen::VectorXd& bias, Activation act) {
  for (Eigen::Index j = 0; j < pre.cols(); ++j) activate_column(pre, bias(j), act, j);
}

}  // namespace serial
}  // namespace helmfc::kernels
