#include <algorithm>

#include "helmfc/kernels.hpp"

namespace helmfc::kernels {

namespace {

inline double column_dot(const Eigen::MatrixXd& u, Eigen::Index a, Eigen::Index b) {
  const double* pa = u.col(a).data();
  const double* pb = u.col(b).data();
  double s = 0.0;
  for (Eigen::Index t = 0; t < u.rows(); ++t) s += pa[t] * pb[t];
  return std::clamp(s, -1.0, 1.0);
}

inline void fill_row(const Eigen::MatrixXd& u, Eigen::MatrixXd& out, Eigen::Index i) {
  out(i, i) = 1.0;
  for (Eigen::Index j = i + 1; j < u.cols(); ++j) out(i, j) = column_dot(u, i, j);
}

inline void mirror(Eigen::MatrixXd& out) {
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = i + 1; j < out.cols(); ++j) out(j, i) = out(i, j);
}

}  // namespace

Eigen::MatrixXd unit_column_gram(const Eigen::MatrixXd& unit_cols, int jobs) {
  const Eigen::Index m = unit_cols.cols();
  Eigen::MatrixXd out(m, m);
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_jobs(jobs))
  for (Eigen::Index i = 0; i < m; ++i) fill_row(unit_cols, out, i);
  mirror(out);
  return out;
}

namespace serial {

Eigen::MatrixXd unit_column_gram(const Eigen::MatrixXd& unit_cols) {
  const Eigen::Index m = unit_cols.cols();
  Eigen::MatrixXd out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) fill_row(unit_cols, out, i);
  mirror(out);
  return out;
}

}  // namespace serial
}  // namespace helmfc::kernels
