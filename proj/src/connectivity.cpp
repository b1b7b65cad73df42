#include "helmfc/connectivity.hpp"

#include <algorithm>
#include <cmath>

#include "helmfc/error.hpp"
#include "helmfc/kernels.hpp"

namespace helmfc {

ZeroVariancePolicy parse_zero_variance_policy(std::string_view token) {
  if (token == "error") return ZeroVariancePolicy::Error;
  if (token == "as-zero") return ZeroVariancePolicy::AsZero;
  throw Error(ErrorKind::InvalidArgument,
              "zero-variance policy must be 'error' or 'as-zero', got '" + std::string(token) + "'");
}

std::string_view to_string(ZeroVariancePolicy policy) {
  return policy == ZeroVariancePolicy::Error ? "error" : "as-zero";
}

ConnectivityMap correlation_matrix(const TimeSeriesMatrix& ts, ZeroVariancePolicy policy,
                                   int jobs) {
  if (ts.n() < 3)
    throw Error(ErrorKind::InvalidArgument,
                "subject " + ts.subject_id + ": correlation needs at least 3 time points");
  if (!ts.data.allFinite())
    throw Error(ErrorKind::NonFinite, "subject " + ts.subject_id + ": non-finite time series");

  // Columns of `unit` are the centered, unit-norm ROI signals.
  Eigen::MatrixXd unit = ts.data.transpose();
  for (Eigen::Index i = 0; i < unit.cols(); ++i) {
    auto col = unit.col(i);
    const double scale = col.cwiseAbs().maxCoeff();
    col.array() -= col.mean();
    const double norm = col.norm();
    if (norm <= 1e-13 * std::max(scale, 1e-300) * std::sqrt(static_cast<double>(col.size()))) {
      if (policy == ZeroVariancePolicy::Error)
        throw Error(ErrorKind::ZeroVariance, "subject " + ts.subject_id + ": ROI " +
                                                 std::to_string(i + 1) + " has zero variance");
      col.setZero();
    } else {
      col /= norm;
    }
  }
  return {ts.subject_id, kernels::unit_column_gram(unit, jobs), false};
}

ConnectivityMap fisher_z(ConnectivityMap map) {
  if (map.z_transformed)
    throw Error(ErrorKind::InvalidArgument,
                "subject " + map.subject_id + ": map is already Fisher z-transformed");
  auto& mat = map.matrix;
  for (Eigen::Index j = 0; j < mat.cols(); ++j) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      if (i == j) {
        mat(i, j) = 0.0;
      } else {
        mat(i, j) = std::atanh(std::clamp(mat(i, j), -1.0 + kFisherClampEps, 1.0 - kFisherClampEps));
      }
    }
  }
  map.z_transformed = true;
  return map;
}

ConnectivityVector vectorize_upper(const ConnectivityMap& map) {
  const Eigen::Index m = map.matrix.rows();
  if (map.matrix.cols() != m)
    throw Error(ErrorKind::DimensionMismatch, "connectivity matrix is not square");
  Eigen::VectorXd v(upper_triangle_size(m));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) v(k++) = map.matrix(i, j);
  return {map.subject_id, std::move(v)};
}

Eigen::MatrixXd unvectorize_upper(const Eigen::VectorXd& values, Eigen::Index m, double diagonal) {
  if (values.size() != upper_triangle_size(m))
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match M(M-1)/2");
  Eigen::MatrixXd mat(m, m);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    mat(i, i) = diagonal;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      mat(i, j) = values(k);
      mat(j, i) = values(k);
      ++k;
    }
  }
  return mat;
}

}  // namespace helmfc
