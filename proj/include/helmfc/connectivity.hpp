#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "helmfc/dataset.hpp"

namespace helmfc {

/// ROI×ROI Pearson correlation matrix, optionally Fisher z-transformed.
struct ConnectivityMap {
  std::string subject_id;
  Eigen::MatrixXd matrix;
  bool z_transformed = false;
};

/// Strict upper triangle, row-major, length M(M-1)/2.
struct ConnectivityVector {
  std::string subject_id;
  Eigen::VectorXd values;
};

enum class ZeroVariancePolicy { Error, AsZero };

ZeroVariancePolicy parse_zero_variance_policy(std::string_view token);
std::string_view to_string(ZeroVariancePolicy policy);

inline constexpr double kFisherClampEps = 1e-7;

constexpr Eigen::Index upper_triangle_size(Eigen::Index m) { return m * (m - 1) / 2; }

ConnectivityMap correlation_matrix(const TimeSeriesMatrix& ts,
                                   ZeroVariancePolicy policy = ZeroVariancePolicy::Error,
                                   int jobs = 0);

/// Off-diagonal r -> atanh(clamp(r, -1+eps, 1-eps)); diagonal -> 0.
ConnectivityMap fisher_z(ConnectivityMap map);

ConnectivityVector vectorize_upper(const ConnectivityMap& map);

/// Inverse of vectorize_upper; the diagonal is filled with `diagonal`.
Eigen::MatrixXd unvectorize_upper(const Eigen::VectorXd& values, Eigen::Index m,
                                  double diagonal);

}  // namespace helmfc
