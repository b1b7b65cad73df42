#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (used by the library)
// and a serial reference in `kernels::serial` with the same per-element arithmetic, so
// the two agree bitwise for any thread count. Tests and the benchmark compare them.

#include <Eigen/Dense>

#include "helmfc/activation.hpp"

namespace helmfc::kernels {

using CodeMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// `unit_cols` is N×M: column i is ROI i centered and scaled to unit norm (or all zero).
/// Returns the M×M matrix of column dot products, clamped to [-1, 1], diagonal 1.
Eigen::MatrixXd unit_column_gram(const Eigen::MatrixXd& unit_cols, int jobs = 0);

/// LBEM codes for every column of an M×N series: y×N with y = ceil((2M-2)/w).
CodeMatrix lbem_encode_columns(const Eigen::MatrixXd& series, int group_width, int jobs = 0);

/// pre(i, j) = act(pre(i, j) + bias(j)) in place.
void bias_activate(Eigen::MatrixXd& pre, const Eigen::VectorXd& bias, Activation act,
                   int jobs = 0);

namespace serial {

Eigen::MatrixXd unit_column_gram(const Eigen::MatrixXd& unit_cols);
CodeMatrix lbem_encode_columns(const Eigen::MatrixXd& series, int group_width);
void bias_activate(Eigen::MatrixXd& pre, const Eigen::VectorXd& bias, Activation act);

}  // namespace serial

/// Thread count for a `jobs` argument: positive values are taken as-is, 0 means the
/// OpenMP default.
int resolve_jobs(int jobs);

}  // namespace helmfc::kernels
