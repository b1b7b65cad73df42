#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "helmfc/connectivity.hpp"
#include "helmfc/dataset.hpp"
#include "helmfc/lbem.hpp"

namespace helmfc {

/// Which per-subject vector feeds the classifier: flattened LBEM codes of the raw
/// time series, the vectorized connectivity matrix, or both concatenated.
enum class FeaturePath { LbemTimeseries, ConnectivityVector, Both };

FeaturePath parse_feature_path(std::string_view token);
std::string_view to_string(FeaturePath path);

struct FeatureOptions {
  FeaturePath path = FeaturePath::LbemTimeseries;
  int group_width = kDefaultGroupWidth;
  bool fisher_z = true;
  ZeroVariancePolicy zero_variance = ZeroVariancePolicy::Error;
};

Eigen::VectorXd extract_subject_features(const TimeSeriesMatrix& ts, const FeatureOptions& options,
                                         int jobs = 1);

/// One row per subject, in dataset order. Subjects are processed in parallel.
Eigen::MatrixXd extract_features(const Dataset& dataset, const FeatureOptions& options,
                                 int jobs = 0);

}  // namespace helmfc
