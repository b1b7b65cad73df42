#include "helmfc/features.hpp"

#include <exception>

#include "helmfc/error.hpp"
#include "helmfc/kernels.hpp"

namespace helmfc {

FeaturePath parse_feature_path(std::string_view token) {
  if (token == "lbem-timeseries") return FeaturePath::LbemTimeseries;
  if (token == "connectivity-vector") return FeaturePath::ConnectivityVector;
  if (token == "both") return FeaturePath::Both;
  throw Error(ErrorKind::InvalidArgument,
              "feature path must be lbem-timeseries, connectivity-vector or both, got '" +
                  std::string(token) + "'");
}

std::string_view to_string(FeaturePath path) {
  switch (path) {
    case FeaturePath::LbemTimeseries: return "lbem-timeseries";
    case FeaturePath::ConnectivityVector: return "connectivity-vector";
    case FeaturePath::Both: return "both";
  }
  return "?";
}

Eigen::VectorXd extract_subject_features(const TimeSeriesMatrix& ts, const FeatureOptions& options,
                                         int jobs) {
  Eigen::VectorXd lbem, conn;
  if (options.path != FeaturePath::ConnectivityVector)
    lbem = encode_subject(ts, options.group_width, jobs).scaled();
  if (options.path != FeaturePath::LbemTimeseries) {
    auto map = correlation_matrix(ts, options.zero_variance, jobs);
    if (options.fisher_z) map = fisher_z(std::move(map));
    conn = vectorize_upper(map).values;
  }
  Eigen::VectorXd out(lbem.size() + conn.size());
  out << lbem, conn;
  return out;
}

Eigen::MatrixXd extract_features(const Dataset& dataset, const FeatureOptions& options, int jobs) {
  const auto n = static_cast<std::ptrdiff_t>(dataset.size());
  std::vector<Eigen::VectorXd> rows(dataset.size());
  std::vector<std::exception_ptr> errors(dataset.size());
#pragma omp parallel for schedule(dynamic) num_threads(kernels::resolve_jobs(jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      rows[i] = extract_subject_features(dataset.subjects[i].series, options, 1);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (rows.empty()) return {};

  Eigen::MatrixXd out(n, rows.front().size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (rows[i].size() != out.cols())
      throw Error(ErrorKind::DimensionMismatch,
                  "subject " + dataset.subjects[i].record.subject_id +
                      ": feature length differs from the first subject (unequal time points?)");
    out.row(i) = rows[i].transpose();
  }
  return out;
}

}  // namespace helmfc
