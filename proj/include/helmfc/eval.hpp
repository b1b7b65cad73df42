#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "helmfc/dataset.hpp"
#include "helmfc/elm.hpp"
#include "helmfc/helm.hpp"
#include "json.hpp"

namespace helmfc {

// ---------------------------------------------------------------------------
// Folds and metrics

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;  // 0-based fold per subject
  std::uint64_t seed = 0;
  bool stratified = true;
  std::vector<std::string> warnings;

  std::vector<std::size_t> test_indices(int fold) const;
  std::vector<std::size_t> train_indices(int fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

/// Seeded shuffle, then round-robin assignment. With `stratified`, each class is dealt
/// out in turn (continuing the round-robin) so both total and per-class fold counts
/// differ by at most one. Classes smaller than k are pooled and dealt unstratified.
FoldAssignment kfold_split(std::span<const int> labels, int k, std::uint64_t seed,
                           bool stratified);

/// Recall per class; classes with no actual members are absent.
std::vector<std::optional<double>> per_class_accuracy(std::span<const int> predicted,
                                                      std::span<const int> actual, int classes);

/// Per-feature min-max scaling to [0, 1] fitted on training rows. Transformed values
/// are clipped to [0, 1]; constant features map to 0.
struct MinMaxScaler {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  static MinMaxScaler fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

// ---------------------------------------------------------------------------
// Classifier wrapper

enum class ClassifierKind { Elm, Helm };

ClassifierKind parse_classifier_kind(std::string_view token);
std::string_view to_string(ClassifierKind kind);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::Helm;
  /// `helm.elm` configures the ELM (alone or on top of the stack); `helm.layers` and
  /// `helm.autoencoder` only apply to HELM. Seeds are overwritten per fit.
  HelmConfig helm;

  std::string name() const;  // "ELM" or "HELM-<layers>"
};

/// Feature scaler plus trained classifier: everything needed to predict raw features.
struct FittedPipeline {
  MinMaxScaler scaler;
  std::variant<ElmModel, HelmModel> model;

  std::vector<int> predict(const Eigen::MatrixXd& raw_features, int jobs = 1) const;
};

/// Fits scaling and classifier on `train` rows only.
FittedPipeline fit_pipeline(const Eigen::MatrixXd& features, std::span<const int> labels,
                            std::span<const std::size_t> train, const ClassifierConfig& config,
                            std::uint64_t seed, int jobs = 1);

void write_pipeline(std::ostream& out, const FittedPipeline& pipeline);
FittedPipeline read_pipeline(std::istream& in);

// ---------------------------------------------------------------------------
// Cross-validation

struct CvOptions {
  int k = 5;
  int repeats = 30;
  bool stratified = true;
  /// Reuse one split for every repeat (only classifier weights are redrawn).
  bool fixed_folds = false;
  std::uint64_t seed = 0;
  int jobs = 0;
};

std::uint64_t split_seed(const CvOptions& options, int repeat);
std::uint64_t model_seed(std::uint64_t master, int repeat, int fold);

struct FoldEvaluation {
  int repeat = 0;  // 0-based
  int fold = 0;    // 0-based
  std::array<std::optional<double>, kNumClasses> class_accuracy;
  double accuracy = 0.0;
  std::size_t test_size = 0;
};

struct CvReport {
  std::string name;
  int k = 0;
  int repeats = 0;
  std::vector<FoldEvaluation> evaluations;  // ordered by repeat, then fold
  /// k rows; mean over repeats of each (fold, class), absent if never observed.
  std::vector<std::array<std::optional<double>, kNumClasses>> per_fold_class_mean;
  /// Mean of per_fold_class_mean over folds.
  std::array<std::optional<double>, kNumClasses> overall_class_mean;
  double mean_accuracy = 0.0;  // mean of per-evaluation overall accuracy
  std::vector<std::string> warnings;
};

CvReport run_cv(const Eigen::MatrixXd& features, std::span<const int> labels,
                const ClassifierConfig& classifier, const CvOptions& options);

/// Recomputes the aggregate fields from `evaluations`.
void aggregate(CvReport& report);

nlohmann::json to_json(const CvReport& report);

/// Tab-delimited table: rows Fold 1..k and Average, an NC/ADHD column pair per report,
/// values rounded to 4 decimals.
std::string render_table(std::span<const CvReport> reports);

// ---------------------------------------------------------------------------
// Synthetic data

struct SyntheticOptions {
  int per_class = 100;
  int rois = 50;
  int timepoints = 120;
  double effect = 1.0;  // in [0, 1]
  std::uint64_t seed = 0;
};

/// Two-class ROI time series with a planted correlation structure. Every subject's
/// signals are unit-variance Gaussian noise plus a shared block factor on a contiguous
/// set of ROIs. ADHD subjects have the block shifted by effect·block and its loading
/// scaled by (1 + effect); effect = 0 gives identically distributed classes.
Dataset generate_synthetic(const SyntheticOptions& options);

}  // namespace helmfc
