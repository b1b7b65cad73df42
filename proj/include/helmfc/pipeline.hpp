#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "helmfc/dataset.hpp"
#include "helmfc/eval.hpp"
#include "helmfc/features.hpp"
#include "json.hpp"

namespace helmfc {

/// Fully resolved configuration of a run. Serialized as JSON with the sections
/// data, features, classifier, cv plus top-level seed, jobs and output_dir.
struct RunConfig {
  std::filesystem::path manifest = "manifest.csv";
  std::string atlas = "CC400";
  int target_n = 230;
  bool skip_invalid = false;

  FeatureOptions features;
  ClassifierConfig classifier;

  int k = 5;
  int repeats = 30;
  bool stratified = true;
  bool fixed_folds = false;

  std::uint64_t seed = 42;
  int jobs = 0;
  std::filesystem::path output_dir = "helmfc-out";

  CvOptions cv_options() const;
};

nlohmann::json to_json(const RunConfig& config);

/// Starts from defaults and applies every key present in `j`. Unknown keys and
/// out-of-range values throw ErrorKind::Config. Relative paths resolve against
/// `base_dir`.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
void validate(const RunConfig& config);

/// Feature vectors of a dataset, aligned with its subjects.
struct FeatureTable {
  std::vector<SubjectRecord> subjects;
  Eigen::MatrixXd features;
  std::vector<int> labels;
};

/// Dataset directory (manifest.csv + time-series files) without equalization. When
/// `atlas` is empty the ROI count of the first subject defines a custom atlas.
Dataset load_dataset_dir(const std::filesystem::path& dir, const std::string& atlas = {});

/// Feature directory: manifest.csv whose paths point at one-value-per-line vectors.
FeatureTable load_feature_dir(const std::filesystem::path& dir);
void write_feature_dir(const std::filesystem::path& dir, const FeatureTable& table,
                       const std::string& extension = ".vec");

FeatureTable feature_table(const Dataset& dataset, const FeatureOptions& options, int jobs);

/// Report document: {"status", "config", "results": [...], ...}.
nlohmann::json report_document(const RunConfig& config, std::span<const CvReport> reports,
                               const nlohmann::json& extra = nlohmann::json::object());

/// Writes `doc` to `json_path` and the fold-by-class table next to it (.tsv).
void write_report(const std::filesystem::path& json_path, const nlohmann::json& doc,
                  std::span<const CvReport> reports);

struct RunResult {
  CvReport report;
  std::filesystem::path report_json;
  std::filesystem::path report_table;
  std::filesystem::path model_file;
  std::filesystem::path features_dir;
};

/// ingest → features → cross-validation → final model on all subjects. A failing
/// stage throws an Error whose message starts with "stage <name>:" and leaves an
/// INCOMPLETE marker in the output directory.
RunResult run_pipeline(const RunConfig& config);

std::uint64_t final_model_seed(std::uint64_t master);

}  // namespace helmfc
