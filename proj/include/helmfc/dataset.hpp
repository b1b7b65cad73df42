#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace helmfc {

/// Brain parcellation: a name and the number of ROIs it yields.
struct AtlasSpec {
  std::string name;
  int roi_count = 0;

  /// Accepts "CC400" (392), "CC200" (200), "AAL" (116) and "custom:<M>".
  static AtlasSpec parse(std::string_view token);
  std::string token() const;
};

enum class SubjectLabel { NC, AdhdCombined, AdhdHyperactive, AdhdInattentive };

SubjectLabel parse_label(std::string_view token);
std::string_view to_string(SubjectLabel label);

/// Diagnostic subtypes collapse to two classes: 0 = NC, 1 = ADHD.
enum class BinaryLabel : int { NC = 0, ADHD = 1 };
inline constexpr int kNumClasses = 2;

inline BinaryLabel collapse(SubjectLabel label) {
  return label == SubjectLabel::NC ? BinaryLabel::NC : BinaryLabel::ADHD;
}
std::string_view to_string(BinaryLabel label);

struct SubjectRecord {
  std::string subject_id;
  std::filesystem::path path;  // resolved against the manifest's directory
  SubjectLabel label = SubjectLabel::NC;
};

/// One subject's ROI signals: rows are ROIs (M), columns are time points (N).
struct TimeSeriesMatrix {
  std::string subject_id;
  Eigen::MatrixXd data;

  Eigen::Index m() const { return data.rows(); }
  Eigen::Index n() const { return data.cols(); }
};

struct Subject {
  SubjectRecord record;
  TimeSeriesMatrix series;
};

struct SkippedSubject {
  std::string subject_id;
  std::string reason;
};

struct Dataset {
  AtlasSpec atlas;
  std::vector<Subject> subjects;
  std::vector<SkippedSubject> skipped;

  std::vector<int> binary_labels() const;
  std::size_t size() const { return subjects.size(); }
};

inline constexpr std::string_view kManifestHeader = "subject_id,path,label";

std::vector<SubjectRecord> load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<SubjectRecord>& records);

TimeSeriesMatrix load_timeseries(const SubjectRecord& record, const AtlasSpec& atlas);

/// Keeps the last `target_n` columns of every subject.
std::vector<TimeSeriesMatrix> equalize_timepoints(std::vector<TimeSeriesMatrix> subjects,
                                                  Eigen::Index target_n);
TimeSeriesMatrix equalize_timepoints(TimeSeriesMatrix subject, Eigen::Index target_n);

struct IngestOptions {
  AtlasSpec atlas = AtlasSpec::parse("CC400");
  Eigen::Index target_n = 230;
  bool skip_invalid = false;
  int jobs = 0;  // 0 = OpenMP default
};

/// load_manifest + load_timeseries + equalize_timepoints for every subject. Fails on the
/// first invalid subject unless `skip_invalid`, in which case failures land in `skipped`.
Dataset ingest(const std::filesystem::path& manifest, const IngestOptions& options);

/// Writes `manifest.csv` plus one `<id>.csv` per subject into `dir`.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset);

}  // namespace helmfc
