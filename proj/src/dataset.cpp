#include "helmfc/dataset.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <omp.h>

#include "helmfc/error.hpp"
#include "helmfc/matrix_io.hpp"

namespace helmfc {

namespace {

std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

AtlasSpec AtlasSpec::parse(std::string_view token) {
  if (token == "CC400") return {"CC400", 392};
  if (token == "CC200") return {"CC200", 200};
  if (token == "AAL") return {"AAL", 116};
  constexpr std::string_view prefix = "custom:";
  if (token.substr(0, prefix.size()) == prefix) {
    auto digits = token.substr(prefix.size());
    int m = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
      throw Error(ErrorKind::InvalidArgument, "bad custom atlas '" + std::string(token) + "'");
    if (m < 2)
      throw Error(ErrorKind::InvalidArgument, "atlas roi_count must be >= 2, got " +
                                                  std::to_string(m));
    return {"custom", m};
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown atlas '" + std::string(token) + "' (expected CC400, CC200, AAL or custom:<M>)");
}

std::string AtlasSpec::token() const {
  if (name == "custom") return "custom:" + std::to_string(roi_count);
  return name;
}

SubjectLabel parse_label(std::string_view token) {
  if (token == "NC") return SubjectLabel::NC;
  if (token == "ADHD-C") return SubjectLabel::AdhdCombined;
  if (token == "ADHD-H") return SubjectLabel::AdhdHyperactive;
  if (token == "ADHD-I") return SubjectLabel::AdhdInattentive;
  throw Error(ErrorKind::UnknownLabel, "unknown label '" + std::string(token) + "'");
}

std::string_view to_string(SubjectLabel label) {
  switch (label) {
    case SubjectLabel::NC: return "NC";
    case SubjectLabel::AdhdCombined: return "ADHD-C";
    case SubjectLabel::AdhdHyperactive: return "ADHD-H";
    case SubjectLabel::AdhdInattentive: return "ADHD-I";
  }
  return "?";
}

std::string_view to_string(BinaryLabel label) {
  return label == BinaryLabel::NC ? "NC" : "ADHD";
}

std::vector<int> Dataset::binary_labels() const {
  std::vector<int> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) out.push_back(static_cast<int>(collapse(s.record.label)));
  return out;
}

std::vector<SubjectRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open manifest " + path.string());
  const auto base = path.parent_path();

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::string> ids;
  std::vector<SubjectRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = trim_copy(line);
    if (text.empty()) continue;
    if (!header_seen) {
      if (text != kManifestHeader)
        throw Error(ErrorKind::Parse, path.string() + ": expected header '" +
                                          std::string(kManifestHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim_copy(field));
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) +
                                        ": malformed row '" + text + "'");
    }
    SubjectRecord rec;
    rec.subject_id = fields[0];
    std::filesystem::path p = fields[1];
    rec.path = p.is_absolute() ? p : base / p;
    try {
      rec.label = parse_label(fields[2]);
    } catch (const Error& e) {
      throw Error(ErrorKind::UnknownLabel,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!ids.insert(rec.subject_id).second)
      throw Error(ErrorKind::DuplicateId, path.string() + ":" + std::to_string(line_no) +
                                              ": duplicate subject_id '" + rec.subject_id + "'");
    records.push_back(std::move(rec));
  }
  if (!header_seen) throw Error(ErrorKind::Parse, path.string() + ": empty manifest");
  return records;
}

void write_manifest(const std::filesystem::path& path, const std::vector<SubjectRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << kManifestHeader << '\n';
  const auto base = path.parent_path();
  for (const auto& r : records) {
    auto rel = r.path.lexically_relative(base);
    out << r.subject_id << ',' << (rel.empty() ? r.path : rel).generic_string() << ','
        << to_string(r.label) << '\n';
  }
}

TimeSeriesMatrix load_timeseries(const SubjectRecord& record, const AtlasSpec& atlas) {
  TimeSeriesMatrix ts{record.subject_id, read_delimited_matrix(record.path)};
  if (ts.m() != atlas.roi_count) {
    std::ostringstream os;
    os << "subject " << record.subject_id << ": " << ts.m() << " ROI rows, atlas "
       << atlas.token() << " expects " << atlas.roi_count;
    throw Error(ErrorKind::AtlasMismatch, os.str());
  }
  for (Eigen::Index j = 0; j < ts.n(); ++j) {
    for (Eigen::Index i = 0; i < ts.m(); ++i) {
      if (!std::isfinite(ts.data(i, j))) {
        std::ostringstream os;
        os << "subject " << record.subject_id << ": non-finite value at ROI " << i + 1
           << ", time point " << j + 1;
        throw Error(ErrorKind::NonFinite, os.str());
      }
    }
  }
  return ts;
}

TimeSeriesMatrix equalize_timepoints(TimeSeriesMatrix subject, Eigen::Index target_n) {
  if (target_n < 1) throw Error(ErrorKind::InvalidArgument, "target_n must be positive");
  if (subject.n() < target_n) {
    std::ostringstream os;
    os << "subject " << subject.subject_id << ": " << subject.n()
       << " time points, need at least " << target_n;
    throw Error(ErrorKind::TooShort, os.str());
  }
  if (subject.n() > target_n) {
    Eigen::MatrixXd tail = subject.data.rightCols(target_n);
    subject.data = std::move(tail);
  }
  return subject;
}

std::vector<TimeSeriesMatrix> equalize_timepoints(std::vector<TimeSeriesMatrix> subjects,
                                                  Eigen::Index target_n) {
  for (auto& s : subjects) s = equalize_timepoints(std::move(s), target_n);
  return subjects;
}

Dataset ingest(const std::filesystem::path& manifest, const IngestOptions& options) {
  auto records = load_manifest(manifest);
  const auto count = static_cast<std::ptrdiff_t>(records.size());
  std::vector<std::optional<TimeSeriesMatrix>> loaded(records.size());
  std::vector<std::exception_ptr> failures(records.size());

#pragma omp parallel for schedule(dynamic) num_threads(options.jobs > 0 ? options.jobs : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      loaded[i] = equalize_timepoints(load_timeseries(records[i], options.atlas), options.target_n);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }

  Dataset ds;
  ds.atlas = options.atlas;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (loaded[i]) {
      ds.subjects.push_back({records[i], std::move(*loaded[i])});
      continue;
    }
    if (!options.skip_invalid) std::rethrow_exception(failures[i]);
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      ds.skipped.push_back({records[i].subject_id, e.what()});
    }
  }
  return ds;
}

void write_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  std::vector<SubjectRecord> records;
  for (const auto& s : dataset.subjects) {
    auto file = dir / (s.record.subject_id + ".csv");
    write_delimited_matrix(file, s.series.data);
    records.push_back({s.record.subject_id, file, s.record.label});
  }
  write_manifest(dir / "manifest.csv", records);
}

}  // namespace helmfc
