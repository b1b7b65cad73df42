#include "helmfc/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "helmfc/error.hpp"
#include "helmfc/matrix_io.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

// Reads keys from one JSON object and rejects any key that was not read.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) config_error("'" + name_ + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      config_error("'" + path(key) + "' has the wrong type");
    }
  }

  void read_double_or_inf(const char* key, double& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_string() && (it->get<std::string>() == "inf" || it->get<std::string>() == "infinity")) {
      out = kRidgeOff;
    } else if (it->is_number()) {
      out = it->get<double>();
    } else {
      config_error("'" + path(key) + "' must be a number or \"inf\"");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) config_error("unknown config key '" + path(it.key().c_str()) + "'");
  }

  std::string path(const char* key) const { return name_.empty() ? key : name_ + "." + key; }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json double_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

template <typename F>
auto stage(const char* name, const std::filesystem::path& out_dir, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream marker(out_dir / "INCOMPLETE");
    marker << "stage " << name << ": " << e.what() << '\n';
    throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
  }
}

}  // namespace

CvOptions RunConfig::cv_options() const {
  return {k, repeats, stratified, fixed_folds, seed, jobs};
}

json to_json(const RunConfig& c) {
  const auto& h = c.classifier.helm;
  return {
      {"data",
       {{"manifest", c.manifest.generic_string()},
        {"atlas", c.atlas},
        {"target_n", c.target_n},
        {"skip_invalid", c.skip_invalid}}},
      {"features",
       {{"path", to_string(c.features.path)},
        {"group_width", c.features.group_width},
        {"fisher_z", c.features.fisher_z},
        {"zero_variance", to_string(c.features.zero_variance)}}},
      {"classifier",
       {{"type", to_string(c.classifier.kind)},
        {"layers", h.layers},
        {"hidden_nodes", h.elm.hidden_nodes},
        {"activation", to_string(h.elm.activation)},
        {"ridge_c", double_or_inf(h.elm.ridge_c)},
        {"autoencoder_hidden", h.autoencoder.hidden_nodes},
        {"lambda", h.autoencoder.lambda},
        {"fista_max_iter", h.autoencoder.max_iter},
        {"fista_tol", h.autoencoder.tol}}},
      {"cv",
       {{"k", c.k},
        {"repeats", c.repeats},
        {"stratified", c.stratified},
        {"fixed_folds", c.fixed_folds}}},
      {"seed", c.seed},
      {"jobs", c.jobs},
      {"output_dir", c.output_dir.generic_string()},
  };
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  Section top(j, "");
  auto resolve = [&](std::filesystem::path p) {
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  try {
    if (const json* d = top.child("data")) {
      Section s(*d, "data");
      std::string manifest = c.manifest.string();
      s.read("manifest", manifest);
      c.manifest = resolve(manifest);
      s.read("atlas", c.atlas);
      s.read("target_n", c.target_n);
      s.read("skip_invalid", c.skip_invalid);
      s.finish();
    }
    if (const json* f = top.child("features")) {
      Section s(*f, "features");
      std::string path{to_string(c.features.path)};
      std::string zv{to_string(c.features.zero_variance)};
      s.read("path", path);
      s.read("group_width", c.features.group_width);
      s.read("fisher_z", c.features.fisher_z);
      s.read("zero_variance", zv);
      s.finish();
      c.features.path = parse_feature_path(path);
      c.features.zero_variance = parse_zero_variance_policy(zv);
    }
    if (const json* cl = top.child("classifier")) {
      Section s(*cl, "classifier");
      auto& h = c.classifier.helm;
      std::string type{to_string(c.classifier.kind)};
      std::string act{to_string(h.elm.activation)};
      s.read("type", type);
      s.read("layers", h.layers);
      s.read("hidden_nodes", h.elm.hidden_nodes);
      s.read("activation", act);
      s.read_double_or_inf("ridge_c", h.elm.ridge_c);
      s.read("autoencoder_hidden", h.autoencoder.hidden_nodes);
      s.read("lambda", h.autoencoder.lambda);
      s.read("fista_max_iter", h.autoencoder.max_iter);
      s.read("fista_tol", h.autoencoder.tol);
      s.finish();
      c.classifier.kind = parse_classifier_kind(type);
      h.elm.activation = parse_activation(act);
      h.autoencoder.activation = h.elm.activation;
    }
    if (const json* cv = top.child("cv")) {
      Section s(*cv, "cv");
      s.read("k", c.k);
      s.read("repeats", c.repeats);
      s.read("stratified", c.stratified);
      s.read("fixed_folds", c.fixed_folds);
      s.finish();
    }
    top.read("seed", c.seed);
    top.read("jobs", c.jobs);
    std::string out = c.output_dir.string();
    top.read("output_dir", out);
    c.output_dir = resolve(out);
    top.finish();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(e.what());
  }
  validate(c);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error(path.string() + ": " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

void validate(const RunConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) config_error(std::string("invalid config: ") + what);
  };
  try {
    AtlasSpec::parse(c.atlas);
  } catch (const Error& e) {
    config_error(e.what());
  }
  const auto& h = c.classifier.helm;
  require(c.target_n >= 1, "data.target_n must be >= 1");
  require(c.features.group_width >= 1 && c.features.group_width <= kMaxGroupWidth,
          "features.group_width must be in [1, 16]");
  require(h.layers >= 0, "classifier.layers must be >= 0");
  require(h.elm.hidden_nodes >= 1, "classifier.hidden_nodes must be >= 1");
  require(h.elm.ridge_c > 0.0, "classifier.ridge_c must be positive or \"inf\"");
  require(h.autoencoder.hidden_nodes >= 1, "classifier.autoencoder_hidden must be >= 1");
  require(h.autoencoder.lambda >= 0.0 && std::isfinite(h.autoencoder.lambda),
          "classifier.lambda must be finite and >= 0");
  require(h.autoencoder.max_iter >= 1, "classifier.fista_max_iter must be >= 1");
  require(h.autoencoder.tol > 0.0, "classifier.fista_tol must be > 0");
  require(c.k >= 2, "cv.k must be >= 2");
  require(c.repeats >= 1, "cv.repeats must be >= 1");
  require(c.jobs >= 0, "jobs must be >= 0");
}

Dataset load_dataset_dir(const std::filesystem::path& dir, const std::string& atlas) {
  auto records = load_manifest(dir / "manifest.csv");
  Dataset ds;
  if (!atlas.empty()) {
    ds.atlas = AtlasSpec::parse(atlas);
  } else if (!records.empty()) {
    ds.atlas = AtlasSpec::parse(
        "custom:" + std::to_string(read_delimited_matrix(records.front().path).rows()));
  }
  for (auto& r : records) {
    auto ts = load_timeseries(r, ds.atlas);
    ds.subjects.push_back({std::move(r), std::move(ts)});
  }
  return ds;
}

FeatureTable load_feature_dir(const std::filesystem::path& dir) {
  FeatureTable t;
  t.subjects = load_manifest(dir / "manifest.csv");
  if (t.subjects.empty()) throw Error(ErrorKind::InvalidArgument, "feature manifest is empty");
  std::vector<Eigen::VectorXd> rows;
  for (const auto& r : t.subjects) {
    rows.push_back(read_vector_file(r.path));
    if (rows.back().size() != rows.front().size())
      throw Error(ErrorKind::DimensionMismatch,
                  "subject " + r.subject_id + ": feature length differs from the first subject");
    if (!rows.back().allFinite())
      throw Error(ErrorKind::NonFinite, "subject " + r.subject_id + ": non-finite feature");
    t.labels.push_back(static_cast<int>(collapse(r.label)));
  }
  t.features.resize(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) t.features.row(i) = rows[i].transpose();
  return t;
}

void write_feature_dir(const std::filesystem::path& dir, const FeatureTable& table,
                       const std::string& extension) {
  std::filesystem::create_directories(dir);
  std::vector<SubjectRecord> records;
  for (std::size_t i = 0; i < table.subjects.size(); ++i) {
    const auto& s = table.subjects[i];
    auto file = dir / (s.subject_id + extension);
    write_vector_file(file, Eigen::VectorXd(table.features.row(i).transpose()));
    records.push_back({s.subject_id, file, s.label});
  }
  write_manifest(dir / "manifest.csv", records);
}

FeatureTable feature_table(const Dataset& dataset, const FeatureOptions& options, int jobs) {
  FeatureTable t;
  for (const auto& s : dataset.subjects) t.subjects.push_back(s.record);
  t.features = extract_features(dataset, options, jobs);
  t.labels = dataset.binary_labels();
  return t;
}

json report_document(const RunConfig& config, std::span<const CvReport> reports, const json& extra) {
  json doc;
  doc["status"] = "complete";
  doc["config"] = to_json(config);
  json results = json::array();
  for (const auto& r : reports) results.push_back(to_json(r));
  doc["results"] = std::move(results);
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

void write_report(const std::filesystem::path& json_path, const json& doc,
                  std::span<const CvReport> reports) {
  if (json_path.has_parent_path()) std::filesystem::create_directories(json_path.parent_path());
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + json_path.string());
    out << doc.dump(2) << '\n';
  }
  auto table_path = json_path;
  table_path.replace_extension(".tsv");
  std::ofstream out(table_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + table_path.string());
  out << render_table(reports);
}

std::uint64_t final_model_seed(std::uint64_t master) { return derive_seed(master, {0xF1A1ULL}); }

RunResult run_pipeline(const RunConfig& config) {
  validate(config);
  const auto& out = config.output_dir;
  std::filesystem::create_directories(out);
  std::filesystem::remove(out / "INCOMPLETE");

  auto dataset = stage("ingest", out, [&] {
    auto ds = ingest(config.manifest, {AtlasSpec::parse(config.atlas), config.target_n,
                                       config.skip_invalid, config.jobs});
    if (ds.size() < static_cast<std::size_t>(config.k))
      throw Error(ErrorKind::InvalidArgument, "only " + std::to_string(ds.size()) +
                                                  " valid subjects for k = " + std::to_string(config.k));
    return ds;
  });

  RunResult result;
  result.features_dir = out / "features";
  auto table = stage("features", out, [&] {
    auto t = feature_table(dataset, config.features, config.jobs);
    write_feature_dir(result.features_dir, t);
    return t;
  });

  result.report = stage("evaluate", out, [&] {
    return run_cv(table.features, table.labels, config.classifier, config.cv_options());
  });

  result.model_file = out / "model.txt";
  stage("train", out, [&] {
    std::vector<std::size_t> all(table.labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    auto fitted = fit_pipeline(table.features, table.labels, all, config.classifier,
                               final_model_seed(config.seed), config.jobs);
    std::ofstream mf(result.model_file, std::ios::binary);
    if (!mf) throw Error(ErrorKind::Io, "cannot write " + result.model_file.string());
    write_pipeline(mf, fitted);
    return 0;
  });

  json skipped = json::array();
  for (const auto& s : dataset.skipped) skipped.push_back({{"subject_id", s.subject_id}, {"reason", s.reason}});
  std::size_t adhd = 0;
  for (int l : table.labels) adhd += l == 1;
  json extra = {{"dataset",
                 {{"atlas", dataset.atlas.token()},
                  {"subjects", dataset.size()},
                  {"nc", dataset.size() - adhd},
                  {"adhd", adhd},
                  {"skipped", skipped}}},
                {"feature_dim", table.features.cols()},
                {"model_file", "model.txt"}};
  result.report_json = out / "report.json";
  result.report_table = out / "report.tsv";
  const std::vector<CvReport> reports{result.report};
  stage("report", out, [&] {
    write_report(result.report_json, report_document(config, reports, extra), reports);
    return 0;
  });
  return result;
}

}  // namespace helmfc
