#include <cmath>
#include <exception>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "helmfc/error.hpp"
#include "helmfc/eval.hpp"
#include "helmfc/kernels.hpp"
#include "helmfc/model_io.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

namespace {

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = x.row(rows[i]);
  return out;
}

std::vector<int> select(std::span<const int> v, std::span<const std::size_t> idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string format_cell(const std::optional<double>& v) {
  if (!v) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << *v;
  return os.str();
}

}  // namespace

ClassifierKind parse_classifier_kind(std::string_view token) {
  if (token == "elm") return ClassifierKind::Elm;
  if (token == "helm") return ClassifierKind::Helm;
  throw Error(ErrorKind::InvalidArgument,
              "classifier must be elm or helm, got '" + std::string(token) + "'");
}

std::string_view to_string(ClassifierKind kind) {
  return kind == ClassifierKind::Elm ? "elm" : "helm";
}

std::string ClassifierConfig::name() const {
  if (kind == ClassifierKind::Elm) return "ELM";
  return "HELM-" + std::to_string(helm.layers);
}

std::vector<int> FittedPipeline::predict(const Eigen::MatrixXd& raw_features, int jobs) const {
  const Eigen::MatrixXd x = scaler.transform(raw_features);
  if (const auto* elm = std::get_if<ElmModel>(&model)) return elm_predict(*elm, x, jobs);
  return helm_predict(std::get<HelmModel>(model), x, jobs);
}

FittedPipeline fit_pipeline(const Eigen::MatrixXd& features, std::span<const int> labels,
                            std::span<const std::size_t> train, const ClassifierConfig& config,
                            std::uint64_t seed, int jobs) {
  const Eigen::MatrixXd raw = select_rows(features, train);
  const auto y = select(labels, train);
  FittedPipeline fp{MinMaxScaler::fit(raw), ElmModel{}};
  const Eigen::MatrixXd x = fp.scaler.transform(raw);

  HelmConfig hc = config.helm;
  hc.elm.seed = seed;
  hc.elm.jobs = jobs;
  if (config.kind == ClassifierKind::Elm) {
    fp.model = elm_train(x, y, kNumClasses, hc.elm);
  } else {
    fp.model = helm_train(x, y, kNumClasses, hc);
  }
  return fp;
}

void write_pipeline(std::ostream& out, const FittedPipeline& pipeline) {
  using namespace model_io;
  out << "helmfc-pipeline v1\n";
  const bool is_elm = std::holds_alternative<ElmModel>(pipeline.model);
  write_key(out, "classifier", is_elm ? "elm" : "helm");
  write_vector(out, "scaler_min", pipeline.scaler.min);
  write_vector(out, "scaler_max", pipeline.scaler.max);
  if (is_elm) {
    write_elm(out, std::get<ElmModel>(pipeline.model));
  } else {
    write_helm(out, std::get<HelmModel>(pipeline.model));
  }
  out << "end-pipeline\n";
}

FittedPipeline read_pipeline(std::istream& in) {
  using namespace model_io;
  expect_line(in, "helmfc-pipeline v1");
  const auto kind = parse_classifier_kind(read_key(in, "classifier"));
  FittedPipeline fp{MinMaxScaler{}, ElmModel{}};
  fp.scaler.min = read_vector(in, "scaler_min");
  fp.scaler.max = read_vector(in, "scaler_max");
  if (kind == ClassifierKind::Elm) {
    fp.model = read_elm(in);
  } else {
    fp.model = read_helm(in);
  }
  expect_line(in, "end-pipeline");
  return fp;
}

std::uint64_t split_seed(const CvOptions& options, int repeat) {
  if (options.fixed_folds) return derive_seed(options.seed, {0x5B17ULL});
  return derive_seed(options.seed, {0x5B17ULL, static_cast<std::uint64_t>(repeat)});
}

std::uint64_t model_seed(std::uint64_t master, int repeat, int fold) {
  return derive_seed(master, {0x30DEULL, static_cast<std::uint64_t>(repeat),
                              static_cast<std::uint64_t>(fold)});
}

CvReport run_cv(const Eigen::MatrixXd& features, std::span<const int> labels,
                const ClassifierConfig& classifier, const CvOptions& options) {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw Error(ErrorKind::DimensionMismatch, "feature rows and labels differ in count");
  if (options.repeats < 1) throw Error(ErrorKind::InvalidArgument, "repeats must be >= 1");

  CvReport report;
  report.name = classifier.name();
  report.k = options.k;
  report.repeats = options.repeats;

  std::vector<FoldAssignment> splits;
  for (int r = 0; r < options.repeats; ++r) {
    splits.push_back(kfold_split(labels, options.k, split_seed(options, r), options.stratified));
    for (auto& w : splits.back().warnings)
      if (r == 0 || !options.fixed_folds) report.warnings.push_back(w);
  }

  const int tasks = options.repeats * options.k;
  report.evaluations.resize(tasks);
  std::vector<std::exception_ptr> errors(tasks);
#pragma omp parallel for schedule(dynamic) num_threads(kernels::resolve_jobs(options.jobs))
  for (int task = 0; task < tasks; ++task) {
    const int r = task / options.k;
    const int f = task % options.k;
    try {
      const auto& split = splits[r];
      const auto train = split.train_indices(f);
      const auto test = split.test_indices(f);
      const auto fitted =
          fit_pipeline(features, labels, train, classifier, model_seed(options.seed, r, f), 1);
      const auto predicted = fitted.predict(select_rows(features, test), 1);
      const auto actual = select(labels, test);

      FoldEvaluation ev;
      ev.repeat = r;
      ev.fold = f;
      ev.test_size = test.size();
      const auto acc = per_class_accuracy(predicted, actual, kNumClasses);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < actual.size(); ++i) correct += predicted[i] == actual[i];
      for (int c = 0; c < kNumClasses; ++c) ev.class_accuracy[c] = acc[c];
      ev.accuracy = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
      report.evaluations[task] = ev;
    } catch (...) {
      errors[task] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  aggregate(report);
  return report;
}

void aggregate(CvReport& report) {
  report.per_fold_class_mean.assign(report.k, {});
  for (int f = 0; f < report.k; ++f) {
    for (int c = 0; c < kNumClasses; ++c) {
      double sum = 0.0;
      int count = 0;
      for (const auto& ev : report.evaluations) {
        if (ev.fold == f && ev.class_accuracy[c]) {
          sum += *ev.class_accuracy[c];
          ++count;
        }
      }
      if (count) report.per_fold_class_mean[f][c] = sum / count;
    }
  }
  for (int c = 0; c < kNumClasses; ++c) {
    double sum = 0.0;
    int count = 0;
    for (const auto& row : report.per_fold_class_mean) {
      if (row[c]) {
        sum += *row[c];
        ++count;
      }
    }
    report.overall_class_mean[c] = count ? std::optional<double>(sum / count) : std::nullopt;
  }
  double total = 0.0;
  for (const auto& ev : report.evaluations) total += ev.accuracy;
  report.mean_accuracy =
      report.evaluations.empty() ? 0.0 : total / static_cast<double>(report.evaluations.size());
}

nlohmann::json to_json(const CvReport& report) {
  using nlohmann::json;
  json j;
  j["name"] = report.name;
  j["k"] = report.k;
  j["repeats"] = report.repeats;
  json entries = json::array();
  json fold_acc = json::array();
  for (const auto& ev : report.evaluations) {
    for (int c = 0; c < kNumClasses; ++c) {
      entries.push_back({{"repeat", ev.repeat + 1},
                         {"fold", ev.fold + 1},
                         {"class", to_string(static_cast<BinaryLabel>(c))},
                         {"accuracy", optional_json(ev.class_accuracy[c])}});
    }
    fold_acc.push_back({{"repeat", ev.repeat + 1},
                        {"fold", ev.fold + 1},
                        {"accuracy", ev.accuracy},
                        {"test_size", ev.test_size}});
  }
  j["per_repeat_per_fold"] = std::move(entries);
  j["per_repeat_per_fold_overall"] = std::move(fold_acc);
  json folds = json::array();
  for (std::size_t f = 0; f < report.per_fold_class_mean.size(); ++f) {
    folds.push_back({{"fold", f + 1},
                     {"NC", optional_json(report.per_fold_class_mean[f][0])},
                     {"ADHD", optional_json(report.per_fold_class_mean[f][1])}});
  }
  j["per_fold_class_mean"] = std::move(folds);
  j["overall_class_mean"] = {{"NC", optional_json(report.overall_class_mean[0])},
                             {"ADHD", optional_json(report.overall_class_mean[1])}};
  j["mean_accuracy"] = report.mean_accuracy;
  j["warnings"] = report.warnings;
  return j;
}

std::string render_table(std::span<const CvReport> reports) {
  std::ostringstream os;
  os << "Class";
  for (const auto& r : reports) os << '\t' << r.name << '\t';
  os << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) os << "\tNC\tADHD";
  os << '\n';
  const int k = reports.empty() ? 0 : reports.front().k;
  for (int f = 0; f < k; ++f) {
    os << "Fold " << f + 1;
    for (const auto& r : reports) {
      const auto& row = r.per_fold_class_mean.at(f);
      os << '\t' << format_cell(row[0]) << '\t' << format_cell(row[1]);
    }
    os << '\n';
  }
  os << "Average";
  for (const auto& r : reports)
    os << '\t' << format_cell(r.overall_class_mean[0]) << '\t' << format_cell(r.overall_class_mean[1]);
  os << '\n';
  return os.str();
}

}  // namespace helmfc
