// helmfc command-line entry point. Each stage is runnable on its own; `run` chains
// them from a single config file.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "helmfc/connectivity.hpp"
#include "helmfc/dataset.hpp"
#include "helmfc/error.hpp"
#include "helmfc/eval.hpp"
#include "helmfc/features.hpp"
#include "helmfc/lbem.hpp"
#include "helmfc/matrix_io.hpp"
#include "helmfc/pipeline.hpp"

namespace {

using namespace helmfc;

void log(const std::string& msg) { std::cerr << "helmfc: " << msg << '\n'; }

std::vector<int> parse_layer_list(const std::string& text) {
  std::vector<int> layers;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      layers.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad --layers value '" + text + "'");
    }
  }
  if (layers.empty()) throw Error(ErrorKind::InvalidArgument, "--layers is empty");
  return layers;
}

struct Overrides {
  std::optional<std::string> atlas;
  std::optional<int> target_n;
  std::optional<std::string> feature_path;
  std::optional<int> group_width;
  std::optional<bool> fisher_z;
  std::optional<std::string> zero_variance;
  std::optional<std::string> classifier;
  std::optional<int> hidden;
  std::optional<int> ae_hidden;
  std::optional<double> lambda;
  std::optional<std::string> ridge_c;
  std::optional<std::string> activation;
  std::optional<int> fista_max_iter;
  std::optional<int> k;
  std::optional<int> repeats;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool fixed_folds = false;
  bool no_stratify = false;
  bool skip_invalid = false;

  void add_to(CLI::App* app, bool classifier_flag = true) {
    app->add_option("--atlas", atlas, "CC400 | CC200 | AAL | custom:<M>");
    app->add_option("--target-n", target_n, "time points kept per subject");
    app->add_option("--feature-path", feature_path, "lbem-timeseries | connectivity-vector | both");
    app->add_option("--group-width", group_width, "LBEM bits per code");
    app->add_option("--fisher-z", fisher_z, "Fisher z-transform connectivity features (true/false)");
    app->add_option("--zero-variance", zero_variance, "error | as-zero");
    if (classifier_flag) app->add_option("--classifier", classifier, "elm | helm");
    app->add_option("--hidden", hidden, "ELM hidden nodes L");
    app->add_option("--ae-hidden", ae_hidden, "autoencoder hidden nodes per HELM layer");
    app->add_option("--lambda", lambda, "L1 weight of the sparse autoencoder");
    app->add_option("--ridge-c", ridge_c, "ridge parameter C, or inf for the pseudoinverse");
    app->add_option("--activation", activation, "sigmoid | tanh | relu");
    app->add_option("--fista-max-iter", fista_max_iter, "FISTA iteration cap");
    app->add_option("--k", k, "folds");
    app->add_option("--repeats", repeats, "cross-validation repetitions");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    app->add_flag("--fixed-folds", fixed_folds, "reuse one split for all repeats");
    app->add_flag("--no-stratify", no_stratify, "plain (unstratified) folds");
    app->add_flag("--skip-invalid", skip_invalid, "skip and report invalid subjects");
  }

  void apply(RunConfig& c) const {
    if (atlas) c.atlas = *atlas;
    if (target_n) c.target_n = *target_n;
    if (feature_path) c.features.path = parse_feature_path(*feature_path);
    if (group_width) c.features.group_width = *group_width;
    if (fisher_z) c.features.fisher_z = *fisher_z;
    if (zero_variance) c.features.zero_variance = parse_zero_variance_policy(*zero_variance);
    if (classifier) c.classifier.kind = parse_classifier_kind(*classifier);
    auto& h = c.classifier.helm;
    if (hidden) h.elm.hidden_nodes = *hidden;
    if (ae_hidden) h.autoencoder.hidden_nodes = *ae_hidden;
    if (lambda) h.autoencoder.lambda = *lambda;
    if (ridge_c) h.elm.ridge_c = (*ridge_c == "inf") ? kRidgeOff : std::stod(*ridge_c);
    if (activation) {
      h.elm.activation = parse_activation(*activation);
      h.autoencoder.activation = h.elm.activation;
    }
    if (fista_max_iter) h.autoencoder.max_iter = *fista_max_iter;
    if (k) c.k = *k;
    if (repeats) c.repeats = *repeats;
    if (seed) c.seed = *seed;
    if (jobs) c.jobs = *jobs;
    if (fixed_folds) c.fixed_folds = true;
    if (no_stratify) c.stratified = false;
    if (skip_invalid) c.skip_invalid = true;
    validate(c);
  }
};

RunConfig base_config(const std::string& config_file) {
  return config_file.empty() ? RunConfig{} : load_run_config(config_file);
}

int cmd_ingest(const std::string& manifest, const Overrides& ov, const std::string& out) {
  RunConfig c;
  ov.apply(c);
  auto ds = ingest(manifest, {AtlasSpec::parse(c.atlas), c.target_n, c.skip_invalid, c.jobs});
  for (const auto& s : ds.skipped) log("skipped " + s.subject_id + ": " + s.reason);
  const auto labels = ds.binary_labels();
  const auto adhd = std::count(labels.begin(), labels.end(), 1);
  std::cout << "subjects " << ds.size() << " (NC " << ds.size() - adhd << ", ADHD " << adhd
            << "), skipped " << ds.skipped.size() << ", atlas " << ds.atlas.token() << " (M="
            << ds.atlas.roi_count << "), N=" << c.target_n << '\n';
  if (!out.empty()) {
    write_dataset(out, ds);
    log("wrote " + out + "/manifest.csv");
  }
  return 0;
}

int cmd_connectivity(const std::string& in, const std::string& out, bool fz,
                     const std::string& atlas, const std::string& zero_variance) {
  auto ds = load_dataset_dir(in, atlas);
  const auto policy = parse_zero_variance_policy(zero_variance);
  std::filesystem::create_directories(out);
  std::vector<SubjectRecord> records;
  for (const auto& s : ds.subjects) {
    auto map = correlation_matrix(s.series, policy);
    if (fz) map = fisher_z(std::move(map));
    const auto base = std::filesystem::path(out) / s.record.subject_id;
    write_delimited_matrix(base.string() + ".csv", map.matrix);
    write_vector_file(base.string() + ".vec", vectorize_upper(map).values);
    records.push_back({s.record.subject_id, base.string() + ".vec", s.record.label});
  }
  write_manifest(std::filesystem::path(out) / "manifest.csv", records);
  log("wrote connectivity for " + std::to_string(records.size()) + " subjects to " + out);
  return 0;
}

int cmd_encode(const std::string& in, const std::string& out, int group_width,
               const std::string& atlas) {
  auto ds = load_dataset_dir(in, atlas);
  std::filesystem::create_directories(out);
  std::vector<SubjectRecord> records;
  for (const auto& s : ds.subjects) {
    const auto enc = encode_subject(s.series, group_width);
    const auto base = std::filesystem::path(out) / s.record.subject_id;
    write_delimited_matrix(base.string() + ".csv", enc.z_matrix);
    write_vector_file(base.string() + ".flat", enc.flat());
    records.push_back({s.record.subject_id, base.string() + ".flat", s.record.label});
  }
  write_manifest(std::filesystem::path(out) / "manifest.csv", records);
  log("wrote LBEM codes for " + std::to_string(records.size()) + " subjects to " + out);
  return 0;
}

int cmd_train(const std::string& features, const std::string& model, int layers,
              const Overrides& ov, const std::string& out) {
  RunConfig c;
  c.classifier.kind = parse_classifier_kind(model);
  c.classifier.helm.layers = layers;
  ov.apply(c);
  auto table = load_feature_dir(features);
  std::vector<std::size_t> all(table.labels.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto fitted = fit_pipeline(table.features, table.labels, all, c.classifier, c.seed, c.jobs);
  std::ofstream mf(out, std::ios::binary);
  if (!mf) throw Error(ErrorKind::Io, "cannot write " + out);
  write_pipeline(mf, fitted);
  const auto pred = fitted.predict(table.features, c.jobs);
  const auto acc = per_class_accuracy(pred, table.labels, kNumClasses);
  std::cout << "trained " << c.classifier.name() << " on " << all.size() << " subjects, "
            << table.features.cols() << " features; training recall NC "
            << (acc[0] ? std::to_string(*acc[0]) : "-") << ", ADHD "
            << (acc[1] ? std::to_string(*acc[1]) : "-") << '\n';
  return 0;
}

int cmd_evaluate(const std::string& config_file, const std::string& features,
                 const std::string& manifest, const std::string& layers_text,
                 const Overrides& ov, const std::string& out) {
  RunConfig c = base_config(config_file);
  if (!manifest.empty()) c.manifest = manifest;
  ov.apply(c);
  const auto layer_list = parse_layer_list(layers_text.empty() ? std::to_string(c.classifier.helm.layers)
                                                               : layers_text);
  FeatureTable table;
  if (features == "auto") {
    auto ds = ingest(c.manifest, {AtlasSpec::parse(c.atlas), c.target_n, c.skip_invalid, c.jobs});
    for (const auto& s : ds.skipped) log("skipped " + s.subject_id + ": " + s.reason);
    table = feature_table(ds, c.features, c.jobs);
  } else {
    table = load_feature_dir(features);
  }

  std::vector<CvReport> reports;
  if (c.classifier.kind == ClassifierKind::Elm) {
    reports.push_back(run_cv(table.features, table.labels, c.classifier, c.cv_options()));
  } else {
    for (int layers : layer_list) {
      auto cc = c.classifier;
      cc.helm.layers = layers;
      log("cross-validating " + cc.name());
      reports.push_back(run_cv(table.features, table.labels, cc, c.cv_options()));
    }
    c.classifier.helm.layers = layer_list.front();
  }
  nlohmann::json extra = {{"features", features == "auto" ? "auto" : features},
                          {"feature_dim", table.features.cols()},
                          {"subjects", table.labels.size()},
                          {"layers_evaluated", layer_list}};
  write_report(out, report_document(c, reports, extra), reports);
  std::cout << render_table(reports);
  return 0;
}

int cmd_synth(const SyntheticOptions& opts, const std::string& out) {
  auto ds = generate_synthetic(opts);
  write_dataset(out, ds);
  log("wrote " + std::to_string(ds.size()) + " synthetic subjects (atlas " + ds.atlas.token() +
      ") to " + out);
  return 0;
}

int cmd_run(const std::string& config_file, const Overrides& ov, const std::string& out,
            const std::string& manifest) {
  RunConfig c = base_config(config_file);
  if (!manifest.empty()) c.manifest = manifest;
  if (!out.empty()) c.output_dir = out;
  ov.apply(c);
  auto result = run_pipeline(c);
  const std::vector<CvReport> reports{result.report};
  std::cout << render_table(reports);
  log("report: " + result.report_json.string());
  log("model: " + result.model_file.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"helmfc: fMRI ROI time series -> LBEM / connectivity features -> ELM/HELM classification"};
  app.require_subcommand(1);

  // config
  auto* config_cmd = app.add_subcommand("config", "print configuration");
  bool print_defaults = false;
  std::string config_show;
  config_cmd->add_flag("--print-defaults", print_defaults, "print the default configuration");
  config_cmd->add_option("--config", config_show, "print this config file with defaults filled in");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "validate and equalize a subject manifest");
  std::string ingest_manifest, ingest_out;
  Overrides ingest_ov;
  ingest_cmd->add_option("--manifest", ingest_manifest, "manifest CSV")->required();
  ingest_cmd->add_option("--out", ingest_out, "write the equalized dataset to this directory");
  ingest_ov.add_to(ingest_cmd, false);

  // connectivity
  auto* conn_cmd = app.add_subcommand("connectivity", "ROI correlation matrices per subject");
  std::string conn_in, conn_out, conn_atlas, conn_zero = "error";
  bool conn_fz = false;
  conn_cmd->add_option("--in", conn_in, "dataset directory")->required();
  conn_cmd->add_option("--out", conn_out, "output directory")->required();
  conn_cmd->add_flag("--fisher-z", conn_fz, "apply the Fisher z-transform");
  conn_cmd->add_option("--atlas", conn_atlas, "expected atlas (default: infer from first subject)");
  conn_cmd->add_option("--zero-variance", conn_zero, "error | as-zero");

  // encode
  auto* enc_cmd = app.add_subcommand("encode", "LBEM codes per subject");
  std::string enc_in, enc_out, enc_atlas;
  int enc_width = kDefaultGroupWidth;
  enc_cmd->add_option("--in", enc_in, "dataset directory")->required();
  enc_cmd->add_option("--out", enc_out, "output directory")->required();
  enc_cmd->add_option("--group-width", enc_width, "bits per code");
  enc_cmd->add_option("--atlas", enc_atlas, "expected atlas (default: infer from first subject)");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a classifier on a feature directory");
  std::string train_features, train_model = "helm", train_out;
  int train_layers = 1;
  Overrides train_ov;
  train_cmd->add_option("--features", train_features, "feature directory")->required();
  train_cmd->add_option("--model", train_model, "elm | helm");
  train_cmd->add_option("--layers", train_layers, "HELM autoencoder layers");
  train_cmd->add_option("--out", train_out, "model file")->required();
  train_ov.add_to(train_cmd, false);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "repeated k-fold cross-validation");
  std::string eval_features = "auto", eval_manifest, eval_layers, eval_out = "report.json", eval_config;
  Overrides eval_ov;
  eval_cmd->add_option("--features", eval_features, "feature directory, or 'auto' to compute from --manifest");
  eval_cmd->add_option("--manifest", eval_manifest, "subject manifest (for --features auto)");
  eval_cmd->add_option("--layers", eval_layers, "HELM layer count, or a list like 1,2,3");
  eval_cmd->add_option("--out", eval_out, "report JSON path (a .tsv table is written next to it)");
  eval_cmd->add_option("--config", eval_config, "config file; flags override it");
  eval_ov.add_to(eval_cmd);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic two-class dataset");
  SyntheticOptions synth_opts;
  std::string synth_out;
  synth_cmd->add_option("--per-class", synth_opts.per_class, "subjects per class");
  synth_cmd->add_option("--rois", synth_opts.rois, "ROI count M");
  synth_cmd->add_option("--timepoints", synth_opts.timepoints, "time points N");
  synth_cmd->add_option("--effect", synth_opts.effect, "class separation in [0, 1]");
  synth_cmd->add_option("--seed", synth_opts.seed, "seed");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "ingest, extract features, cross-validate and train");
  std::string run_config, run_out, run_manifest;
  Overrides run_ov;
  run_cmd->add_option("--config", run_config, "config file");
  run_cmd->add_option("--manifest", run_manifest, "overrides data.manifest");
  run_cmd->add_option("--out", run_out, "overrides output_dir");
  run_ov.add_to(run_cmd);

  CLI11_PARSE(app, argc, argv);

  const char* stage = "cli";
  try {
    if (*config_cmd) {
      stage = "config";
      RunConfig c = config_show.empty() ? RunConfig{} : load_run_config(config_show);
      if (!print_defaults && config_show.empty()) {
        std::cerr << "config: pass --print-defaults or --config <file>\n";
        return 2;
      }
      std::cout << to_json(c).dump(2) << '\n';
      return 0;
    }
    if (*ingest_cmd) {
      stage = "ingest";
      return cmd_ingest(ingest_manifest, ingest_ov, ingest_out);
    }
    if (*conn_cmd) {
      stage = "connectivity";
      return cmd_connectivity(conn_in, conn_out, conn_fz, conn_atlas, conn_zero);
    }
    if (*enc_cmd) {
      stage = "encode";
      return cmd_encode(enc_in, enc_out, enc_width, enc_atlas);
    }
    if (*train_cmd) {
      stage = "train";
      return cmd_train(train_features, train_model, train_layers, train_ov, train_out);
    }
    if (*eval_cmd) {
      stage = "evaluate";
      return cmd_evaluate(eval_config, eval_features, eval_manifest, eval_layers, eval_ov, eval_out);
    }
    if (*synth_cmd) {
      stage = "synth";
      return cmd_synth(synth_opts, synth_out);
    }
    if (*run_cmd) {
      stage = "run";
      return cmd_run(run_config, run_ov, run_out, run_manifest);
    }
  } catch (const Error& e) {
    std::cerr << "helmfc " << stage << " error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "helmfc " << stage << " error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
