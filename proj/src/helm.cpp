#include "helmfc/helm.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "helmfc/error.hpp"
#include "helmfc/kernels.hpp"
#include "helmfc/model_io.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

namespace {

Eigen::MatrixXd forward_layer(const Eigen::MatrixXd& h_prev, const Eigen::MatrixXd& beta,
                              Activation act, int jobs) {
  Eigen::MatrixXd h = h_prev * beta.transpose();
  kernels::bias_activate(h, Eigen::VectorXd::Zero(h.cols()), act, jobs);
  return h;
}

}  // namespace

std::uint64_t autoencoder_seed(std::uint64_t master, int layer) {
  return derive_seed(master, {0xAEULL, static_cast<std::uint64_t>(layer)});
}

AutoencoderLayer train_autoencoder_layer(const Eigen::MatrixXd& h_prev,
                                         const AutoencoderConfig& config, std::uint64_t seed,
                                         int jobs) {
  if (h_prev.rows() < 1) throw Error(ErrorKind::InvalidArgument, "autoencoder: empty input");
  if (!h_prev.allFinite()) throw Error(ErrorKind::NonFinite, "autoencoder: non-finite input");
  if (config.hidden_nodes < 1)
    throw Error(ErrorKind::InvalidArgument, "autoencoder hidden_nodes must be >= 1");

  Rng rng(seed);
  const Eigen::MatrixXd w = uniform_pm1_matrix(h_prev.cols(), config.hidden_nodes, rng);
  const Eigen::VectorXd b = uniform_pm1_vector(config.hidden_nodes, rng);
  Eigen::MatrixXd a = h_prev * w;
  kernels::bias_activate(a, b, config.activation, jobs);

  auto solve = fista_solve(a, h_prev, {config.lambda, config.max_iter, config.tol});
  Eigen::MatrixXd beta = solve.beta;
  return {std::move(beta), std::move(solve)};
}

void require_unit_interval(const Eigen::MatrixXd& x) {
  if (!x.allFinite()) throw Error(ErrorKind::NonFinite, "HELM input has non-finite entries");
  if (x.size() == 0) return;
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  if (lo < 0.0 || hi > 1.0) {
    std::ostringstream os;
    os << "HELM input must be normalized to [0, 1], found range [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::NotNormalized, os.str());
  }
}

HelmModel helm_train(const Eigen::MatrixXd& x, std::span<const int> labels, int classes,
                     const HelmConfig& config) {
  if (config.layers < 0) throw Error(ErrorKind::InvalidArgument, "layer count must be >= 0");
  if (x.rows() < 1) throw Error(ErrorKind::InvalidArgument, "empty training set");
  require_unit_interval(x);

  HelmModel model;
  model.layer_activation = config.autoencoder.activation;
  model.autoencoder = config.autoencoder;
  model.seed = config.elm.seed;

  Eigen::MatrixXd h = x;
  for (int layer = 1; layer <= config.layers; ++layer) {
    auto ae = train_autoencoder_layer(h, config.autoencoder, autoencoder_seed(model.seed, layer),
                                      config.elm.jobs);
    h = forward_layer(h, ae.beta, model.layer_activation, config.elm.jobs);
    model.layer_weights.push_back(std::move(ae.beta));
  }
  model.final_elm = elm_train(h, labels, classes, config.elm);
  return model;
}

Eigen::MatrixXd helm_features(const HelmModel& model, const Eigen::MatrixXd& x, int jobs) {
  require_unit_interval(x);
  Eigen::MatrixXd h = x;
  for (std::size_t i = 0; i < model.layer_weights.size(); ++i) {
    const auto& beta = model.layer_weights[i];
    if (h.cols() != beta.cols()) {
      std::ostringstream os;
      os << "HELM layer " << i + 1 << " expects " << beta.cols() << " inputs, got " << h.cols();
      throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    h = forward_layer(h, beta, model.layer_activation, jobs);
  }
  return h;
}

std::vector<int> helm_predict(const HelmModel& model, const Eigen::MatrixXd& x, int jobs) {
  if (!model.final_elm.trained()) throw Error(ErrorKind::NotTrained, "HELM model is not trained");
  return elm_predict(model.final_elm, helm_features(model, x, jobs), jobs);
}

void write_helm(std::ostream& out, const HelmModel& model) {
  using namespace model_io;
  out << "helmfc-helm v1\n";
  write_key(out, "layers", static_cast<std::int64_t>(model.layers()));
  write_key(out, "layer_activation", to_string(model.layer_activation));
  write_key(out, "ae_hidden", static_cast<std::int64_t>(model.autoencoder.hidden_nodes));
  write_key(out, "lambda", model.autoencoder.lambda);
  write_key(out, "max_iter", static_cast<std::int64_t>(model.autoencoder.max_iter));
  write_key(out, "tol", model.autoencoder.tol);
  write_key(out, "seed", std::to_string(model.seed));
  for (int i = 0; i < model.layers(); ++i)
    write_matrix(out, "layer_" + std::to_string(i + 1), model.layer_weights[i]);
  write_elm(out, model.final_elm);
  out << "end-helm\n";
}

HelmModel read_helm(std::istream& in) {
  using namespace model_io;
  expect_line(in, "helmfc-helm v1");
  HelmModel model;
  const auto layers = read_key_int(in, "layers");
  if (layers < 0) throw Error(ErrorKind::Parse, "model file: negative layer count");
  model.layer_activation = parse_activation(read_key(in, "layer_activation"));
  model.autoencoder.activation = model.layer_activation;
  model.autoencoder.hidden_nodes = static_cast<int>(read_key_int(in, "ae_hidden"));
  model.autoencoder.lambda = read_key_double(in, "lambda");
  model.autoencoder.max_iter = static_cast<int>(read_key_int(in, "max_iter"));
  model.autoencoder.tol = read_key_double(in, "tol");
  model.seed = read_key_uint(in, "seed");
  for (std::int64_t i = 0; i < layers; ++i)
    model.layer_weights.push_back(read_matrix(in, "layer_" + std::to_string(i + 1)));
  model.final_elm = read_elm(in);
  expect_line(in, "end-helm");
  return model;
}

}  // namespace helmfc
