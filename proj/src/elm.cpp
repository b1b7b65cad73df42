#include "helmfc/elm.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "helmfc/error.hpp"
#include "helmfc/kernels.hpp"
#include "helmfc/model_io.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

ElmModel make_elm(Eigen::Index input_dim, const ElmConfig& config) {
  if (config.hidden_nodes < 1)
    throw Error(ErrorKind::InvalidArgument, "hidden_nodes must be >= 1");
  if (input_dim < 1) throw Error(ErrorKind::InvalidArgument, "input dimension must be >= 1");
  if (!(config.ridge_c > 0.0))
    throw Error(ErrorKind::InvalidArgument, "ridge_c must be positive or infinity");
  Rng rng(config.seed);
  ElmModel model;
  model.input_weights = uniform_pm1_matrix(config.hidden_nodes, input_dim, rng);
  model.biases = uniform_pm1_vector(config.hidden_nodes, rng);
  model.activation = config.activation;
  model.ridge_c = config.ridge_c;
  model.seed = config.seed;
  return model;
}

Eigen::MatrixXd encode_labels(std::span<const int> labels, int classes) {
  if (classes < 1) throw Error(ErrorKind::InvalidArgument, "class count must be >= 1");
  Eigen::MatrixXd z = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(labels.size()), classes, -1.0);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 0 || labels[j] >= classes)
      throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(labels[j]) +
                                                  " outside [0, " + std::to_string(classes) + ")");
    z(static_cast<Eigen::Index>(j), labels[j]) = 1.0;
  }
  return z;
}

Eigen::MatrixXd build_hidden_layer(const Eigen::MatrixXd& x, const ElmModel& model, int jobs) {
  if (x.cols() != model.input_dim()) {
    std::ostringstream os;
    os << "ELM expects " << model.input_dim() << " features, got " << x.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  Eigen::MatrixXd h = x * model.input_weights.transpose();
  kernels::bias_activate(h, model.biases, model.activation, jobs);
  return h;
}

Eigen::MatrixXd solve_output_weights(const Eigen::MatrixXd& h, const Eigen::MatrixXd& z,
                                     double ridge_c) {
  if (h.rows() != z.rows())
    throw Error(ErrorKind::DimensionMismatch, "hidden layer and label matrix row counts differ");
  if (!h.allFinite()) throw Error(ErrorKind::NonFinite, "hidden layer has non-finite entries");
  if (!(ridge_c > 0.0)) throw Error(ErrorKind::InvalidArgument, "ridge_c must be positive");

  Eigen::MatrixXd beta;
  if (std::isinf(ridge_c)) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(h);
    beta = cod.solve(z);
    if (!beta.allFinite()) {
      const auto r = cod.matrixT().diagonal().cwiseAbs();
      const double cond = r.size() ? r.maxCoeff() / r.minCoeff() : 0.0;
      std::ostringstream os;
      os << "pseudoinverse solve failed (rank " << cod.rank() << ", condition estimate " << cond
         << ")";
      throw Error(ErrorKind::Numerical, os.str());
    }
    return beta;
  }

  // Solve the smaller of the two equivalent systems:
  //   (HᵀH + I/C) β = HᵀZ            when L <= N
  //   β = Hᵀ (HHᵀ + I/C)⁻¹ Z          otherwise
  const double reg = 1.0 / ridge_c;
  const bool primal = h.cols() <= h.rows();
  Eigen::MatrixXd gram = primal ? Eigen::MatrixXd(h.transpose() * h) : Eigen::MatrixXd(h * h.transpose());
  gram.diagonal().array() += reg;
  Eigen::MatrixXd rhs = primal ? Eigen::MatrixXd(h.transpose() * z) : z;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw Error(ErrorKind::Numerical, "ridge system factorization failed");
  Eigen::MatrixXd sol = ldlt.solve(rhs);
  // One step of iterative refinement tightens the residual on ill-conditioned H.
  sol += ldlt.solve(rhs - gram * sol);
  beta = primal ? sol : Eigen::MatrixXd(h.transpose() * sol);
  if (!beta.allFinite()) throw Error(ErrorKind::Numerical, "ridge solve produced non-finite weights");
  return beta;
}

ElmModel elm_train(const Eigen::MatrixXd& x, std::span<const int> labels, int classes,
                   const ElmConfig& config) {
  if (x.rows() < 1) throw Error(ErrorKind::InvalidArgument, "empty training set");
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw Error(ErrorKind::DimensionMismatch, "label count does not match sample count");
  if (!x.allFinite()) throw Error(ErrorKind::NonFinite, "training data has non-finite entries");
  ElmModel model = make_elm(x.cols(), config);
  const Eigen::MatrixXd h = build_hidden_layer(x, model, config.jobs);
  model.output_weights = solve_output_weights(h, encode_labels(labels, classes), config.ridge_c);
  return model;
}

Eigen::MatrixXd elm_scores(const ElmModel& model, const Eigen::MatrixXd& x, int jobs) {
  if (!model.trained()) throw Error(ErrorKind::NotTrained, "ELM model has no output weights");
  return build_hidden_layer(x, model, jobs) * *model.output_weights;
}

std::vector<int> argmax_rows(const Eigen::MatrixXd& scores) {
  std::vector<int> out(scores.rows(), 0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c)
      if (scores(i, c) > scores(i, best)) best = static_cast<int>(c);
    out[i] = best;
  }
  return out;
}

std::vector<int> elm_predict(const ElmModel& model, const Eigen::MatrixXd& x, int jobs) {
  return argmax_rows(elm_scores(model, x, jobs));
}

void write_elm(std::ostream& out, const ElmModel& model) {
  using namespace model_io;
  out << "helmfc-elm v1\n";
  write_key(out, "activation", to_string(model.activation));
  write_key(out, "ridge_c", model.ridge_c);
  write_key(out, "seed", std::to_string(model.seed));
  write_key(out, "weight_distribution", "uniform[-1,1]");
  write_matrix(out, "input_weights", model.input_weights);
  write_vector(out, "biases", model.biases);
  if (model.output_weights) {
    write_matrix(out, "output_weights", *model.output_weights);
  } else {
    out << "untrained\n";
  }
  out << "end-elm\n";
}

ElmModel read_elm(std::istream& in) {
  using namespace model_io;
  expect_line(in, "helmfc-elm v1");
  ElmModel model;
  model.activation = parse_activation(read_key(in, "activation"));
  model.ridge_c = read_key_double(in, "ridge_c");
  model.seed = read_key_uint(in, "seed");
  if (read_key(in, "weight_distribution") != "uniform[-1,1]")
    throw Error(ErrorKind::Parse, "model file: unsupported weight distribution");
  model.input_weights = read_matrix(in, "input_weights");
  model.biases = read_vector(in, "biases");
  if (model.biases.size() != model.input_weights.rows())
    throw Error(ErrorKind::Parse, "model file: bias length does not match hidden nodes");
  if (peek_token(in) == "untrained") {
    expect_line(in, "untrained");
  } else {
    model.output_weights = read_matrix(in, "output_weights");
    if (model.output_weights->rows() != model.input_weights.rows())
      throw Error(ErrorKind::Parse, "model file: output weight rows do not match hidden nodes");
  }
  expect_line(in, "end-elm");
  return model;
}

}  // namespace helmfc
