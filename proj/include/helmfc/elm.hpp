#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "helmfc/activation.hpp"

namespace helmfc {

inline constexpr double kDefaultRidgeC = 1e6;
inline constexpr double kRidgeOff = std::numeric_limits<double>::infinity();

struct ElmConfig {
  int hidden_nodes = 1000;
  Activation activation = Activation::Sigmoid;
  /// Finite: ridge solve (HᵀH + I/C)⁻¹HᵀZ. Infinite: minimum-norm least squares.
  double ridge_c = kDefaultRidgeC;
  std::uint64_t seed = 0;
  int jobs = 0;
};

/// Single-hidden-layer extreme learning machine. Input weights and biases are drawn
/// uniformly from [-1, 1] and never trained; only `output_weights` is solved.
struct ElmModel {
  Eigen::MatrixXd input_weights;  // L×d
  Eigen::VectorXd biases;         // L
  std::optional<Eigen::MatrixXd> output_weights;  // L×G after training
  Activation activation = Activation::Sigmoid;
  double ridge_c = kDefaultRidgeC;
  std::uint64_t seed = 0;

  bool trained() const { return output_weights.has_value(); }
  Eigen::Index hidden_nodes() const { return input_weights.rows(); }
  Eigen::Index input_dim() const { return input_weights.cols(); }
  Eigen::Index classes() const { return output_weights ? output_weights->cols() : 0; }
};

/// Untrained model with freshly drawn random weights.
ElmModel make_elm(Eigen::Index input_dim, const ElmConfig& config);

/// N×G matrix: +1 in the column of each (0-based) class index, -1 elsewhere.
Eigen::MatrixXd encode_labels(std::span<const int> labels, int classes);

/// H(j, i) = act(w_i · x_j + b_i), N×L.
Eigen::MatrixXd build_hidden_layer(const Eigen::MatrixXd& x, const ElmModel& model, int jobs = 0);

Eigen::MatrixXd solve_output_weights(const Eigen::MatrixXd& h, const Eigen::MatrixXd& z,
                                     double ridge_c);

ElmModel elm_train(const Eigen::MatrixXd& x, std::span<const int> labels, int classes,
                   const ElmConfig& config);

/// h(x)β, N×G.
Eigen::MatrixXd elm_scores(const ElmModel& model, const Eigen::MatrixXd& x, int jobs = 0);

/// Row-wise argmax; ties go to the lowest class index.
std::vector<int> argmax_rows(const Eigen::MatrixXd& scores);

std::vector<int> elm_predict(const ElmModel& model, const Eigen::MatrixXd& x, int jobs = 0);

void write_elm(std::ostream& out, const ElmModel& model);
ElmModel read_elm(std::istream& in);

}  // namespace helmfc
