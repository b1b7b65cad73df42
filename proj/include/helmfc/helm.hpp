#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "helmfc/elm.hpp"
#include "helmfc/fista.hpp"

namespace helmfc {

struct AutoencoderConfig {
  int hidden_nodes = 1000;  // L_ae
  double lambda = 1e-3;
  int max_iter = 500;
  double tol = 1e-6;
  Activation activation = Activation::Sigmoid;
};

struct HelmConfig {
  int layers = 1;
  AutoencoderConfig autoencoder;
  /// Final supervised ELM. Its seed is the HELM master seed, so a zero-layer HELM is
  /// exactly the plain ELM with the same configuration.
  ElmConfig elm;
};

/// Stack of ELM sparse-autoencoder layers, H_i = g(H_{i−1}·β_iᵀ), topped by an ELM.
/// Layer weights are frozen once learned.
struct HelmModel {
  std::vector<Eigen::MatrixXd> layer_weights;  // β_i, L_ae × d_{i−1}
  Activation layer_activation = Activation::Sigmoid;
  AutoencoderConfig autoencoder;
  std::uint64_t seed = 0;
  ElmModel final_elm;

  int layers() const { return static_cast<int>(layer_weights.size()); }
};

struct AutoencoderLayer {
  Eigen::MatrixXd beta;
  FistaResult solve;
};

/// Seed of the random mapping for layer `layer` (1-based).
std::uint64_t autoencoder_seed(std::uint64_t master, int layer);

/// A = g(H_prev·W_r + b_r) with seeded uniform [−1, 1] W_r, b_r, then β from
/// min ‖Aβ − H_prev‖² + λ‖β‖₁.
AutoencoderLayer train_autoencoder_layer(const Eigen::MatrixXd& h_prev,
                                         const AutoencoderConfig& config, std::uint64_t seed,
                                         int jobs = 0);

/// Throws NotNormalized unless every entry lies in [0, 1].
void require_unit_interval(const Eigen::MatrixXd& x);

HelmModel helm_train(const Eigen::MatrixXd& x, std::span<const int> labels, int classes,
                     const HelmConfig& config);

/// H_n for inputs `x`.
Eigen::MatrixXd helm_features(const HelmModel& model, const Eigen::MatrixXd& x, int jobs = 0);

std::vector<int> helm_predict(const HelmModel& model, const Eigen::MatrixXd& x, int jobs = 0);

void write_helm(std::ostream& out, const HelmModel& model);
HelmModel read_helm(std::istream& in);

}  // namespace helmfc
