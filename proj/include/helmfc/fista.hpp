#pragma once

#include <vector>

#include <Eigen/Dense>

namespace helmfc {

/// Solves min_β ‖Aβ − X‖² + λ‖β‖₁ by constant-step FISTA.
struct FistaOptions {
  double lambda = 1e-3;
  int max_iter = 500;
  double tol = 1e-6;  // stop when ‖β_i − β_{i−1}‖∞ <= tol
};

struct FistaResult {
  Eigen::MatrixXd beta;
  std::vector<double> objective_trace;  // objective at β_i, i = 1..iterations
  std::vector<double> momentum_trace;   // t_i, i = 1..iterations
  double gamma = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// 2·σ_max(A)², the Lipschitz constant of ∇‖Aβ − X‖² = 2Aᵀ(Aβ − X), by power
/// iteration on AᵀA.
double lipschitz_constant(const Eigen::MatrixXd& a, double rel_tol = 1e-6);

/// sign(v)·max(|v| − τ, 0), elementwise.
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& v, double tau);

Eigen::MatrixXd least_squares_gradient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                                       const Eigen::MatrixXd& beta);

double lasso_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                       const Eigen::MatrixXd& beta, double lambda);

FistaResult fista_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                        const FistaOptions& options);

}  // namespace helmfc
