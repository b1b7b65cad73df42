#include "helmfc/fista.hpp"

#include <cmath>

#include "helmfc/error.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

double lipschitz_constant(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::InvalidArgument, "Lipschitz constant of a zero matrix is undefined");
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");

  Rng rng(0x5eed1ec7ULL);
  Eigen::VectorXd v = Eigen::VectorXd::NullaryExpr(a.cols(), [&] { return 0.5 + uniform01(rng); });
  v.normalize();
  double eig = 0.0;
  constexpr int kMaxIter = 10000;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
    const bool done = it > 0 && std::abs(next - eig) <= rel_tol * std::abs(next);
    eig = next;
    if (done) break;
  }
  if (!(eig > 0.0))
    throw Error(ErrorKind::Numerical, "power iteration did not find a positive eigenvalue");
  return 2.0 * eig;
}

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& v, double tau) {
  if (tau < 0.0) throw Error(ErrorKind::InvalidArgument, "soft threshold needs tau >= 0");
  return v.unaryExpr([tau](double e) {
    const double mag = std::abs(e) - tau;
    return mag > 0.0 ? std::copysign(mag, e) : 0.0;
  });
}

Eigen::MatrixXd least_squares_gradient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                                       const Eigen::MatrixXd& beta) {
  return 2.0 * a.transpose() * (a * beta - x);
}

double lasso_objective(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                       const Eigen::MatrixXd& beta, double lambda) {
  return (a * beta - x).squaredNorm() + lambda * beta.cwiseAbs().sum();
}

FistaResult fista_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& x,
                        const FistaOptions& options) {
  if (a.rows() != x.rows())
    throw Error(ErrorKind::DimensionMismatch, "FISTA: A and X row counts differ");
  if (!a.allFinite() || !x.allFinite())
    throw Error(ErrorKind::NonFinite, "FISTA: non-finite input");
  if (!(options.lambda >= 0.0) || options.max_iter < 1 || !(options.tol > 0.0))
    throw Error(ErrorKind::InvalidArgument, "FISTA: need lambda >= 0, max_iter >= 1, tol > 0");

  FistaResult res;
  res.gamma = lipschitz_constant(a);
  const double step = 1.0 / res.gamma;
  const double tau = options.lambda / res.gamma;

  const Eigen::Index l = a.cols();
  Eigen::MatrixXd beta_prev = Eigen::MatrixXd::Zero(l, x.cols());  // β_0
  Eigen::MatrixXd y = beta_prev;                                    // y_1
  double t = 1.0;                                                   // t_1

  // The gradient 2Aᵀ(Ay − X) is linear in y, and y is a combination of the last two
  // iterates, so only one product with β per iteration is needed. With few columns
  // relative to rows the Gram form AᵀA is cheaper than going through A.
  const bool gram_form = l < 2 * a.rows();
  Eigen::MatrixXd gram, atx;
  double x_sq = 0.0;
  if (gram_form) {
    gram = a.transpose() * a;
    atx = a.transpose() * x;
    x_sq = x.squaredNorm();
  }
  // prod(β) = AᵀAβ in Gram form, Aβ otherwise.
  Eigen::MatrixXd prod_prev = gram_form ? Eigen::MatrixXd::Zero(l, x.cols())
                                        : Eigen::MatrixXd::Zero(a.rows(), x.cols());
  Eigen::MatrixXd prod_y = prod_prev;

  res.objective_trace.reserve(options.max_iter);
  res.momentum_trace.reserve(options.max_iter);
  for (int i = 1; i <= options.max_iter; ++i) {
    Eigen::MatrixXd grad =
        gram_form ? Eigen::MatrixXd(2.0 * (prod_y - atx)) : Eigen::MatrixXd(2.0 * a.transpose() * (prod_y - x));
    Eigen::MatrixXd beta = soft_threshold(y - step * grad, tau);
    if (!beta.allFinite())
      throw Error(ErrorKind::Numerical, "FISTA: non-finite iterate at iteration " + std::to_string(i));

    Eigen::MatrixXd prod = gram_form ? Eigen::MatrixXd(gram * beta) : Eigen::MatrixXd(a * beta);
    const double l1 = beta.cwiseAbs().sum();
    const double fit = gram_form ? beta.cwiseProduct(prod).sum() - 2.0 * beta.cwiseProduct(atx).sum() + x_sq
                                 : (prod - x).squaredNorm();
    res.objective_trace.push_back(fit + options.lambda * l1);
    res.momentum_trace.push_back(t);
    res.iterations = i;

    const double change = (beta - beta_prev).cwiseAbs().maxCoeff();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = (t - 1.0) / t_next;
    y = beta + momentum * (beta - beta_prev);
    prod_y = prod + momentum * (prod - prod_prev);

    beta_prev = std::move(beta);
    prod_prev = std::move(prod);
    t = t_next;
    if (change <= options.tol) {
      res.converged = true;
      break;
    }
  }
  res.beta = std::move(beta_prev);
  return res;
}

}  // namespace helmfc
