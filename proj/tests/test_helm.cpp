#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helmfc/error.hpp"
#include "helmfc/fista.hpp"
#include "helmfc/helm.hpp"
#include "helmfc/random.hpp"
#include "oracles/ista.hpp"

using namespace helmfc;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

// Two clusters inside [0, 1]^d.
void two_clusters(std::uint64_t seed, int per_class, int d, Eigen::MatrixXd& x,
                  std::vector<int>& y, double spread = 0.12) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  x.resize(2 * per_class, d);
  y.assign(2 * per_class, 0);
  for (int i = 0; i < 2 * per_class; ++i) {
    y[i] = i % 2;
    for (int j = 0; j < d; ++j) {
      const double center = (y[i] == 0) == (j % 2 == 0) ? 0.35 : 0.65;
      x(i, j) = std::clamp(center + g(rng), 0.0, 1.0);
    }
  }
}

double accuracy(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return static_cast<double>(hit) / a.size();
}

HelmConfig small_helm(int layers, std::uint64_t seed) {
  HelmConfig c;
  c.layers = layers;
  c.autoencoder.hidden_nodes = 40;
  c.elm.hidden_nodes = 60;
  c.elm.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("lipschitz_constant") {
  CHECK(lipschitz_constant(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(lipschitz_constant(2.0 * Eigen::MatrixXd::Identity(3, 3)) ==
        doctest::Approx(8.0).epsilon(1e-6));
  CHECK_THROWS_AS(lipschitz_constant(Eigen::MatrixXd::Zero(3, 2)), Error);

  std::mt19937_64 rng(1);
  const auto a = gaussian(rng, 20, 30);
  CHECK(lipschitz_constant(a) == doctest::Approx(oracle::exact_lipschitz(a)).epsilon(1e-5));
}

TEST_CASE("soft_threshold") {
  Eigen::MatrixXd v(1, 5);
  v << 0.5, -0.5, 0.1, -0.2, 0.0;
  const auto s = soft_threshold(v, 0.2);
  CHECK(s(0, 0) == doctest::Approx(0.3));
  CHECK(s(0, 1) == doctest::Approx(-0.3));
  CHECK(s(0, 2) == 0.0);
  CHECK(s(0, 3) == 0.0);
  CHECK(s(0, 4) == 0.0);
  CHECK(soft_threshold(v, 0.0) == v);
  CHECK_THROWS_AS(soft_threshold(v, -1.0), Error);
}

TEST_CASE("fista worked examples") {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const auto scalar = fista_solve(one, one, {1.0, 1000, 1e-12});
  CHECK(scalar.beta(0, 0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(scalar.gamma == doctest::Approx(2.0));

  REQUIRE(scalar.momentum_trace.size() >= 2);
  CHECK(scalar.momentum_trace[0] == 1.0);
  CHECK(scalar.momentum_trace[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));

  std::mt19937_64 rng(2);
  const Eigen::MatrixXd a = gaussian(rng, 6, 6) + 4.0 * Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd x = gaussian(rng, 6, 2);
  const auto ls = fista_solve(a, x, {0.0, 20000, 1e-13});
  const Eigen::MatrixXd exact = a.fullPivLu().solve(x);
  CHECK((ls.beta - exact).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(ls.converged);
}

TEST_CASE("property: FISTA matches ISTA to convergence and beats it at equal budget") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 12; ++trial) {
    const auto a = gaussian(rng, 20, 30);
    const auto x = gaussian(rng, 20, 1);
    const double lambda = std::array{0.01, 0.1, 1.0}[trial % 3];
    const auto ref = oracle::ista(a, x, lambda, 200000, 1e-14);
    const double f_ref = oracle::lasso_objective(a, x, ref.beta, lambda);
    const auto fast = fista_solve(a, x, {lambda, 20000, 1e-12});
    CHECK(oracle::lasso_objective(a, x, fast.beta, lambda) <= f_ref * (1.0 + 1e-4));

    const int budget = 100;
    const auto ista_b = oracle::ista(a, x, lambda, budget);
    const auto fista_b = fista_solve(a, x, {lambda, budget, 1e-300});
    CHECK(fista_b.iterations == budget);
    CHECK(oracle::lasso_objective(a, x, fista_b.beta, lambda) <=
          oracle::lasso_objective(a, x, ista_b.beta, lambda));
  }
}

TEST_CASE("property: gradient matches central differences") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = gaussian(rng, 8, 5);
    const auto x = gaussian(rng, 8, 2);
    const auto beta = gaussian(rng, 5, 2);
    const auto grad = least_squares_gradient(a, x, beta);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < beta.size(); ++i) {
      Eigen::MatrixXd up = beta, down = beta;
      up.data()[i] += h;
      down.data()[i] -= h;
      const double fd = ((a * up - x).squaredNorm() - (a * down - x).squaredNorm()) / (2 * h);
      CHECK(std::abs(fd - grad.data()[i]) <= 1e-5 * std::max(1.0, std::abs(grad.data()[i])));
    }
  }
}

TEST_CASE("property: gamma bounds the gradient's change") {
  std::mt19937_64 rng(8);
  const auto a = gaussian(rng, 20, 30);
  const auto x = gaussian(rng, 20, 3);
  const double gamma = lipschitz_constant(a);
  for (int k = 0; k < 100; ++k) {
    const auto b1 = gaussian(rng, 30, 3);
    const auto b2 = gaussian(rng, 30, 3);
    const double lhs = (least_squares_gradient(a, x, b1) - least_squares_gradient(a, x, b2)).norm();
    CHECK(lhs <= gamma * (b1 - b2).norm());
  }
}

TEST_CASE("property: momentum sequence grows at least linearly") {
  std::mt19937_64 rng(9);
  const auto a = gaussian(rng, 10, 15);
  const auto x = gaussian(rng, 10, 1);
  const auto r = fista_solve(a, x, {0.1, 300, 1e-300});
  REQUIRE(r.momentum_trace.size() == 300);
  for (std::size_t i = 0; i < r.momentum_trace.size(); ++i) {
    CHECK(r.momentum_trace[i] >= (i + 2) / 2.0);
    if (i > 0) CHECK(r.momentum_trace[i] > r.momentum_trace[i - 1]);
  }
  CHECK(r.objective_trace.size() == 300);
}

TEST_CASE("fista input validation") {
  CHECK_THROWS_AS(fista_solve(Eigen::MatrixXd::Ones(3, 2), Eigen::MatrixXd::Ones(2, 1), {}), Error);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(fista_solve(bad, Eigen::MatrixXd::Ones(2, 1), {}), Error);
}

TEST_CASE("autoencoder layer") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd h(30, 10);
  for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = u(rng);

  AutoencoderConfig cfg;
  cfg.hidden_nodes = 50;
  cfg.lambda = 1e-4;
  cfg.max_iter = 5000;
  const auto layer = train_autoencoder_layer(h, cfg, 123);
  CHECK(layer.beta.rows() == 50);
  CHECK(layer.beta.cols() == 10);

  // Rebuild A the same way to measure the reconstruction and the least-squares floor.
  Rng r(123);
  const auto w = uniform_pm1_matrix(10, 50, r);
  const auto b = uniform_pm1_vector(50, r);
  Eigen::MatrixXd a = h * w;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = activate(Activation::Sigmoid, a(i, j) + b(j));
  const Eigen::MatrixXd ls = a.completeOrthogonalDecomposition().solve(h);
  CHECK((a * ls - h).norm() / h.norm() < 1e-6);
  CHECK((a * layer.beta - h).norm() / h.norm() <= 0.05);

  CHECK(train_autoencoder_layer(h, cfg, 123).beta == layer.beta);
}

TEST_CASE("property: larger lambda gives at least as many zeros") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = gaussian(rng, 20, 30);
    const auto x = gaussian(rng, 20, 4);
    const auto dense = fista_solve(a, x, {0.01, 3000, 1e-10});
    const auto sparse = fista_solve(a, x, {10.0, 3000, 1e-10});
    CHECK((sparse.beta.array() == 0.0).count() >= (dense.beta.array() == 0.0).count());
  }
}

TEST_CASE("helm_train / helm_predict") {
  Eigen::MatrixXd x;
  std::vector<int> y;
  two_clusters(1, 40, 12, x, y);

  SUBCASE("zero layers is the plain ELM") {
    const auto cfg = small_helm(0, 5);
    const auto helm = helm_train(x, y, 2, cfg);
    const auto elm = elm_train(x, y, 2, cfg.elm);
    CHECK(helm.layers() == 0);
    CHECK(*helm.final_elm.output_weights == *elm.output_weights);
    CHECK(helm_predict(helm, x) == elm_predict(elm, x));
  }

  SUBCASE("one layer is no worse than ELM on training data") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto cfg = small_helm(1, seed);
      const double helm_acc = accuracy(helm_predict(helm_train(x, y, 2, cfg), x), y);
      const double elm_acc = accuracy(elm_predict(elm_train(x, y, 2, cfg.elm), x), y);
      CHECK(helm_acc >= elm_acc - 0.02);
    }
  }

  SUBCASE("consistency and batch invariance") {
    const auto model = helm_train(x, y, 2, small_helm(2, 3));
    const auto all = helm_predict(model, x);
    for (Eigen::Index i = 0; i < x.rows(); i += 7)
      CHECK(helm_predict(model, x.row(i))[0] == all[i]);
    CHECK(helm_features(model, x).cols() == 40);
  }

  SUBCASE("normalization precondition") {
    Eigen::MatrixXd bad = x;
    bad(0, 0) = 1.5;
    try {
      helm_train(bad, y, 2, small_helm(1, 0));
      FAIL("expected not-normalized");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotNormalized);
    }
  }

  SUBCASE("untrained and mismatched") {
    CHECK_THROWS_AS(helm_predict(HelmModel{}, x), Error);
    const auto model = helm_train(x, y, 2, small_helm(1, 0));
    CHECK_THROWS_AS(helm_predict(model, x.leftCols(5)), Error);
  }
}

TEST_CASE("layer freezing and deterministic training") {
  Eigen::MatrixXd x;
  std::vector<int> y;
  two_clusters(2, 20, 8, x, y);
  const auto one = helm_train(x, y, 2, small_helm(1, 17));
  const auto three = helm_train(x, y, 2, small_helm(3, 17));
  REQUIRE(three.layers() == 3);
  CHECK(three.layer_weights[0] == one.layer_weights[0]);
  CHECK(three.layer_weights[1] != three.layer_weights[2]);
  const auto again = helm_train(x, y, 2, small_helm(3, 17));
  for (int i = 0; i < 3; ++i) CHECK(again.layer_weights[i] == three.layer_weights[i]);
}

TEST_CASE("HELM model file round trip is bitwise") {
  Eigen::MatrixXd x;
  std::vector<int> y;
  two_clusters(3, 15, 6, x, y);
  const auto model = helm_train(x, y, 2, small_helm(2, 9));
  std::stringstream ss;
  write_helm(ss, model);
  const auto back = read_helm(ss);
  REQUIRE(back.layers() == 2);
  for (int i = 0; i < 2; ++i) CHECK(back.layer_weights[i] == model.layer_weights[i]);
  CHECK(back.autoencoder.lambda == model.autoencoder.lambda);
  CHECK(*back.final_elm.output_weights == *model.final_elm.output_weights);
  CHECK(helm_predict(back, x) == helm_predict(model, x));
  std::stringstream again;
  write_helm(again, back);
  CHECK(again.str() == ss.str());
}
