#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helmfc/elm.hpp"
#include "helmfc/error.hpp"

using namespace helmfc;

namespace {

Eigen::MatrixXd random_unit(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  return x;
}

std::vector<int> random_labels(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 2);
  std::shuffle(y.begin(), y.end(), rng);
  return y;
}

double ridge_gradient_maxnorm(const Eigen::MatrixXd& h, const Eigen::MatrixXd& z,
                              const Eigen::MatrixXd& beta, double c) {
  const Eigen::MatrixXd g = 2.0 * (h.transpose() * (h * beta - z)) + (2.0 / c) * beta;
  return g.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("encode_labels") {
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(encode_labels(std::vector<int>{0, 1}, 2) == expected);
  Eigen::MatrixXd three(1, 3);
  three << -1, 1, -1;
  CHECK(encode_labels(std::vector<int>{1}, 3) == three);
  CHECK_THROWS_AS(encode_labels(std::vector<int>{3}, 2), Error);
  CHECK_THROWS_AS(encode_labels(std::vector<int>{-1}, 2), Error);
}

TEST_CASE("build_hidden_layer") {
  ElmModel model = make_elm(3, {.hidden_nodes = 4, .seed = 1});
  model.input_weights.setZero();
  model.biases.setZero();
  const auto h = build_hidden_layer(Eigen::MatrixXd::Random(5, 3), model);
  CHECK(h.rows() == 5);
  CHECK(h.cols() == 4);
  CHECK((h.array() == 0.5).all());

  const auto x = random_unit(2, 20, 7);
  const auto a = make_elm(7, {.hidden_nodes = 100, .seed = 99});
  const auto b = make_elm(7, {.hidden_nodes = 100, .seed = 99});
  CHECK(build_hidden_layer(x, a).rows() == 20);
  CHECK(build_hidden_layer(x, a).cols() == 100);
  CHECK(build_hidden_layer(x, a) == build_hidden_layer(x, b));
  CHECK(a.input_weights.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(a.biases.cwiseAbs().maxCoeff() <= 1.0);
  CHECK_THROWS_AS(build_hidden_layer(random_unit(2, 3, 6), a), Error);
}

TEST_CASE("activations") {
  CHECK(activate(Activation::Sigmoid, 0.0) == 0.5);
  CHECK(activate(Activation::Tanh, 0.0) == 0.0);
  CHECK(activate(Activation::Relu, -2.0) == 0.0);
  CHECK(activate(Activation::Relu, 2.0) == 2.0);
  CHECK(parse_activation("tanh") == Activation::Tanh);
  CHECK_THROWS_AS(parse_activation("softplus"), Error);
}

TEST_CASE("solve_output_weights worked examples") {
  Eigen::MatrixXd z(3, 2);
  z << 1, -1, -1, 1, 1, -1;
  CHECK((solve_output_weights(Eigen::MatrixXd::Identity(3, 3), z, kRidgeOff) - z)
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Eigen::MatrixXd h(2, 1), zz(2, 1);
  h << 1, 1;
  zz << 1, 3;
  CHECK(solve_output_weights(h, zz, kRidgeOff)(0, 0) == doctest::Approx(2.0).epsilon(1e-14));

  Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  CHECK(solve_output_weights(one, one, 1.0)(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("pseudoinverse gives the minimum-norm solution on rank-deficient H") {
  Eigen::MatrixXd h(2, 2), z(2, 1);
  h << 1, 1, 1, 1;
  z << 2, 2;
  const auto beta = solve_output_weights(h, z, kRidgeOff);
  CHECK(beta(0, 0) == doctest::Approx(1.0));
  CHECK(beta(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("property: ridge solve satisfies first-order optimality (both system orientations)") {
  for (int trial = 0; trial < 10; ++trial) {
    for (auto [n, l] : {std::pair{20, 200}, std::pair{60, 25}}) {
      const auto x = random_unit(100 + trial, n, 8);
      const auto model = make_elm(8, {.hidden_nodes = l, .seed = static_cast<std::uint64_t>(trial)});
      const auto h = build_hidden_layer(x, model);
      const auto z = encode_labels(random_labels(trial, n), 2);
      for (double c : {1.0, 1e3, 1e6}) {
        const auto beta = solve_output_weights(h, z, c);
        const double scale = std::max(1.0, (h.transpose() * z).cwiseAbs().maxCoeff());
        CHECK(ridge_gradient_maxnorm(h, z, beta, c) <= 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("property: pseudoinverse interpolates when N <= L") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_unit(200 + trial, 15, 5);
    const auto model = make_elm(5, {.hidden_nodes = 40, .seed = static_cast<std::uint64_t>(trial)});
    const auto h = build_hidden_layer(x, model);
    const auto z = encode_labels(random_labels(trial, 15), 2);
    const auto beta = solve_output_weights(h, z, kRidgeOff);
    CHECK((h * beta - z).norm() <= 1e-6 * z.norm());
  }
}

TEST_CASE("elm_train / elm_predict") {
  int perfect = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = random_unit(seed + 1000, 20, 10);
    const auto y = random_labels(seed, 20);
    const auto model = elm_train(x, y, 2, {.hidden_nodes = 200, .seed = seed});
    perfect += elm_predict(model, x) == y;
  }
  CHECK(perfect >= 19);

  // One neuron without an output bias can only split the line where its activation changes
  // sign. Sigmoid never does, so every point lands in one class; tanh separates exactly
  // when the zero crossing -b/w falls in the gap between the classes.
  Eigen::MatrixXd x1(8, 1);
  x1 << -1.0, -0.9, -0.8, -0.7, 0.7, 0.8, 0.9, 1.0;
  const std::vector<int> y1{0, 0, 0, 0, 1, 1, 1, 1};
  int crossing_in_gap = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto model = elm_train(x1, y1, 2, {.hidden_nodes = 1, .activation = Activation::Tanh, .seed = seed});
    const double crossing = -model.biases(0) / model.input_weights(0, 0);
    const bool in_gap = std::abs(crossing) < 0.7;
    crossing_in_gap += in_gap;
    if (in_gap) CHECK(elm_predict(model, x1) == y1);
    const auto flat = elm_predict(elm_train(x1, y1, 2, {.hidden_nodes = 1, .seed = seed}), x1);
    CHECK(std::all_of(flat.begin(), flat.end(), [&](int c) { return c == flat[0]; }));
  }
  CHECK(crossing_in_gap > 0);

  CHECK_THROWS_AS(elm_train(Eigen::MatrixXd(0, 3), std::vector<int>{}, 2, {}), Error);
  CHECK_THROWS_AS(elm_predict(make_elm(3, {.hidden_nodes = 2}), Eigen::MatrixXd::Zero(1, 3)), Error);
}

TEST_CASE("argmax ties and scaling invariance") {
  Eigen::MatrixXd s(3, 2);
  s << 0.9, -0.9, 0.5, 0.5, -1, 2;
  CHECK(argmax_rows(s) == std::vector<int>{0, 0, 1});

  const auto x = random_unit(5, 30, 4);
  const auto y = random_labels(5, 30);
  auto model = elm_train(x, y, 2, {.hidden_nodes = 50, .seed = 5});
  const auto before = elm_predict(model, x);
  *model.output_weights *= 3.7;
  CHECK(elm_predict(model, x) == before);
}

TEST_CASE("model file round trip is bitwise") {
  const auto x = random_unit(8, 25, 6);
  const auto y = random_labels(8, 25);
  for (double c : {kDefaultRidgeC, kRidgeOff}) {
    const auto model = elm_train(x, y, 2, {.hidden_nodes = 30, .activation = Activation::Tanh,
                                           .ridge_c = c, .seed = 77});
    std::stringstream ss;
    write_elm(ss, model);
    const auto back = read_elm(ss);
    CHECK(back.input_weights == model.input_weights);
    CHECK(back.biases == model.biases);
    CHECK(*back.output_weights == *model.output_weights);
    CHECK(back.activation == Activation::Tanh);
    CHECK(back.ridge_c == c);
    CHECK(back.seed == 77);
    std::stringstream again;
    write_elm(again, back);
    CHECK(again.str() == ss.str());
  }
}
