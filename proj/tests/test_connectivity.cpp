#include <cmath>
#include <random>

#include "doctest.h"
#include "helmfc/connectivity.hpp"
#include "helmfc/error.hpp"
#include "oracles/pearson.hpp"

using namespace helmfc;

namespace {

TimeSeriesMatrix random_series(std::uint64_t seed, int m, int n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd d(m, n);
  for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = g(rng);
  return {"s", d};
}


std::vector<double> row_values(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::vector<double> out(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[j] = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("correlation worked examples") {
  Eigen::MatrixXd d(4, 4);
  d << 1, 2, 3, 4,      //
      1, 3, 2, 4,       //
      1, 2, 3, 4,       //
      -1, -2, -3, -4;
  const auto map = correlation_matrix({"s", d});
  CHECK(map.matrix(0, 1) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(map.matrix(0, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(map.matrix(0, 3) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(map.matrix(1, 1) == 1.0);
  CHECK_FALSE(map.z_transformed);
}

TEST_CASE("correlation matches textbook Pearson and invariants hold") {
  const auto ts = random_series(1, 12, 40);
  const auto map = correlation_matrix(ts);
  for (int i = 0; i < 12; ++i) {
    CHECK(map.matrix(i, i) == 1.0);
    for (int j = 0; j < 12; ++j) {
      CHECK(map.matrix(i, j) == map.matrix(j, i));
      CHECK(std::abs(map.matrix(i, j)) <= 1.0);
      if (i != j)
        CHECK(map.matrix(i, j) ==
              doctest::Approx(oracle::pearson(row_values(ts.data, i), row_values(ts.data, j)))
                  .epsilon(1e-12));
    }
  }
}

TEST_CASE("property: positive affine rescaling of a row leaves correlations unchanged") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto ts = random_series(100 + trial, 8, 30);
    const auto before = correlation_matrix(ts).matrix;
    const auto i = static_cast<Eigen::Index>(rng() % 8);
    ts.data.row(i) = ts.data.row(i) * u(rng) + Eigen::RowVectorXd::Constant(30, u(rng) - 5.0);
    const auto after = correlation_matrix(ts).matrix;
    CHECK((after - before).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("correlation errors and zero-variance policy") {
  Eigen::MatrixXd d(3, 5);
  d << 1, 2, 3, 4, 5,  //
      7, 7, 7, 7, 7,   //
      5, 3, 4, 1, 2;
  try {
    correlation_matrix({"s", d});
    FAIL("expected zero-variance error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVariance);
    CHECK(std::string(e.what()).find("ROI 2") != std::string::npos);
  }
  const auto map = correlation_matrix({"s", d}, ZeroVariancePolicy::AsZero);
  CHECK(map.matrix(0, 1) == 0.0);
  CHECK(map.matrix(1, 2) == 0.0);
  CHECK(map.matrix(1, 1) == 1.0);
  CHECK(map.matrix(0, 2) != 0.0);

  CHECK_THROWS_AS(correlation_matrix({"s", Eigen::MatrixXd::Random(3, 2)}), Error);
}

TEST_CASE("fisher_z") {
  ConnectivityMap map{"s", Eigen::MatrixXd(3, 3), false};
  map.matrix << 1, 0, 0.5,  //
      0, 1, 1,              //
      0.5, 1, 1;
  const auto z = fisher_z(map);
  CHECK(z.z_transformed);
  CHECK(z.matrix(0, 1) == 0.0);
  CHECK(z.matrix(0, 2) == doctest::Approx(0.54930614433405489).epsilon(1e-15));
  CHECK(z.matrix(1, 2) == std::atanh(1.0 - 1e-7));
  CHECK(std::isfinite(z.matrix(1, 2)));
  for (int i = 0; i < 3; ++i) CHECK(z.matrix(i, i) == 0.0);
  CHECK_THROWS_AS(fisher_z(z), Error);
}

TEST_CASE("property: fisher_z strictly monotone on (-1, 1)") {
  const int n = 2001;
  ConnectivityMap map{"s", Eigen::MatrixXd::Identity(2, 2), false};
  double prev = -INFINITY;
  for (int k = 1; k < n; ++k) {
    const double r = -1.0 + 2.0 * k / n;
    map.matrix(0, 1) = map.matrix(1, 0) = r;
    const double z = fisher_z(map).matrix(0, 1);
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("vectorize_upper ordering, lengths and inverse") {
  ConnectivityMap map{"s", Eigen::MatrixXd(3, 3), false};
  map.matrix << 1, 0.1, 0.2,  //
      0.1, 1, 0.3,            //
      0.2, 0.3, 1;
  const auto v = vectorize_upper(map);
  REQUIRE(v.values.size() == 3);
  CHECK(v.values(0) == 0.1);
  CHECK(v.values(1) == 0.2);
  CHECK(v.values(2) == 0.3);
  CHECK(upper_triangle_size(116) == 6670);
  CHECK(upper_triangle_size(392) == 76636);

  const auto big = correlation_matrix(random_series(4, 116, 20));
  const auto vec = vectorize_upper(big);
  CHECK(vec.values.size() == 6670);
  CHECK(unvectorize_upper(vec.values, 116, 1.0) == big.matrix);
}
