// Serial reference vs OpenMP kernels, and cross-validation at different job counts.
// Thread count for the parallel variants is the benchmark argument.

#include <random>

#include <benchmark/benchmark.h>

#include "helmfc/eval.hpp"
#include "helmfc/features.hpp"
#include "helmfc/kernels.hpp"

using namespace helmfc;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

// CC400-sized subject: 392 ROIs, 230 time points.
Eigen::MatrixXd unit_columns() {
  Eigen::MatrixXd m = random_matrix(230, 392);
  m.rowwise() -= m.colwise().mean();
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) /= m.col(j).norm();
  return m;
}

void BM_GramSerial(benchmark::State& state) {
  const auto u = unit_columns();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::unit_column_gram(u));
}
void BM_GramParallel(benchmark::State& state) {
  const auto u = unit_columns();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::unit_column_gram(u, state.range(0)));
}

void BM_LbemSerial(benchmark::State& state) {
  const auto s = random_matrix(392, 230);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::lbem_encode_columns(s, 6));
}
void BM_LbemParallel(benchmark::State& state) {
  const auto s = random_matrix(392, 230);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::lbem_encode_columns(s, 6, state.range(0)));
}

void BM_ActivateSerial(benchmark::State& state) {
  const auto pre = random_matrix(244, 1000);
  const Eigen::VectorXd bias = random_matrix(1000, 1, 2).col(0);
  for (auto _ : state) {
    Eigen::MatrixXd h = pre;
    kernels::serial::bias_activate(h, bias, Activation::Sigmoid);
    benchmark::DoNotOptimize(h.data());
  }
}
void BM_ActivateParallel(benchmark::State& state) {
  const auto pre = random_matrix(244, 1000);
  const Eigen::VectorXd bias = random_matrix(1000, 1, 2).col(0);
  for (auto _ : state) {
    Eigen::MatrixXd h = pre;
    kernels::bias_activate(h, bias, Activation::Sigmoid, state.range(0));
    benchmark::DoNotOptimize(h.data());
  }
}

void BM_CrossValidation(benchmark::State& state) {
  static const auto data = [] {
    const auto ds = generate_synthetic({40, 30, 100, 1.0, 3});
    FeatureOptions f;
    f.path = FeaturePath::ConnectivityVector;
    return std::make_pair(extract_features(ds, f, 1), ds.binary_labels());
  }();
  ClassifierConfig cfg;
  cfg.helm.autoencoder.hidden_nodes = 100;
  cfg.helm.autoencoder.max_iter = 50;
  cfg.helm.elm.hidden_nodes = 300;
  CvOptions opt;
  opt.repeats = 2;
  opt.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cv(data.first, data.second, cfg, opt));
}

}  // namespace

BENCHMARK(BM_GramSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LbemSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LbemParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ActivateSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ActivateParallel)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CrossValidation)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
