#include <algorithm>
#include <map>

#include "helmfc/error.hpp"
#include "helmfc/eval.hpp"
#include "helmfc/random.hpp"

namespace helmfc {

namespace {

// Fisher-Yates with a plain modulo draw; independent of std::shuffle's implementation.
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng() % i;
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::vector<std::size_t> FoldAssignment::test_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (int f : fold_of) ++sizes[f];
  return sizes;
}

FoldAssignment kfold_split(std::span<const int> labels, int k, std::uint64_t seed,
                           bool stratified) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be >= 2");
  if (labels.size() < static_cast<std::size_t>(k))
    throw Error(ErrorKind::InvalidArgument, "k = " + std::to_string(k) + " exceeds the " +
                                                std::to_string(labels.size()) + " subjects");
  FoldAssignment fa;
  fa.k = k;
  fa.seed = seed;
  fa.stratified = stratified;
  fa.fold_of.assign(labels.size(), -1);

  Rng rng(seed);
  std::size_t counter = 0;
  auto deal = [&](std::vector<std::size_t> idx) {
    shuffle(idx, rng);
    for (auto i : idx) fa.fold_of[i] = static_cast<int>(counter++ % k);
  };

  if (!stratified) {
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    deal(std::move(all));
    return fa;
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::size_t> pooled;
  for (auto& [cls, idx] : by_class) {
    if (idx.size() < static_cast<std::size_t>(k)) {
      fa.warnings.push_back("class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                            " subjects (< k = " + std::to_string(k) +
                            "); assigned without stratification");
      pooled.insert(pooled.end(), idx.begin(), idx.end());
      continue;
    }
    deal(idx);
  }
  if (!pooled.empty()) {
    std::sort(pooled.begin(), pooled.end());
    deal(std::move(pooled));
  }
  return fa;
}

std::vector<std::optional<double>> per_class_accuracy(std::span<const int> predicted,
                                                      std::span<const int> actual, int classes) {
  if (predicted.size() != actual.size())
    throw Error(ErrorKind::DimensionMismatch, "predicted and actual lengths differ");
  std::vector<std::size_t> total(classes, 0), correct(classes, 0);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] < 0 || actual[i] >= classes)
      throw Error(ErrorKind::InvalidArgument, "label outside class set");
    ++total[actual[i]];
    if (predicted[i] == actual[i]) ++correct[actual[i]];
  }
  std::vector<std::optional<double>> out(classes);
  for (int c = 0; c < classes; ++c)
    if (total[c] > 0) out[c] = static_cast<double>(correct[c]) / static_cast<double>(total[c]);
  return out;
}

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& x) {
  if (x.rows() < 1) throw Error(ErrorKind::InvalidArgument, "cannot fit scaler on zero rows");
  return {x.colwise().minCoeff().transpose(), x.colwise().maxCoeff().transpose()};
}

Eigen::MatrixXd MinMaxScaler::transform(const Eigen::MatrixXd& x) const {
  if (x.cols() != min.size())
    throw Error(ErrorKind::DimensionMismatch, "scaler expects " + std::to_string(min.size()) +
                                                  " features, got " + std::to_string(x.cols()));
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double range = max(j) - min(j);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out(i, j) = range > 0.0 ? std::clamp((x(i, j) - min(j)) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

}  // namespace helmfc
