#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace helmfc {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Child seed from a master seed and an ordered list of tags (repeat, fold, layer, ...).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

/// Uniform double in [0, 1) built from the top 53 bits, so results do not depend on
/// the standard library's distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_pm1(Rng& rng) { return 2.0 * uniform01(rng) - 1.0; }

Eigen::MatrixXd uniform_pm1_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Eigen::VectorXd uniform_pm1_vector(Eigen::Index size, Rng& rng);

}  // namespace helmfc
