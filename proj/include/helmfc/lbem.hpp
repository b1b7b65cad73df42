#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "helmfc/dataset.hpp"
#include "helmfc/kernels.hpp"

namespace helmfc {

// Local binary encoding. Each time-point column p (length M) becomes 2M-2 bits:
//   bit 2(i-1)-1 = [p_i <= p_{i-1}]   for 2 <= i <= M
//   bit 2(i-1)   = [p_i <= p_{i+1}]   for 2 <= i <= M-1
//   bit 2M-2     = [p_M <= p_1]
// (1-based positions). Bits are then packed into w-bit codes, MSB first.

using BinaryCodeVector = std::vector<std::uint8_t>;
using kernels::CodeMatrix;

inline constexpr int kDefaultGroupWidth = 6;
inline constexpr int kMaxGroupWidth = 16;

constexpr Eigen::Index code_vector_length(Eigen::Index m) { return 2 * m - 2; }
constexpr Eigen::Index group_count(Eigen::Index m, int w) {
  return (code_vector_length(m) + w - 1) / w;
}

BinaryCodeVector encode_column(std::span<const double> p);

/// No validation; writes 2M-2 bits to `bits`. Shared by the kernels.
void encode_column_unchecked(const double* p, Eigen::Index m, std::uint8_t* bits);

std::vector<int> pack_groups(std::span<const std::uint8_t> bits, int w);

/// Inverse of pack_groups; `bit_count` trims the right padding of the last group.
BinaryCodeVector unpack_groups(std::span<const int> codes, int w, std::size_t bit_count);

struct EncodedFeatures {
  std::string subject_id;
  CodeMatrix z_matrix;  // y×N
  int group_width = kDefaultGroupWidth;

  /// Column-major (time-major) flattening, length y·N.
  std::vector<int> flat() const;
  /// flat() divided by 2^w - 1, i.e. in [0, 1].
  Eigen::VectorXd scaled() const;
};

EncodedFeatures encode_subject(const TimeSeriesMatrix& ts, int w = kDefaultGroupWidth,
                               int jobs = 0);

}  // namespace helmfc
