#include "helmfc/lbem.hpp"

#include <cmath>

#include "helmfc/error.hpp"

namespace helmfc {

namespace {

void check_width(int w) {
  if (w < 1 || w > kMaxGroupWidth)
    throw Error(ErrorKind::InvalidArgument,
                "group width must be in [1, 16], got " + std::to_string(w));
}

}  // namespace

void encode_column_unchecked(const double* p, Eigen::Index m, std::uint8_t* bits) {
  for (Eigen::Index i = 1; i < m; ++i) {
    bits[2 * i - 2] = p[i] <= p[i - 1];
    if (i + 1 < m) bits[2 * i - 1] = p[i] <= p[i + 1];
  }
  bits[2 * m - 3] = p[m - 1] <= p[0];
}

BinaryCodeVector encode_column(std::span<const double> p) {
  const auto m = static_cast<Eigen::Index>(p.size());
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "LBEM needs at least 2 values per column");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!std::isfinite(p[i]))
      throw Error(ErrorKind::NonFinite, "non-finite value at position " + std::to_string(i + 1));
  BinaryCodeVector bits(code_vector_length(m));
  encode_column_unchecked(p.data(), m, bits.data());
  return bits;
}

std::vector<int> pack_groups(std::span<const std::uint8_t> bits, int w) {
  check_width(w);
  const std::size_t groups = (bits.size() + w - 1) / w;
  std::vector<int> codes(groups, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    int code = 0;
    for (int b = 0; b < w; ++b) {
      const std::size_t idx = g * w + b;
      code = (code << 1) | (idx < bits.size() && bits[idx] ? 1 : 0);
    }
    codes[g] = code;
  }
  return codes;
}

BinaryCodeVector unpack_groups(std::span<const int> codes, int w, std::size_t bit_count) {
  check_width(w);
  if (bit_count > codes.size() * static_cast<std::size_t>(w))
    throw Error(ErrorKind::InvalidArgument, "bit_count exceeds packed capacity");
  BinaryCodeVector bits(bit_count);
  for (std::size_t idx = 0; idx < bit_count; ++idx) {
    const int code = codes[idx / w];
    const int shift = w - 1 - static_cast<int>(idx % w);
    bits[idx] = (code >> shift) & 1;
  }
  return bits;
}

std::vector<int> EncodedFeatures::flat() const {
  return {z_matrix.data(), z_matrix.data() + z_matrix.size()};
}

Eigen::VectorXd EncodedFeatures::scaled() const {
  const double denom = static_cast<double>((1 << group_width) - 1);
  Eigen::VectorXd v(z_matrix.size());
  for (Eigen::Index k = 0; k < z_matrix.size(); ++k) v(k) = z_matrix.data()[k] / denom;
  return v;
}

EncodedFeatures encode_subject(const TimeSeriesMatrix& ts, int w, int jobs) {
  check_width(w);
  if (ts.m() < 2) throw Error(ErrorKind::InvalidArgument, "LBEM needs at least 2 ROIs");
  if (!ts.data.allFinite())
    throw Error(ErrorKind::NonFinite, "subject " + ts.subject_id + ": non-finite time series");
  return {ts.subject_id, kernels::lbem_encode_columns(ts.data, w, jobs), w};
}

}  // namespace helmfc
