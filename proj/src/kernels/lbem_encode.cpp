#include <vector>

#include "helmfc/lbem.hpp"

namespace helmfc::kernels {

namespace {

// `bits` is scratch of length 2M-2.
void encode_one(const Eigen::MatrixXd& series, int w, Eigen::Index col, std::uint8_t* bits,
                CodeMatrix& out) {
  const Eigen::Index m = series.rows();
  encode_column_unchecked(series.col(col).data(), m, bits);
  const Eigen::Index x = code_vector_length(m);
  for (Eigen::Index g = 0; g < out.rows(); ++g) {
    int code = 0;
    for (int b = 0; b < w; ++b) {
      const Eigen::Index idx = g * w + b;
      code = (code << 1) | (idx < x && bits[idx] ? 1 : 0);
    }
    out(g, col) = code;
  }
}

}  // namespace

CodeMatrix lbem_encode_columns(const Eigen::MatrixXd& series, int group_width, int jobs) {
  const Eigen::Index n = series.cols();
  CodeMatrix out(group_count(series.rows(), group_width), n);
#pragma omp parallel num_threads(resolve_jobs(jobs))
  {
    std::vector<std::uint8_t> bits(code_vector_length(series.rows()));
#pragma omp for schedule(static)
    for (Eigen::Index j = 0; j < n; ++j) encode_one(series, group_width, j, bits.data(), out);
  }
  return out;
}

namespace serial {

CodeMatrix lbem_encode_columns(const Eigen::MatrixXd& series, int group_width) {
  CodeMatrix out(group_count(series.rows(), group_width), series.cols());
  std::vector<std::uint8_t> bits(code_vector_length(series.rows()));
  for (Eigen::Index j = 0; j < series.cols(); ++j)
    encode_one(series, group_width, j, bits.data(), out);
  return out;
}

}  // namespace serial
}  // namespace helmfc::kernels
