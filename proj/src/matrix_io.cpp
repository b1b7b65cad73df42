#include "helmfc/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "helmfc/error.hpp"

namespace helmfc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, const std::filesystem::path& path, std::size_t row,
                  std::size_t col) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
    std::ostringstream os;
    os << path.string() << ": non-numeric cell '" << cell << "' at row " << row + 1
       << ", column " << col + 1;
    throw Error(ErrorKind::Parse, os.str());
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

Eigen::MatrixXd read_delimited_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view sv = line;
    if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
    if (trim(sv).empty()) continue;
    const char delim = sv.find(',') != std::string_view::npos ? ',' : '\t';
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      auto pos = sv.find(delim, start);
      auto cell = sv.substr(start, pos == std::string_view::npos ? sv.npos : pos - start);
      row.push_back(parse_cell(cell, path, rows.size(), row.size()));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << path.string() << ": row " << rows.size() + 1 << " has " << row.size()
         << " columns, expected " << rows.front().size();
      throw Error(ErrorKind::Parse, os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, path.string() + ": empty matrix file");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Eigen::VectorXd read_vector_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    auto sv = trim(line);
    if (sv.empty()) continue;
    values.push_back(parse_cell(sv, path, values.size(), 0));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_delimited_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                            char delim) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << delim;
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_delimited_matrix(const std::filesystem::path& path,
                            const Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>& m,
                            char delim) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << delim;
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_vector_file(const std::filesystem::path& path, const Eigen::VectorXd& v) {
  auto out = open_output(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

void write_vector_file(const std::filesystem::path& path, const std::vector<int>& v) {
  auto out = open_output(path);
  for (int x : v) out << x << '\n';
}

}  // namespace helmfc
