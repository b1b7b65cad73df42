#include "helmfc/model_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "helmfc/error.hpp"

namespace helmfc::model_io {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw Error(ErrorKind::Parse, "model file: " + msg);
}

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  fail("unexpected end of file");
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view token) {
  Int v{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    fail("bad integer '" + std::string(token) + "'");
  return v;
}

}  // namespace

std::string hex_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, ptr);
}

double parse_hex_double(std::string_view token) {
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v, std::chars_format::hex);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    fail("bad hex float '" + std::string(token) + "'");
  return v;
}

void write_key(std::ostream& out, std::string_view key, std::string_view value) {
  out << key << ' ' << value << '\n';
}

void write_key(std::ostream& out, std::string_view key, double value) {
  out << key << ' ' << hex_double(value) << '\n';
}

void write_key(std::ostream& out, std::string_view key, std::int64_t value) {
  out << key << ' ' << value << '\n';
}

void write_matrix(std::ostream& out, std::string_view name, const Eigen::MatrixXd& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << hex_double(m(i, j));
    }
    out << '\n';
  }
}

void write_vector(std::ostream& out, std::string_view name, const Eigen::VectorXd& v) {
  out << "vector " << name << ' ' << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << hex_double(v(i));
  }
  out << '\n';
}

void expect_line(std::istream& in, std::string_view expected) {
  auto line = next_line(in);
  if (line != expected) fail("expected '" + std::string(expected) + "', got '" + line + "'");
}

std::string read_key(std::istream& in, std::string_view key) {
  auto line = next_line(in);
  auto parts = split(line);
  if (parts.size() != 2 || parts[0] != key) fail("expected key '" + std::string(key) + "'");
  return std::string(parts[1]);
}

double read_key_double(std::istream& in, std::string_view key) {
  return parse_hex_double(read_key(in, key));
}

std::int64_t read_key_int(std::istream& in, std::string_view key) {
  return parse_int<std::int64_t>(read_key(in, key));
}

std::uint64_t read_key_uint(std::istream& in, std::string_view key) {
  return parse_int<std::uint64_t>(read_key(in, key));
}

Eigen::MatrixXd read_matrix(std::istream& in, std::string_view name) {
  auto header = next_line(in);
  auto parts = split(header);
  if (parts.size() != 4 || parts[0] != "matrix" || parts[1] != name)
    fail("expected matrix '" + std::string(name) + "'");
  const auto rows = parse_int<Eigen::Index>(parts[2]);
  const auto cols = parse_int<Eigen::Index>(parts[3]);
  Eigen::MatrixXd m(rows, cols);
  std::string line;
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) fail("truncated matrix '" + std::string(name) + "'");
    auto tokens = split(line);
    if (static_cast<Eigen::Index>(tokens.size()) != cols)
      fail("matrix '" + std::string(name) + "' row " + std::to_string(i) + " has wrong width");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = parse_hex_double(tokens[j]);
  }
  return m;
}

Eigen::VectorXd read_vector(std::istream& in, std::string_view name) {
  auto header = next_line(in);
  auto parts = split(header);
  if (parts.size() != 3 || parts[0] != "vector" || parts[1] != name)
    fail("expected vector '" + std::string(name) + "'");
  const auto size = parse_int<Eigen::Index>(parts[2]);
  std::string line;
  if (!std::getline(in, line)) fail("truncated vector '" + std::string(name) + "'");
  auto tokens = split(line);
  if (static_cast<Eigen::Index>(tokens.size()) != size)
    fail("vector '" + std::string(name) + "' has wrong length");
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = parse_hex_double(tokens[i]);
  return v;
}

std::string peek_token(std::istream& in) {
  auto pos = in.tellg();
  std::string line;
  std::string token;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    if (ss >> token) break;
  }
  in.clear();
  in.seekg(pos);
  return token;
}

}  // namespace helmfc::model_io
