#pragma once

// Line-oriented text serialization for trained models. Reals are written as hex
// floats so a save/load cycle reproduces every bit.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace helmfc::model_io {

std::string hex_double(double v);
double parse_hex_double(std::string_view token);

void write_key(std::ostream& out, std::string_view key, std::string_view value);
void write_key(std::ostream& out, std::string_view key, double value);
void write_key(std::ostream& out, std::string_view key, std::int64_t value);
void write_matrix(std::ostream& out, std::string_view name, const Eigen::MatrixXd& m);
void write_vector(std::ostream& out, std::string_view name, const Eigen::VectorXd& v);

/// Reads the next non-empty line and checks it equals `expected`.
void expect_line(std::istream& in, std::string_view expected);
std::string read_key(std::istream& in, std::string_view key);
double read_key_double(std::istream& in, std::string_view key);
std::int64_t read_key_int(std::istream& in, std::string_view key);
std::uint64_t read_key_uint(std::istream& in, std::string_view key);
Eigen::MatrixXd read_matrix(std::istream& in, std::string_view name);
Eigen::VectorXd read_vector(std::istream& in, std::string_view name);

/// Peeks at the next line's first token without consuming it.
std::string peek_token(std::istream& in);

}  // namespace helmfc::model_io
