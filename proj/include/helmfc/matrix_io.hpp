#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace helmfc {

/// Reads a comma- or tab-delimited numeric matrix without header. Each line is one
/// row; the delimiter is detected per line. Non-finite values are returned as-is
/// and left to the caller to reject.
Eigen::MatrixXd read_delimited_matrix(const std::filesystem::path& path);

/// One value per line.
Eigen::VectorXd read_vector_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

void write_delimited_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                            char delim = ',');
void write_delimited_matrix(const std::filesystem::path& path,
                            const Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>& m,
                            char delim = ',');
void write_vector_file(const std::filesystem::path& path, const Eigen::VectorXd& v);
void write_vector_file(const std::filesystem::path& path, const std::vector<int>& v);

}  // namespace helmfc
