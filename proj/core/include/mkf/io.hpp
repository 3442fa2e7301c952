#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace mkf {

// Plain-text matrix: one point per row, whitespace- or comma-separated
// reals, '#' starts a comment line. Throws ParseError / DimMismatch with
// 1-based line numbers.
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::string& path);

// One value per line, full double precision.
void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m);
void write_labels_file(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels_file(const std::string& path);

// Parses a single line of D reals; line_number is for error reporting only.
Eigen::VectorXd parse_point_line(const std::string& line, long line_number,
                                 long expected_dim /* -1 = any */);

}  // namespace mkf
