#include "mkf/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "mkf/errors.hpp"

namespace mkf {

namespace {

bool is_blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Eigen::VectorXd parse_point_line(const std::string& line, long line_number,
                                 long expected_dim) {
  std::string cleaned = line;
  for (char& c : cleaned) {
    if (c == ',') c = ' ';
  }
  std::istringstream ss(cleaned);
  std::vector<double> values;
  std::string token;
  while (ss >> token) {
    try {
      size_t pos = 0;
      values.push_back(std::stod(token, &pos));
      if (pos != token.size())
        throw ParseError(line_number, "bad number '" + token + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError(line_number, "bad number '" + token + "'");
    } catch (const std::out_of_range&) {
      throw ParseError(line_number, "number out of range '" + token + "'");
    }
  }
  if (values.empty()) throw ParseError(line_number, "empty point");
  if (expected_dim >= 0 && static_cast<long>(values.size()) != expected_dim) {
    throw DimMismatch(line_number, values.size(), expected_dim);
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  long line_number = 0;
  long dim = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_blank_or_comment(line)) continue;
    Eigen::VectorXd p = parse_point_line(line, line_number, dim);
    if (dim < 0) dim = p.size();
    rows.push_back(std::move(p));
  }
  if (rows.empty()) throw ParseError(line_number, "no data rows");
  Eigen::MatrixXd m(rows.size(), dim);
  for (size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i];
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_matrix(in);
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  out << std::setprecision(17);
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_labels_file(const std::string& path,
                       const std::vector<int>& labels) {
  std::ofstream out(path);
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::vector<int> labels;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_blank_or_comment(line)) continue;
    try {
      labels.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw ParseError(line_number, "bad label '" + line + "'");
    }
  }
  return labels;
}

}  // namespace mkf
