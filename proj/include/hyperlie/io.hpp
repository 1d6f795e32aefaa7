#pragma once

// Plain-text matrix format:
//   n=<int>
//   n+2 rows of n+2 whitespace-separated decimals

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "hyperlie/config.hpp"

namespace hyperlie {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_matrix(std::ostream& out, const Matrix& mat) {
  const auto size = mat.rows();
  out << "n=" << size - 2 << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      if (j) out << ' ';
      out << mat(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

inline std::string format_matrix(const Matrix& mat) {
  std::ostringstream out;
  write_matrix(out, mat);
  return out.str();
}

inline Matrix read_matrix(std::istream& in) {
  std::string header;
  while (std::getline(in, header)) {
    if (header.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  const auto start = header.find_first_not_of(" \t");
  if (start == std::string::npos || header.compare(start, 2, "n=") != 0)
    throw ParseError("matrix file must start with a line 'n=<int>'");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(header.substr(start + 2), &used);
  } catch (const std::exception&) {
    throw ParseError("cannot parse dimension from '" + header + "'");
  }
  if (n < 1) throw ParseError("dimension n must be >= 1");
  Matrix mat(n + 2, n + 2);
  for (int i = 0; i < n + 2; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(n + 2) + " rows");
    std::istringstream row(line);
    for (int j = 0; j < n + 2; ++j) {
      if (!(row >> mat(i, j)))
        throw ParseError("row " + std::to_string(i + 1) + ": expected " + std::to_string(n + 2) +
                         " numbers");
    }
    std::string extra;
    if (row >> extra) throw ParseError("row " + std::to_string(i + 1) + ": trailing data");
  }
  for (std::string line; std::getline(in, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      throw ParseError("unexpected data after the last matrix row");
  return mat;
}

inline Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

}  // namespace hyperlie
