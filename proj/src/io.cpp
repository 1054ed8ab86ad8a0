#include "qldpc/io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "qldpc/errors.hpp"

namespace qldpc {

void write_matrix(std::ostream& os, const SparseBitMatrix& m) {
  os << m.n_rows() << ' ' << m.n_cols() << '\n';
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    bool first = true;
    for (Index c : m.row(r)) {
      if (!first) os << ' ';
      os << c;
      first = false;
    }
    os << '\n';
  }
}

SparseBitMatrix read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParameterError("matrix file: missing header");
  std::istringstream header(line);
  std::size_t n_rows = 0, n_cols = 0;
  if (!(header >> n_rows >> n_cols)) throw ParameterError("matrix file: bad header '" + line + "'");
  std::vector<std::vector<Index>> rows(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    // A missing trailing line is a zero row.
    if (!std::getline(is, line)) line.clear();
    std::istringstream in(line);
    long long c;
    while (in >> c) {
      if (c < 0 || static_cast<std::size_t>(c) >= n_cols) {
        throw DimensionError("matrix file: column " + std::to_string(c) + " out of range in row " +
                             std::to_string(r));
      }
      rows[r].push_back(static_cast<Index>(c));
    }
    if (!in.eof()) throw ParameterError("matrix file: unreadable entry in row " + std::to_string(r));
  }
  return SparseBitMatrix(n_rows, n_cols, std::move(rows));
}

void save_matrix(const std::filesystem::path& path, const SparseBitMatrix& m) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot write " + path.string());
  write_matrix(os, m);
}

SparseBitMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot read " + path.string());
  return read_matrix(is);
}

std::vector<Index> read_support_list(std::istream& is) {
  std::vector<Index> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream in(line);
    long long v;
    if (!(in >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParameterError("support list: bad line " + std::to_string(line_no));
    }
    if (v < 0) throw ParameterError("support list: negative index on line " + std::to_string(line_no));
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

std::vector<Index> load_support_list(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot read " + path.string());
  return read_support_list(is);
}

}  // namespace qldpc
