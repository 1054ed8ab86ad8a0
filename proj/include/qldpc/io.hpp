#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

/// Matrix text format: `n_rows n_cols`, then one line per row with its
/// 0-based support (an empty line for a zero row).
void write_matrix(std::ostream& os, const SparseBitMatrix& m);
SparseBitMatrix read_matrix(std::istream& is);

void save_matrix(const std::filesystem::path& path, const SparseBitMatrix& m);
SparseBitMatrix load_matrix(const std::filesystem::path& path);

/// One index per line; blank lines are ignored.
std::vector<Index> read_support_list(std::istream& is);
std::vector<Index> load_support_list(const std::filesystem::path& path);

}  // namespace qldpc
