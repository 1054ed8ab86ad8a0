#include "qldpc/gf2.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

#include "qldpc/errors.hpp"

namespace qldpc {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

// ---------------------------------------------------------------------------
// BitVector

BitVector::BitVector(std::size_t length) : length_(length), words_(words_for(length), 0) {}

BitVector BitVector::from_support(std::size_t length, std::span<const Index> support) {
  BitVector v(length);
  for (Index i : support) {
    if (i >= length) {
      throw DimensionError("support index " + std::to_string(i) + " out of range for length " +
                           std::to_string(length));
    }
    if (v.test(i)) {
      throw ParameterError("duplicate support index " + std::to_string(i));
    }
    v.flip(i);
  }
  return v;
}

BitVector BitVector::from_bits(std::initializer_list<int> bits) {
  BitVector v(bits.size());
  std::size_t i = 0;
  for (int b : bits) {
    if (b) v.flip(i);
    ++i;
  }
  return v;
}

std::size_t BitVector::weight() const {
  std::size_t w = 0;
  for (auto word : words_) w += std::popcount(word);
  return w;
}

bool BitVector::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

void BitVector::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= bit;
  } else {
    words_[i >> 6] &= ~bit;
  }
}

void BitVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::vector<Index> BitVector::support() const {
  std::vector<Index> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word) {
      out.push_back(static_cast<Index>(w * 64 + std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.length_ != length_) {
    throw DimensionError("xor of vectors with lengths " + std::to_string(length_) + " and " +
                         std::to_string(other.length_));
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::size_t BitVector::overlap(const BitVector& other) const {
  if (other.length_ != length_) {
    throw DimensionError("overlap of vectors with lengths " + std::to_string(length_) + " and " +
                         std::to_string(other.length_));
  }
  std::size_t w = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) w += std::popcount(words_[i] & other.words_[i]);
  return w;
}

std::string BitVector::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

// ---------------------------------------------------------------------------
// RowEchelon

RowEchelon::RowEchelon(std::size_t n_cols)
    : n_cols_(n_cols), words_(words_for(n_cols)), pivot_row_(n_cols, -1) {}

RowEchelon RowEchelon::of(const SparseBitMatrix& m) {
  RowEchelon e(m.n_cols());
  const std::size_t W = e.words_;
  const std::size_t n = m.n_rows();
  std::vector<std::uint64_t> rows(n * W);
  for (std::size_t r = 0; r < n; ++r) {
    auto src = m.row_words(r);
    std::copy(src.begin(), src.end(), rows.begin() + static_cast<std::ptrdiff_t>(r * W));
  }
  auto bit = [&](std::size_t r, std::size_t c) { return (rows[r * W + (c >> 6)] >> (c & 63)) & 1u; };

  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.n_cols() && rank < n; ++c) {
    std::size_t pivot = rank;
    while (pivot < n && !bit(pivot, c)) ++pivot;
    if (pivot == n) continue;
    if (pivot != rank) {
      std::swap_ranges(rows.begin() + static_cast<std::ptrdiff_t>(pivot * W),
                       rows.begin() + static_cast<std::ptrdiff_t>((pivot + 1) * W),
                       rows.begin() + static_cast<std::ptrdiff_t>(rank * W));
    }
    const std::uint64_t* prow = rows.data() + rank * W;
    const std::size_t first_word = c >> 6;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank || !bit(r, c)) continue;
      std::uint64_t* target = rows.data() + r * W;
      // Columns left of c are already zero in the pivot row.
      for (std::size_t w = first_word; w < W; ++w) target[w] ^= prow[w];
    }
    e.pivots_.push_back(static_cast<Index>(c));
    ++rank;
  }
  rows.resize(rank * W);
  e.rows_ = std::move(rows);
  for (std::size_t i = 0; i < e.pivots_.size(); ++i) e.pivot_row_[e.pivots_[i]] = static_cast<std::int32_t>(i);
  return e;
}

BitVector RowEchelon::row(std::size_t i) const {
  BitVector v(n_cols_);
  std::copy(row_ptr(i), row_ptr(i) + words_, v.words().begin());
  return v;
}

BitVector RowEchelon::reduce(const BitVector& v) const {
  if (v.length() != n_cols_) {
    throw DimensionError("vector of length " + std::to_string(v.length()) +
                         " reduced against basis with " + std::to_string(n_cols_) + " columns");
  }
  BitVector out = v;
  auto dst = out.words();
  // Pivot columns are zero in every other row, so the decision for each
  // pivot only depends on the original vector: walk its set bits.
  const auto src_words = v.words();
  for (std::size_t w = 0; w < src_words.size(); ++w) {
    for (std::uint64_t bits = src_words[w]; bits; bits &= bits - 1) {
      const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      const std::int32_t i = pivot_row_[c];
      if (i < 0) continue;
      const std::uint64_t* src = row_ptr(static_cast<std::size_t>(i));
      for (std::size_t k = 0; k < words_; ++k) dst[k] ^= src[k];
    }
  }
  return out;
}

bool RowEchelon::contains(const BitVector& v) const { return reduce(v).none(); }

bool RowEchelon::insert(const BitVector& v) {
  BitVector r = reduce(v);
  if (r.none()) return false;
  const auto support = r.words();
  std::size_t p = 0;
  for (std::size_t w = 0; w < words_; ++w) {
    if (support[w]) {
      p = w * 64 + static_cast<std::size_t>(std::countr_zero(support[w]));
      break;
    }
  }
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    std::uint64_t* row = row_ptr(i);
    if ((row[p >> 6] >> (p & 63)) & 1u) {
      for (std::size_t w = 0; w < words_; ++w) row[w] ^= support[w];
    }
  }
  rows_.insert(rows_.end(), support.begin(), support.end());
  pivot_row_[p] = static_cast<std::int32_t>(pivots_.size());
  pivots_.push_back(static_cast<Index>(p));
  return true;
}

// ---------------------------------------------------------------------------
// SparseBitMatrix

namespace detail {
struct EchelonCache {
  std::once_flag once;
  std::unique_ptr<RowEchelon> basis;
};
}  // namespace detail

SparseBitMatrix::SparseBitMatrix() : cache_(std::make_shared<detail::EchelonCache>()) {}

SparseBitMatrix::SparseBitMatrix(std::size_t n_rows, std::size_t n_cols,
                                 std::vector<std::vector<Index>> rows)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      words_per_row_(words_for(n_cols)),
      rows_(std::move(rows)),
      cache_(std::make_shared<detail::EchelonCache>()) {
  if (rows_.size() != n_rows_) {
    throw DimensionError("matrix declared with " + std::to_string(n_rows_) + " rows but given " +
                         std::to_string(rows_.size()));
  }
  packed_.assign(n_rows_ * words_per_row_, 0);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    auto& row = rows_[r];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw ParameterError("row " + std::to_string(r) + " has a repeated column index");
    }
    for (Index c : row) {
      if (c >= n_cols_) {
        throw DimensionError("row " + std::to_string(r) + " has column index " +
                             std::to_string(c) + " >= " + std::to_string(n_cols_));
      }
      packed_[r * words_per_row_ + (c >> 6)] |= std::uint64_t{1} << (c & 63);
    }
  }
}

SparseBitMatrix SparseBitMatrix::identity(std::size_t n) {
  std::vector<std::vector<Index>> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = {static_cast<Index>(i)};
  return SparseBitMatrix(n, n, std::move(rows));
}

SparseBitMatrix SparseBitMatrix::from_rows(std::size_t n_cols, const std::vector<BitVector>& rows) {
  std::vector<std::vector<Index>> supports;
  supports.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.length() != n_cols) throw DimensionError("row length does not match column count");
    supports.push_back(r.support());
  }
  return SparseBitMatrix(rows.size(), n_cols, std::move(supports));
}

std::size_t SparseBitMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.size();
  return total;
}

BitVector SparseBitMatrix::row_vector(std::size_t r) const {
  BitVector v(n_cols_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

bool SparseBitMatrix::get(std::size_t r, std::size_t c) const {
  return (packed_[r * words_per_row_ + (c >> 6)] >> (c & 63)) & 1u;
}

std::vector<std::size_t> SparseBitMatrix::column_weights() const {
  std::vector<std::size_t> w(n_cols_, 0);
  for (const auto& r : rows_) {
    for (Index c : r) ++w[c];
  }
  return w;
}

std::vector<std::vector<Index>> SparseBitMatrix::column_supports() const {
  std::vector<std::vector<Index>> cols(n_cols_);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    for (Index c : rows_[r]) cols[c].push_back(static_cast<Index>(r));
  }
  return cols;
}

const RowEchelon& SparseBitMatrix::echelon() const {
  std::call_once(cache_->once,
                 [this] { cache_->basis = std::make_unique<RowEchelon>(RowEchelon::of(*this)); });
  return *cache_->basis;
}

// ---------------------------------------------------------------------------
// Free functions

BitVector mat_vec_mul(const SparseBitMatrix& m, const BitVector& v) {
  if (v.length() != m.n_cols()) {
    throw DimensionError("mat_vec_mul: vector length " + std::to_string(v.length()) +
                         " != matrix columns " + std::to_string(m.n_cols()));
  }
  BitVector out(m.n_rows());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    bool parity = false;
    for (Index c : m.row(r)) parity ^= v.test(c);
    if (parity) out.flip(r);
  }
  return out;
}

std::size_t rank(const SparseBitMatrix& m) { return m.echelon().rank(); }

bool in_row_space(const SparseBitMatrix& m, const BitVector& v) {
  if (v.length() != m.n_cols()) {
    throw DimensionError("in_row_space: vector length " + std::to_string(v.length()) +
                         " != matrix columns " + std::to_string(m.n_cols()));
  }
  return m.echelon().contains(v);
}

SparseBitMatrix transpose(const SparseBitMatrix& m) {
  return SparseBitMatrix(m.n_cols(), m.n_rows(), m.column_supports());
}

std::vector<BitVector> kernel_basis(const SparseBitMatrix& m) {
  const RowEchelon& e = m.echelon();
  std::vector<bool> is_pivot(m.n_cols(), false);
  for (Index p : e.pivots()) is_pivot[p] = true;
  std::vector<BitVector> rows;
  rows.reserve(e.rank());
  for (std::size_t i = 0; i < e.rank(); ++i) rows.push_back(e.row(i));

  std::vector<BitVector> basis;
  for (std::size_t f = 0; f < m.n_cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector x(m.n_cols());
    x.set(f);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].test(f)) x.set(e.pivots()[i]);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace qldpc
