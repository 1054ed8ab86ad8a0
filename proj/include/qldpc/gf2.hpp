#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qldpc {

using Index = std::uint32_t;

/// A vector over GF(2), stored as packed 64-bit words.
///
/// Bits past `length()` in the last word are always zero, so word-wise
/// comparisons and popcounts are exact.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length);

  /// Builds a vector from a list of set coordinates. Duplicates or indices
  /// outside `[0, length)` are rejected.
  static BitVector from_support(std::size_t length, std::span<const Index> support);
  static BitVector from_bits(std::initializer_list<int> bits);

  std::size_t length() const { return length_; }
  std::size_t weight() const;
  bool none() const;

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear();

  /// Strictly increasing list of coordinates holding 1.
  std::vector<Index> support() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

  std::size_t overlap(const BitVector& other) const;
  bool overlap_parity(const BitVector& other) const { return overlap(other) & 1u; }

  std::string to_string() const;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

class SparseBitMatrix;

/// Fully reduced row echelon basis of a row space: every pivot column is zero
/// in all rows but its own, which makes membership a single reduction pass.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t n_cols = 0);
  static RowEchelon of(const SparseBitMatrix& m);

  std::size_t n_cols() const { return n_cols_; }
  std::size_t rank() const { return pivots_.size(); }
  const std::vector<Index>& pivots() const { return pivots_; }
  BitVector row(std::size_t i) const;

  /// v minus its projection on the basis; zero iff v lies in the row space.
  BitVector reduce(const BitVector& v) const;
  bool contains(const BitVector& v) const;

  /// Adds v to the spanning set. Returns false if v was already in the span.
  bool insert(const BitVector& v);

 private:
  std::uint64_t* row_ptr(std::size_t i) { return rows_.data() + i * words_; }
  const std::uint64_t* row_ptr(std::size_t i) const { return rows_.data() + i * words_; }

  std::size_t n_cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<Index> pivots_;
  std::vector<std::int32_t> pivot_row_;  // row holding each pivot column, or -1
};

namespace detail {
struct EchelonCache;
}

/// Sparse GF(2) matrix. Rows are kept both as sorted supports and as packed
/// bitsets. Immutable after construction; safe to share across threads.
class SparseBitMatrix {
 public:
  SparseBitMatrix();
  SparseBitMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::vector<Index>> rows);

  static SparseBitMatrix identity(std::size_t n);
  static SparseBitMatrix from_rows(std::size_t n_cols, const std::vector<BitVector>& rows);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const;

  std::span<const Index> row(std::size_t r) const { return rows_[r]; }
  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {packed_.data() + r * words_per_row_, words_per_row_};
  }
  BitVector row_vector(std::size_t r) const;
  bool get(std::size_t r, std::size_t c) const;

  std::size_t row_weight(std::size_t r) const { return rows_[r].size(); }
  std::vector<std::size_t> column_weights() const;
  std::vector<std::vector<Index>> column_supports() const;

  /// Row-echelon basis, computed on first use and cached.
  const RowEchelon& echelon() const;

  friend bool operator==(const SparseBitMatrix& a, const SparseBitMatrix& b) {
    return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::vector<Index>> rows_;
  std::vector<std::uint64_t> packed_;
  std::shared_ptr<detail::EchelonCache> cache_;
};

BitVector mat_vec_mul(const SparseBitMatrix& m, const BitVector& v);
std::size_t rank(const SparseBitMatrix& m);
bool in_row_space(const SparseBitMatrix& m, const BitVector& v);
SparseBitMatrix transpose(const SparseBitMatrix& m);

/// Basis of the right kernel {x : M x = 0}.
std::vector<BitVector> kernel_basis(const SparseBitMatrix& m);

}  // namespace qldpc
