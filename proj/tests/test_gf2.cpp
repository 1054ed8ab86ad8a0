#include <gtest/gtest.h>

#include "qldpc/errors.hpp"
#include "qldpc/gf2.hpp"
#include "test_util.hpp"

using namespace qldpc;
using qldpc::test::random_matrix;
using qldpc::test::random_vector;
using qldpc::test::test_stream;

namespace {

SparseBitMatrix rows_of(std::size_t cols, std::vector<std::vector<Index>> rows) {
  const std::size_t n = rows.size();
  return SparseBitMatrix(n, cols, std::move(rows));
}

}  // namespace

TEST(BitVector, SupportRoundTrip) {
  const std::vector<Index> s{1, 4, 63, 64, 99};
  const auto v = BitVector::from_support(100, s);
  EXPECT_EQ(v.support(), s);
  EXPECT_EQ(v.weight(), 5u);
  EXPECT_TRUE(v.test(63));
  EXPECT_FALSE(v.test(62));
}

TEST(BitVector, RejectsBadSupport) {
  const std::vector<Index> dup{2, 2};
  const std::vector<Index> out{5};
  EXPECT_THROW(BitVector::from_support(5, dup), ParameterError);
  EXPECT_THROW(BitVector::from_support(5, out), DimensionError);
}

TEST(BitVector, XorAndOverlap) {
  const auto a = BitVector::from_bits({1, 1, 0, 1});
  const auto b = BitVector::from_bits({0, 1, 1, 1});
  EXPECT_EQ(a ^ b, BitVector::from_bits({1, 0, 1, 0}));
  EXPECT_EQ(a.overlap(b), 2u);
  EXPECT_FALSE(a.overlap_parity(b));
  EXPECT_THROW(a ^ BitVector(5), DimensionError);
}

TEST(MatVecMul, Identity) {
  const auto out = mat_vec_mul(SparseBitMatrix::identity(3), BitVector::from_bits({1, 0, 1}));
  EXPECT_EQ(out, BitVector::from_bits({1, 0, 1}));
}

TEST(MatVecMul, ParityOfTwoOnes) {
  const auto m = rows_of(3, {{0, 1, 2}});
  EXPECT_EQ(mat_vec_mul(m, BitVector::from_bits({1, 1, 0})), BitVector::from_bits({0}));
}

TEST(MatVecMul, DimensionMismatch) {
  EXPECT_THROW(mat_vec_mul(SparseBitMatrix::identity(3), BitVector(4)), DimensionError);
}

TEST(MatVecMul, MatchesDenseDoubleLoop) {
  auto rng = test_stream(11);
  for (int t = 0; t < 20; ++t) {
    const auto m = random_matrix(20, 30, 0.3, rng);
    const auto v = random_vector(30, 0.5, rng);
    BitVector expect(20);
    for (std::size_t i = 0; i < 20; ++i) {
      int acc = 0;
      for (std::size_t j = 0; j < 30; ++j) acc ^= static_cast<int>(m.get(i, j) && v.test(j));
      expect.set(i, acc);
    }
    EXPECT_EQ(mat_vec_mul(m, v), expect);
  }
}

TEST(MatVecMul, Linear) {
  auto rng = test_stream(12);
  const auto m = random_matrix(17, 90, 0.2, rng);
  for (int t = 0; t < 20; ++t) {
    const auto v = random_vector(90, 0.4, rng);
    const auto w = random_vector(90, 0.4, rng);
    EXPECT_EQ(mat_vec_mul(m, v ^ w), mat_vec_mul(m, v) ^ mat_vec_mul(m, w));
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(SparseBitMatrix::identity(3)), 3u);
  EXPECT_EQ(rank(rows_of(3, {{0, 1}, {0, 1}})), 1u);
  EXPECT_EQ(rank(rows_of(4, {{}, {}})), 0u);
}

TEST(Rank, MatchesSpanOracle) {
  auto rng = test_stream(13);
  for (int t = 0; t < 40; ++t) {
    const std::size_t rows = 1 + static_cast<std::size_t>(t % 8);
    const auto m = random_matrix(rows, 8, t % 2 ? 0.3 : 0.6, rng);
    const auto span = qldpc::test::span_oracle(m);
    EXPECT_EQ(std::size_t{1} << rank(m), span.size());
  }
}

TEST(Rank, SixByEightAgainstOracle) {
  auto rng = test_stream(14);
  const auto m = random_matrix(6, 8, 0.5, rng);
  EXPECT_EQ(std::size_t{1} << rank(m), qldpc::test::span_oracle(m).size());
}

TEST(Rank, EqualsTransposeRank) {
  auto rng = test_stream(15);
  for (int t = 0; t < 20; ++t) {
    const auto m = random_matrix(12 + t, 30 - t, 0.15, rng);
    EXPECT_EQ(rank(m), rank(transpose(m)));
  }
}

TEST(InRowSpace, Examples) {
  auto rng = test_stream(16);
  const auto any = random_matrix(4, 9, 0.5, rng);
  EXPECT_TRUE(in_row_space(any, BitVector(9)));
  const auto m = rows_of(3, {{0, 1}, {1, 2}});
  EXPECT_TRUE(in_row_space(m, BitVector::from_bits({1, 0, 1})));
  EXPECT_FALSE(in_row_space(m, BitVector::from_bits({1, 0, 0})));
  EXPECT_THROW(in_row_space(m, BitVector(4)), DimensionError);
}

TEST(InRowSpace, MatchesSpanOracle) {
  auto rng = test_stream(17);
  const auto m = random_matrix(5, 10, 0.35, rng);
  const auto span = qldpc::test::span_oracle(m);
  int members = 0;
  for (int t = 0; t < 50; ++t) {
    // Half the queries are drawn from the span itself.
    BitVector v = random_vector(10, 0.5, rng);
    if (t % 2 == 0) {
      v = BitVector(10);
      for (std::size_t r = 0; r < 5; ++r) {
        if (rng() & 1u) v ^= m.row_vector(r);
      }
    }
    const bool expect = span.count(v.support()) > 0;
    members += expect;
    EXPECT_EQ(in_row_space(m, v), expect);
  }
  EXPECT_GT(members, 0);
}

TEST(InRowSpace, EveryRowIsMember) {
  auto rng = test_stream(18);
  const auto m = random_matrix(40, 70, 0.1, rng);
  for (std::size_t r = 0; r < m.n_rows(); ++r) EXPECT_TRUE(in_row_space(m, m.row_vector(r)));
}

TEST(Transpose, Examples) {
  EXPECT_EQ(transpose(SparseBitMatrix::identity(4)), SparseBitMatrix::identity(4));
  const auto t = transpose(rows_of(3, {{0, 2}}));
  EXPECT_EQ(t.n_rows(), 3u);
  EXPECT_EQ(t.n_cols(), 1u);
  EXPECT_TRUE(t.get(0, 0));
  EXPECT_FALSE(t.get(1, 0));
  EXPECT_TRUE(t.get(2, 0));
}

TEST(Transpose, Involution) {
  auto rng = test_stream(19);
  const auto m = random_matrix(7, 5, 0.4, rng);
  EXPECT_EQ(transpose(transpose(m)), m);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(transpose(m).get(j, i), m.get(i, j));
  }
}

TEST(KernelBasis, SpansKernel) {
  auto rng = test_stream(20);
  for (int t = 0; t < 10; ++t) {
    const auto m = random_matrix(6, 9, 0.4, rng);
    const auto basis = kernel_basis(m);
    EXPECT_EQ(basis.size(), 9 - rank(m));
    for (const auto& b : basis) EXPECT_TRUE(mat_vec_mul(m, b).none());
    EXPECT_EQ(rank(SparseBitMatrix::from_rows(9, basis)), basis.size());
  }
}

TEST(RowEchelon, InsertReportsDependence) {
  RowEchelon e(4);
  EXPECT_TRUE(e.insert(BitVector::from_bits({1, 1, 0, 0})));
  EXPECT_TRUE(e.insert(BitVector::from_bits({0, 1, 1, 0})));
  EXPECT_FALSE(e.insert(BitVector::from_bits({1, 0, 1, 0})));
  EXPECT_EQ(e.rank(), 2u);
  EXPECT_TRUE(e.reduce(BitVector::from_bits({1, 0, 1, 0})).none());
  EXPECT_FALSE(e.contains(BitVector::from_bits({0, 0, 0, 1})));
}

TEST(SparseBitMatrix, RejectsOutOfRangeSupport) {
  EXPECT_THROW(SparseBitMatrix(1, 3, {{3}}), DimensionError);
}
