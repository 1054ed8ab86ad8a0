#include <gtest/gtest.h>

#include <algorithm>

#include "qldpc/errors.hpp"
#include "qldpc/hgp.hpp"
#include "qldpc/matching.hpp"
#include "qldpc/toric.hpp"
#include "test_util.hpp"

using namespace qldpc;

namespace {

std::vector<Index> random_defects(std::size_t cells, std::size_t count, PhiloxStream& rng) {
  std::vector<Index> d;
  while (d.size() < count) {
    const auto c = static_cast<Index>(rng.uniform_index(cells));
    if (std::find(d.begin(), d.end(), c) == d.end()) d.push_back(c);
  }
  std::sort(d.begin(), d.end());
  return d;
}

// Residual of error + MWPM correction for errors of the given type.
BitVector residual_after(const ToricCode& t, const BitVector& e, Sector s) {
  return e ^ mwpm_decode(t, mat_vec_mul(t.css.checks_for(s), e), s);
}

}  // namespace

TEST(BuildToric, Parameters) {
  for (std::size_t L = 2; L <= 10; ++L) {
    const auto t = build_toric(L);
    EXPECT_EQ(t.n_qubits(), 2 * L * L);
    EXPECT_TRUE(css_orthogonal(t.css.hx, t.css.hz));
    EXPECT_EQ(rank(t.css.hx), L * L - 1);
    EXPECT_EQ(rank(t.css.hz), L * L - 1);
    EXPECT_EQ(code_parameters(t.css).k, 2u);
    for (const auto* h : {&t.css.hx, &t.css.hz}) {
      for (std::size_t r = 0; r < h->n_rows(); ++r) EXPECT_EQ(h->row_weight(r), 4u);
      for (auto w : h->column_weights()) EXPECT_EQ(w, 2u);
    }
  }
  const auto t8 = build_toric(8);
  EXPECT_EQ(t8.n_qubits(), 128u);
  EXPECT_THROW(build_toric(1), ParameterError);
}

TEST(BuildToric, EdgeIndexing) {
  const auto t = build_toric(4);
  EXPECT_EQ(t.horizontal(1, 2), 6u);
  EXPECT_EQ(t.vertical(1, 2), 16u + 6u);
  // Star of vertex (0, 0) and plaquette with corner (0, 0).
  const std::vector<Index> star{0, 3, 16, 28};
  const std::vector<Index> plaq{0, 4, 16, 17};
  EXPECT_EQ(std::vector<Index>(t.css.hx.row(0).begin(), t.css.hx.row(0).end()), star);
  EXPECT_EQ(std::vector<Index>(t.css.hz.row(0).begin(), t.css.hz.row(0).end()), plaq);
}

TEST(MwpmDecode, EmptyAndAdjacent) {
  const auto t = build_toric(5);
  EXPECT_TRUE(mwpm_decode(t, BitVector(25), Sector::kZ).none());
  for (Sector s : {Sector::kZ, Sector::kX}) {
    for (Index q = 0; q < t.n_qubits(); ++q) {
      BitVector e(t.n_qubits());
      e.set(q);
      // Two defects at distance 1: the connecting edge is the unique geodesic.
      EXPECT_EQ(mwpm_decode(t, mat_vec_mul(t.css.checks_for(s), e), s), e);
    }
  }
}

TEST(MwpmDecode, OddDefectsRejected) {
  const auto t = build_toric(3);
  BitVector s(9);
  s.set(4);
  EXPECT_THROW(mwpm_decode(t, s, Sector::kZ), InvalidSyndrome);
  EXPECT_THROW(mwpm_decode(t, BitVector(8), Sector::kZ), DimensionError);
}

TEST(MwpmDecode, MatchesBruteForceAtL8) {
  const auto t = build_toric(8);
  auto rng = test::test_stream(61);
  for (int trial = 0; trial < 200; ++trial) {
    const auto defects = random_defects(64, 8, rng);
    const Sector s = trial % 2 ? Sector::kX : Sector::kZ;
    const auto m = match_defects(t, defects, s);
    std::vector<std::vector<std::int64_t>> cost(8, std::vector<std::int64_t>(8, 0));
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) cost[i][j] = static_cast<std::int64_t>(toric_distance(8, defects[i], defects[j]));
    }
    EXPECT_EQ(m.total_weight, brute_force_min_matching_cost(cost));
  }
}

TEST(MwpmDecode, SyndromeReproduced) {
  for (std::size_t L : {3, 4, 7, 8}) {
    const auto t = build_toric(L);
    auto rng = test::test_stream(62, L);
    for (int trial = 0; trial < 100; ++trial) {
      for (Sector s : {Sector::kZ, Sector::kX}) {
        const auto e = test::random_vector(t.n_qubits(), 0.1, rng);
        const auto syn = mat_vec_mul(t.css.checks_for(s), e);
        const auto corr = mwpm_decode(t, syn, s);
        EXPECT_EQ(mat_vec_mul(t.css.checks_for(s), corr), syn);
      }
    }
  }
}

TEST(ToricPath, BoundaryAndLength) {
  const auto t = build_toric(6);
  auto rng = test::test_stream(63);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = static_cast<Index>(rng.uniform_index(36));
    const auto b = static_cast<Index>(rng.uniform_index(36));
    for (Sector s : {Sector::kZ, Sector::kX}) {
      const auto path = toric_path(t, s, a, b);
      EXPECT_EQ(path.size(), toric_distance(6, a, b));
      BitVector v(t.n_qubits());
      for (Index q : path) v.flip(q);
      auto expect = BitVector(36);
      if (a != b) {
        expect.set(a);
        expect.set(b);
      }
      EXPECT_EQ(mat_vec_mul(t.css.checks_for(s), v), expect);
    }
  }
}

TEST(ToricPath, IncreasingDirectionOnTies) {
  // L = 4: columns 0 and 2 are two steps apart both ways; the path goes up through column 1.
  const auto t = build_toric(4);
  const std::vector<Index> z{t.horizontal(0, 0), t.horizontal(0, 1)};
  EXPECT_EQ(toric_path(t, Sector::kZ, 0, 2), z);
  const std::vector<Index> x{t.vertical(0, 1), t.vertical(0, 2)};
  EXPECT_EQ(toric_path(t, Sector::kX, 0, 2), x);
}

TEST(LogicalFailure, Examples) {
  const auto t = build_toric(5);
  const auto plaquette = t.css.hz.row_vector(7);
  EXPECT_FALSE(toric_logical_failure(t, plaquette, Sector::kZ));
  BitVector loop(t.n_qubits());
  for (std::size_t c = 0; c < 5; ++c) loop.set(t.horizontal(2, c));
  EXPECT_TRUE(toric_logical_failure(t, loop, Sector::kZ));
  BitVector dual(t.n_qubits());
  for (std::size_t r = 0; r < 5; ++r) dual.set(t.horizontal(r, 3));
  EXPECT_TRUE(toric_logical_failure(t, dual, Sector::kX));
  EXPECT_FALSE(toric_logical_failure(t, t.css.hx.row_vector(3), Sector::kX));
  BitVector one(t.n_qubits());
  one.set(0);
  EXPECT_THROW(toric_logical_failure(t, one, Sector::kZ), InvalidSyndrome);
}

TEST(LogicalFailure, AgreesWithRowSpace) {
  const auto t = build_toric(4);
  const auto basis = logical_basis(t.css);
  auto rng = test::test_stream(64);
  for (int trial = 0; trial < 1000; ++trial) {
    const Sector s = trial % 2 ? Sector::kX : Sector::kZ;
    const auto& stabs = t.css.stabilizers_for(s);
    const auto& logicals = s == Sector::kZ ? basis.z_logicals : basis.x_logicals;
    BitVector r(t.n_qubits());
    for (std::size_t i = 0; i < stabs.n_rows(); ++i) {
      if (rng() & 1u) r ^= stabs.row_vector(i);
    }
    for (const auto& l : logicals) {
      if (rng() & 1u) r ^= l;
    }
    EXPECT_EQ(toric_logical_failure(t, r, s), !in_row_space(stabs, r));
  }
}

TEST(ToricCorrection, WeightOneAtL3) {
  const auto t = build_toric(3);
  for (Sector s : {Sector::kZ, Sector::kX}) {
    for (Index q = 0; q < t.n_qubits(); ++q) {
      BitVector e(t.n_qubits());
      e.set(q);
      EXPECT_FALSE(toric_logical_failure(t, residual_after(t, e, s), s));
    }
  }
}

TEST(ToricCorrection, WeightTwoAtL5) {
  const auto t = build_toric(5);
  const auto n = static_cast<Index>(t.n_qubits());
  for (Sector s : {Sector::kZ, Sector::kX}) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        BitVector e(n);
        e.set(i);
        e.set(j);
        EXPECT_FALSE(toric_logical_failure(t, residual_after(t, e, s), s)) << i << "," << j;
      }
    }
  }
}

TEST(ToricEstimate, ZeroNoiseAndDeterminism) {
  const auto t = build_toric(4);
  EXPECT_EQ(toric_estimate(t, 0.0, 100, 1).failures, 0u);
  const auto a = toric_estimate(t, 0.08, 3000, 2, 1);
  const auto b = toric_estimate(t, 0.08, 3000, 2, 8);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_GT(a.failures, 0u);
  EXPECT_THROW(toric_estimate(t, -0.1, 10, 1), ParameterError);
}

TEST(ToricEstimate, SmallerLossBelowThresholdForLargerL) {
  // Far below the ~10% matching threshold, L = 8 beats L = 4.
  const auto q4 = toric_estimate(build_toric(4), 0.03, 4000, 3);
  const auto q8 = toric_estimate(build_toric(8), 0.03, 4000, 3);
  EXPECT_LT(q8.p_log, q4.p_log);
}
