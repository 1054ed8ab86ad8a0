#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "qldpc/classical.hpp"
#include "qldpc/errors.hpp"
#include "qldpc/graph.hpp"
#include "qldpc/hgp.hpp"
#include "qldpc/toric.hpp"

using namespace qldpc;

namespace {

BiregularBipartiteGraph forced_pair() { return generate_configuration_model(2, 1, 1, 2, 0); }

BiregularBipartiteGraph three_cycle() {
  return BiregularBipartiteGraph(3, 3, 2, 2, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}});
}

std::vector<std::vector<Index>> rows(const SparseBitMatrix& m) {
  std::vector<std::vector<Index>> out;
  for (std::size_t r = 0; r < m.n_rows(); ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
  return out;
}

// All nonzero vectors of length n (n <= 20) as bit masks.
BitVector from_mask(std::size_t n, std::uint32_t mask) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1u) v.set(i);
  }
  return v;
}

}  // namespace

TEST(HypergraphProduct, FiveQubitHandConstruction) {
  const auto c = hypergraph_product(forced_pair(), forced_pair());
  EXPECT_EQ(c.n_qubits(), 5u);
  EXPECT_EQ(c.blocks.v_block, 4u);
  EXPECT_EQ(c.blocks.c_block, 1u);
  const std::vector<std::vector<Index>> hx{{0, 1, 4}, {2, 3, 4}};
  const std::vector<std::vector<Index>> hz{{0, 2, 4}, {1, 3, 4}};
  EXPECT_EQ(rows(c.hx), hx);
  EXPECT_EQ(rows(c.hz), hz);
}

TEST(HypergraphProduct, BlockFormulaOnAsymmetricFactors) {
  // X generator (v1, c2) = row v1*m2 + c2; Z generator (c1, v2) = row c1*n2 + v2.
  const auto g1 = generate_configuration_model(8, 6, 3, 4, 1);
  const auto g2 = generate_configuration_model(12, 10, 5, 6, 2);
  const auto c = hypergraph_product(g1, g2);
  const auto h1 = code_from_graph(g1).H;
  const auto h2 = code_from_graph(g2).H;
  const std::size_t n1 = 8, m1 = 6, n2 = 12, m2 = 10;
  ASSERT_EQ(c.n_qubits(), n1 * n2 + m1 * m2);
  for (std::size_t v1 = 0; v1 < n1; ++v1) {
    for (std::size_t c2 = 0; c2 < m2; ++c2) {
      std::set<Index> expect;
      for (std::size_t v2 = 0; v2 < n2; ++v2) {
        if (h2.get(c2, v2)) expect.insert(static_cast<Index>(v1 * n2 + v2));
      }
      for (std::size_t c1 = 0; c1 < m1; ++c1) {
        if (h1.get(c1, v1)) expect.insert(static_cast<Index>(n1 * n2 + c1 * m2 + c2));
      }
      const auto row = c.hx.row(v1 * m2 + c2);
      EXPECT_EQ(std::set<Index>(row.begin(), row.end()), expect);
    }
  }
  for (std::size_t c1 = 0; c1 < m1; ++c1) {
    for (std::size_t v2 = 0; v2 < n2; ++v2) {
      std::set<Index> expect;
      for (std::size_t v1 = 0; v1 < n1; ++v1) {
        if (h1.get(c1, v1)) expect.insert(static_cast<Index>(v1 * n2 + v2));
      }
      for (std::size_t c2 = 0; c2 < m2; ++c2) {
        if (h2.get(c2, v2)) expect.insert(static_cast<Index>(n1 * n2 + c1 * m2 + c2));
      }
      const auto row = c.hz.row(c1 * n2 + v2);
      EXPECT_EQ(std::set<Index>(row.begin(), row.end()), expect);
    }
  }
}

TEST(HypergraphProduct, OrthogonalAcrossDegreePairs) {
  const std::size_t shapes[][4] = {{8, 6, 3, 4}, {12, 10, 5, 6}, {20, 10, 5, 10}, {16, 12, 3, 4}};
  for (const auto& s : shapes) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto g = generate_configuration_model(s[0], s[1], s[2], s[3], seed);
      const auto h = generate_configuration_model(s[0], s[1], s[2], s[3], seed + 100);
      EXPECT_TRUE(css_orthogonal(hypergraph_product(g, h).hx, hypergraph_product(g, h).hz));
    }
  }
}

TEST(MakeCssCode, RejectsNonCommuting) {
  SparseBitMatrix hx(1, 2, {{0}});
  SparseBitMatrix hz(1, 2, {{0}});
  EXPECT_THROW(make_css_code(hx, hz), ParameterError);
  EXPECT_THROW(make_css_code(SparseBitMatrix(1, 2, {{0}}), SparseBitMatrix(1, 3, {{1}})), DimensionError);
}

TEST(WeightProfile, FiveSixFamily) {
  const auto g = generate_configuration_model(60, 50, 5, 6, 11);
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = hypergraph_product(g, g);
  const auto w = weight_profile(c);
  const auto p = code_parameters(c);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
  EXPECT_EQ(w.qubit_degrees, (std::vector<std::size_t>{10, 12}));
  EXPECT_EQ(w.x_weights, std::vector<std::size_t>{11});
  EXPECT_EQ(w.z_weights, std::vector<std::size_t>{11});
  EXPECT_EQ(w.v_block_degrees, std::vector<std::size_t>{10});
  EXPECT_EQ(w.c_block_degrees, std::vector<std::size_t>{12});
  EXPECT_EQ(p.n, 6100u);
  if (rank(code_from_graph(g).H) == 50) {
    EXPECT_EQ(p.k, 100u);
    EXPECT_EQ(p.k * 61, p.n);
  }
}

TEST(WeightProfile, FiveTenFamily) {
  const auto g = generate_configuration_model(40, 20, 5, 10, 12);
  const auto c = hypergraph_product(g, g);
  const auto w = weight_profile(c);
  EXPECT_EQ(w.qubit_degrees, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(w.x_weights, std::vector<std::size_t>{15});
  EXPECT_EQ(w.z_weights, std::vector<std::size_t>{15});
  const auto p = code_parameters(c);
  EXPECT_EQ(p.n, 2000u);
  if (rank(code_from_graph(g).H) == 20) {
    EXPECT_EQ(p.k * 5, p.n);
  }
}

TEST(WeightProfile, SymmetricForEqualFactors) {
  const auto g = generate_configuration_model(16, 12, 3, 4, 8);
  const auto w = weight_profile(hypergraph_product(g, g));
  EXPECT_EQ(w.x_weights, w.z_weights);
}

TEST(CodeParameters, FiveQubit) {
  const auto p = code_parameters(hypergraph_product(forced_pair(), forced_pair()));
  EXPECT_EQ(p.n, 5u);
  EXPECT_EQ(p.k, 1u);
  ASSERT_TRUE(p.k_formula.has_value());
  EXPECT_EQ(*p.k_formula, 1u);
}

TEST(CodeParameters, DimensionFormulaWithRankDeficientFactors) {
  // Even left degree makes the rows of H sum to zero, so H is rank deficient and k^T > 0.
  const std::size_t shapes[][4] = {{12, 8, 2, 3}, {12, 12, 4, 4}, {9, 6, 2, 3}, {12, 10, 5, 6}};
  std::size_t with_transpose_part = 0;
  for (const auto& s : shapes) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto g1 = generate_configuration_model(s[0], s[1], s[2], s[3], seed);
      const auto g2 = generate_configuration_model(s[0], s[1], s[2], s[3], seed + 50);
      const auto c = hypergraph_product(g1, g2);
      const auto p = code_parameters(c);
      const auto h1 = code_from_graph(g1).H;
      const auto h2 = code_from_graph(g2).H;
      const std::size_t k1 = h1.n_cols() - rank(h1), k2 = h2.n_cols() - rank(h2);
      const std::size_t k1t = h1.n_rows() - rank(h1), k2t = h2.n_rows() - rank(h2);
      EXPECT_EQ(p.k, k1 * k2 + k1t * k2t);
      EXPECT_EQ(p.k, c.n_qubits() - rank(c.hx) - rank(c.hz));
      with_transpose_part += k1t * k2t > 0;
    }
  }
  EXPECT_GT(with_transpose_part, 0u);
}

TEST(LogicalBasis, FiveQubitExhaustive) {
  const auto c = hypergraph_product(forced_pair(), forced_pair());
  const auto b = logical_basis(c);
  ASSERT_EQ(b.z_logicals.size(), 1u);
  ASSERT_EQ(b.x_logicals.size(), 1u);
  EXPECT_TRUE(b.z_logicals[0].overlap_parity(b.x_logicals[0]));
  // Exhaustive: the 2^5 vectors split into stabilizer-equivalent and logical classes.
  std::size_t logical = 0;
  for (std::uint32_t m = 0; m < 32; ++m) {
    const auto v = from_mask(5, m);
    if (!mat_vec_mul(c.hx, v).none()) continue;
    const bool trivial = in_row_space(c.hz, v);
    EXPECT_EQ(trivial, !v.overlap_parity(b.x_logicals[0]));
    logical += !trivial;
  }
  EXPECT_EQ(logical, 4u);  // ker H_X has 8 elements, rowspace(H_Z) 4
}

TEST(LogicalBasis, Toric) {
  for (std::size_t L : {2, 3}) {
    const auto t = build_toric(L);
    const auto b = logical_basis(t.css);
    EXPECT_EQ(b.z_logicals.size(), 2u);
    EXPECT_EQ(b.x_logicals.size(), 2u);
    for (const auto& z : b.z_logicals) {
      EXPECT_TRUE(mat_vec_mul(t.css.hx, z).none());
      EXPECT_FALSE(in_row_space(t.css.hz, z));
    }
    for (const auto& x : b.x_logicals) {
      EXPECT_TRUE(mat_vec_mul(t.css.hz, x).none());
      EXPECT_FALSE(in_row_space(t.css.hx, x));
    }
  }
}

TEST(LogicalBasis, PairingIsNondegenerate) {
  const auto g = generate_configuration_model(8, 6, 3, 4, 3);
  const auto c = hypergraph_product(g, g);
  const auto b = logical_basis(c);
  const auto k = code_parameters(c).k;
  ASSERT_EQ(b.z_logicals.size(), k);
  // The k x k overlap matrix is invertible over GF(2).
  std::vector<BitVector> gram;
  for (const auto& z : b.z_logicals) {
    BitVector row(k);
    for (std::size_t j = 0; j < k; ++j) row.set(j, z.overlap_parity(b.x_logicals[j]));
    gram.push_back(row);
  }
  EXPECT_EQ(rank(SparseBitMatrix::from_rows(k, gram)), k);
}

TEST(Distance, FiveQubit) {
  const auto d = brute_force_distance(hypergraph_product(forced_pair(), forced_pair()));
  ASSERT_TRUE(d.d.has_value());
  EXPECT_EQ(*d.d_x, 2u);
  EXPECT_EQ(*d.d_z, 2u);
  ASSERT_TRUE(d.formula_available);
  EXPECT_EQ(d.formula_d_x, d.d_x);
  EXPECT_EQ(d.formula_d_z, d.d_z);
}

TEST(Distance, AsymmetricFactorsPinLabels) {
  // g1: d1 = 2, ker H1^T trivial. g2 (a 6-cycle): d2 = d2^T = 3.
  const auto c = hypergraph_product(forced_pair(), three_cycle());
  EXPECT_EQ(c.n_qubits(), 9u);
  EXPECT_EQ(code_parameters(c).k, 1u);
  const auto d = brute_force_distance(c);
  EXPECT_EQ(*d.d_z, 3u);
  EXPECT_EQ(*d.d_x, 2u);
  EXPECT_EQ(*d.d, 2u);
  EXPECT_EQ(d.formula_d_z, d.d_z);
  EXPECT_EQ(d.formula_d_x, d.d_x);
}

TEST(Distance, ToricThree) {
  const auto d = brute_force_distance(build_toric(3).css);
  EXPECT_EQ(*d.d_x, 3u);
  EXPECT_EQ(*d.d_z, 3u);
  EXPECT_FALSE(d.formula_available);
}

TEST(Distance, ProductOfSmallGraphs) {
  const auto g = generate_configuration_model(4, 4, 2, 2, 5);
  const auto d = brute_force_distance(hypergraph_product(g, g));
  ASSERT_TRUE(d.d.has_value());
  EXPECT_GE(*d.d, 1u);
  EXPECT_EQ(d.formula_d_x, d.d_x);
  EXPECT_EQ(d.formula_d_z, d.d_z);
}

TEST(Distance, RefusesLargeKernels) {
  const auto g = generate_configuration_model(60, 50, 5, 6, 1);
  EXPECT_THROW(brute_force_distance(hypergraph_product(g, g), 1e6), BudgetExceeded);
}
