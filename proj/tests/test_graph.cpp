#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "qldpc/errors.hpp"
#include "qldpc/graph.hpp"

using namespace qldpc;

namespace {

void expect_valid(const BiregularBipartiteGraph& g) {
  EXPECT_EQ(g.deg_left() * g.n_left(), g.deg_right() * g.n_right());
  std::set<std::pair<Index, Index>> seen;
  std::vector<std::size_t> dl(g.n_left(), 0), dr(g.n_right(), 0);
  for (const auto& e : g.edges()) {
    EXPECT_TRUE(seen.emplace(e.left, e.right).second);
    ++dl[e.left];
    ++dr[e.right];
  }
  for (auto d : dl) EXPECT_EQ(d, g.deg_left());
  for (auto d : dr) EXPECT_EQ(d, g.deg_right());
}

// Minimum |Γ(S)| over all S of size s on one side, by plain nested enumeration.
std::size_t min_neighborhood(const std::vector<std::vector<Index>>& adj, std::size_t s) {
  std::size_t best = SIZE_MAX;
  std::vector<std::size_t> pick(s);
  for (std::size_t i = 0; i < s; ++i) pick[i] = i;
  const std::size_t n = adj.size();
  while (true) {
    std::set<Index> nb;
    for (auto v : pick) nb.insert(adj[v].begin(), adj[v].end());
    best = std::min(best, nb.size());
    std::size_t i = s;
    while (i > 0 && pick[i - 1] == n - s + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < s; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace

TEST(ConfigurationModel, SixByFive) {
  const auto g = generate_configuration_model(6, 5, 5, 6, 1);
  EXPECT_EQ(g.edges().size(), 30u);
  expect_valid(g);
}

TEST(ConfigurationModel, ForcedTinyGraph) {
  const auto g = generate_configuration_model(2, 1, 1, 2, 9);
  const std::vector<Edge> expect{{0, 0}, {1, 0}};
  EXPECT_EQ(g.edges(), expect);
}

TEST(ConfigurationModel, Deterministic) {
  EXPECT_EQ(generate_configuration_model(60, 50, 5, 6, 42), generate_configuration_model(60, 50, 5, 6, 42));
  EXPECT_NE(generate_configuration_model(60, 50, 5, 6, 42), generate_configuration_model(60, 50, 5, 6, 43));
}

TEST(ConfigurationModel, PropertyOverSeedsAndSizes) {
  const std::size_t shapes[][4] = {{12, 10, 5, 6}, {30, 25, 5, 6}, {20, 10, 5, 10}, {8, 6, 3, 4}, {60, 50, 5, 6}};
  for (const auto& s : shapes) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) expect_valid(generate_configuration_model(s[0], s[1], s[2], s[3], seed));
  }
}

TEST(ConfigurationModel, Errors) {
  EXPECT_THROW(generate_configuration_model(6, 5, 5, 5, 1), ParameterError);
  EXPECT_THROW(generate_configuration_model(0, 5, 5, 6, 1), ParameterError);
  // Left degree 2 with a single right node: no simple graph.
  EXPECT_THROW(generate_configuration_model(2, 1, 2, 4, 1), GenerationError);
}

TEST(ConfigurationModel, RejectsMultiEdgesOnConstruction) {
  EXPECT_THROW(BiregularBipartiteGraph(1, 1, 2, 2, {{0, 0}, {0, 0}}), ParameterError);
}

TEST(ExpansionAudit, SingletonsHaveRatioOne) {
  const auto g = generate_configuration_model(30, 25, 5, 6, 5);
  EXPECT_DOUBLE_EQ(expansion_audit(g, Side::kLeft, 1).worst_ratio[0], 1.0);
  EXPECT_DOUBLE_EQ(expansion_audit(g, Side::kRight, 1).worst_ratio[0], 1.0);
}

TEST(ExpansionAudit, CompleteBipartite) {
  const BiregularBipartiteGraph k22(2, 2, 2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto r = expansion_audit(k22, Side::kLeft, 2);
  EXPECT_DOUBLE_EQ(r.worst_ratio[1], 0.5);
  EXPECT_DOUBLE_EQ(r.delta_hat, 0.5);
  EXPECT_DOUBLE_EQ(r.gamma_hat, 1.0);
}

TEST(ExpansionAudit, MatchesIndependentEnumeration) {
  const auto g = generate_configuration_model(12, 10, 5, 6, 1);
  // Values from an external enumeration script over this graph's edge list.
  const std::vector<std::size_t> left_frozen{5, 6, 7}, right_frozen{6, 8, 9};
  for (Side side : {Side::kLeft, Side::kRight}) {
    const auto r = expansion_audit(g, side, 3);
    const auto adj = g.adjacency(side);
    const auto& frozen = side == Side::kLeft ? left_frozen : right_frozen;
    for (std::size_t s = 1; s <= 3; ++s) {
      EXPECT_EQ(r.worst_neighborhood[s - 1], min_neighborhood(adj, s));
      EXPECT_EQ(r.worst_neighborhood[s - 1], frozen[s - 1]);
      EXPECT_DOUBLE_EQ(r.worst_ratio[s - 1],
                       static_cast<double>(frozen[s - 1]) / static_cast<double>(g.deg_side(side) * s));
    }
  }
}

TEST(ExpansionAudit, RefusesOverBudget) {
  const auto g = generate_configuration_model(60, 50, 5, 6, 1);
  try {
    expansion_audit(g, Side::kLeft, 10, 1e6);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_GT(e.cost(), 1e6);
  }
}

TEST(CorrectionBound, FormulaArithmetic) {
  EXPECT_EQ(correction_radius(60, 50, 6), 2u);
  EXPECT_EQ(correction_radius(20, 10, 6), 0u);
}

TEST(CorrectionBound, RecomputedFromReport) {
  const auto g = generate_configuration_model(12, 10, 5, 6, 1);
  const auto left = expansion_audit(g, Side::kLeft, 3);
  const auto right = expansion_audit(g, Side::kRight, 3);
  const auto b = theorem1_bound(g, left, right);
  // min(3, 3) / (3 * 7) = 0; δ̂_V = 1 - 7/15 and δ̂_C = 1 - 9/18 are above 1/6.
  EXPECT_EQ(b.weight, 0u);
  EXPECT_FALSE(b.applicable);
  EXPECT_THROW(theorem1_bound(g, right, left), ParameterError);
}

TEST(CorrectionBound, NotApplicableWhenDeltaLarge) {
  const BiregularBipartiteGraph k22(2, 2, 2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto r = expansion_audit(k22, Side::kLeft, 2);
  const auto c = expansion_audit(k22, Side::kRight, 2);
  EXPECT_FALSE(theorem1_bound(k22, r, c).applicable);
}

TEST(GraphText, RoundTrip) {
  const auto g = generate_configuration_model(30, 25, 5, 6, 3);
  std::stringstream ss;
  write_graph(ss, g);
  EXPECT_EQ(read_graph(ss), g);
  std::stringstream bad("3 2 2 3\n0 0\n");
  EXPECT_THROW(read_graph(bad), ParameterError);
}
