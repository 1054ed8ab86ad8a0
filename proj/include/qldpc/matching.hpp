#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace qldpc {

struct WeightedEdge {
  std::uint32_t u;
  std::uint32_t v;
  std::int64_t weight;
};

/// Maximum-weight matching on a general graph (Edmonds' blossom algorithm,
/// O(V^3)). With `max_cardinality`, maximizes the weight among matchings of
/// maximum cardinality. Returns mate[v], or -1 for unmatched vertices.
std::vector<std::int64_t> max_weight_matching(std::size_t n_vertices, std::span<const WeightedEdge> edges,
                                              bool max_cardinality);

/// Minimum-cost perfect matching of the complete graph given by a symmetric
/// non-negative cost matrix with an even number of vertices. Pairs (a, b)
/// have a < b and are sorted by a.
std::vector<std::pair<std::uint32_t, std::uint32_t>> min_cost_perfect_matching(
    const std::vector<std::vector<std::int64_t>>& cost);

/// Exhaustive reference: minimum total cost over all perfect matchings.
/// Intended for up to a dozen vertices.
std::int64_t brute_force_min_matching_cost(const std::vector<std::vector<std::int64_t>>& cost);

}  // namespace qldpc
