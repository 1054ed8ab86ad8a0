#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

struct Edge {
  Index left;
  Index right;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Side { kLeft, kRight };

/// Simple (Δ_V, Δ_C)-biregular bipartite graph. Left nodes are the variable
/// side V (n of them), right nodes the check side C (m of them).
/// The constructor validates the degree invariants and sorts the edge list.
class BiregularBipartiteGraph {
 public:
  BiregularBipartiteGraph(std::size_t n_left, std::size_t n_right, std::size_t deg_left,
                          std::size_t deg_right, std::vector<Edge> edges);

  std::size_t n_left() const { return n_left_; }
  std::size_t n_right() const { return n_right_; }
  std::size_t deg_left() const { return deg_left_; }
  std::size_t deg_right() const { return deg_right_; }
  std::size_t n_side(Side s) const { return s == Side::kLeft ? n_left_ : n_right_; }
  std::size_t deg_side(Side s) const { return s == Side::kLeft ? deg_left_ : deg_right_; }

  /// Sorted by (left, right).
  const std::vector<Edge>& edges() const { return edges_; }

  /// Neighbors of a node on the given side, increasing.
  std::vector<std::vector<Index>> adjacency(Side s) const;

  friend bool operator==(const BiregularBipartiteGraph&, const BiregularBipartiteGraph&) = default;

 private:
  std::size_t n_left_;
  std::size_t n_right_;
  std::size_t deg_left_;
  std::size_t deg_right_;
  std::vector<Edge> edges_;
};

struct ConfigurationModelOptions {
  /// Fresh half-edge pairings tried before giving up.
  std::size_t max_attempts = 10000;
  /// Random degree-preserving switch proposals per attempt, as a multiple of the edge count.
  std::size_t switch_budget_per_edge = 200;
};

/// Random simple biregular graph: uniform half-edge pairing, then parallel
/// edges are removed with random degree-preserving switches
/// (u,v),(u',v') -> (u,v'),(u',v).
BiregularBipartiteGraph generate_configuration_model(std::size_t n, std::size_t m,
                                                     std::size_t deg_left, std::size_t deg_right,
                                                     std::uint64_t seed,
                                                     const ConfigurationModelOptions& options = {});

struct ExpansionReport {
  Side side;
  std::size_t max_subset_size;
  /// worst_ratio[s-1] = min over |S| = s of |Γ(S)| / (Δ s).
  std::vector<double> worst_ratio;
  /// worst_neighborhood[s-1] = the minimizing |Γ(S)|.
  std::vector<std::size_t> worst_neighborhood;
  double delta_hat;  // 1 - min ratio over all audited sizes
  double gamma_hat;  // max_subset_size / n_side
};

/// Exhaustive small-set expansion audit up to `s_max`. Refuses with
/// BudgetExceeded when Σ_s C(n_side, s) exceeds `budget`.
ExpansionReport expansion_audit(const BiregularBipartiteGraph& g, Side side, std::size_t s_max,
                                double budget = 5e7);

struct CorrectionBound {
  std::size_t weight;
  bool applicable;  // δ̂_V < 1/6 and δ̂_C < 1/6
};

/// floor(min(γ_V n, γ_C m) / (3 (1 + Δ_C))) with audited γ̂ values.
CorrectionBound theorem1_bound(const BiregularBipartiteGraph& g, const ExpansionReport& left,
                               const ExpansionReport& right);

/// The bound from raw quantities; `gamma_n` and `gamma_m` are the subset sizes γ_V n and γ_C m.
std::size_t correction_radius(std::size_t gamma_n, std::size_t gamma_m, std::size_t deg_right);

void write_graph(std::ostream& os, const BiregularBipartiteGraph& g);
BiregularBipartiteGraph read_graph(std::istream& is);

}  // namespace qldpc
