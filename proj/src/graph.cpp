#include "qldpc/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "qldpc/errors.hpp"
#include "qldpc/rng.hpp"

namespace qldpc {

BiregularBipartiteGraph::BiregularBipartiteGraph(std::size_t n_left, std::size_t n_right,
                                                 std::size_t deg_left, std::size_t deg_right,
                                                 std::vector<Edge> edges)
    : n_left_(n_left),
      n_right_(n_right),
      deg_left_(deg_left),
      deg_right_(deg_right),
      edges_(std::move(edges)) {
  if (deg_left_ * n_left_ != deg_right_ * n_right_) {
    throw ParameterError("handshake violated: " + std::to_string(deg_left_) + "*" +
                         std::to_string(n_left_) + " != " + std::to_string(deg_right_) + "*" +
                         std::to_string(n_right_));
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ParameterError("graph has a repeated edge");
  }
  std::vector<std::size_t> dl(n_left_, 0), dr(n_right_, 0);
  for (const Edge& e : edges_) {
    if (e.left >= n_left_ || e.right >= n_right_) {
      throw ParameterError("edge endpoint out of range");
    }
    ++dl[e.left];
    ++dr[e.right];
  }
  for (std::size_t i = 0; i < n_left_; ++i) {
    if (dl[i] != deg_left_) {
      throw ParameterError("left node " + std::to_string(i) + " has degree " +
                           std::to_string(dl[i]) + ", expected " + std::to_string(deg_left_));
    }
  }
  for (std::size_t j = 0; j < n_right_; ++j) {
    if (dr[j] != deg_right_) {
      throw ParameterError("right node " + std::to_string(j) + " has degree " +
                           std::to_string(dr[j]) + ", expected " + std::to_string(deg_right_));
    }
  }
}

std::vector<std::vector<Index>> BiregularBipartiteGraph::adjacency(Side s) const {
  std::vector<std::vector<Index>> adj(n_side(s));
  for (const Edge& e : edges_) {
    if (s == Side::kLeft) {
      adj[e.left].push_back(e.right);
    } else {
      adj[e.right].push_back(e.left);
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

// ---------------------------------------------------------------------------
// Configuration model

namespace {

class EdgeCounts {
 public:
  explicit EdgeCounts(std::size_t m) : m_(m) {}
  std::uint32_t& operator[](const Edge& e) { return counts_[std::uint64_t{e.left} * m_ + e.right]; }
  std::uint32_t get(const Edge& e) const {
    auto it = counts_.find(std::uint64_t{e.left} * m_ + e.right);
    return it == counts_.end() ? 0 : it->second;
  }
  void clear() { counts_.clear(); }

 private:
  std::size_t m_;
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

// Removes parallel edges in place. Returns false if the switch budget ran out.
bool repair_multi_edges(std::vector<Edge>& edges, EdgeCounts& counts, std::size_t budget,
                        PhiloxStream& rng) {
  std::vector<std::size_t> pending;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (counts.get(edges[k]) > 1) pending.push_back(k);
  }
  std::size_t proposals = 0;
  for (std::size_t k : pending) {
    while (counts.get(edges[k]) > 1) {
      if (proposals++ >= budget) return false;
      const std::size_t f = rng.uniform_index(edges.size());
      const Edge e = edges[k];
      const Edge g = edges[f];
      if (g.left == e.left || g.right == e.right) continue;
      const Edge e_new{e.left, g.right};
      const Edge g_new{g.left, e.right};
      if (counts.get(e_new) != 0 || counts.get(g_new) != 0) continue;
      --counts[e];
      --counts[g];
      ++counts[e_new];
      ++counts[g_new];
      edges[k] = e_new;
      edges[f] = g_new;
    }
  }
  return true;
}

}  // namespace

BiregularBipartiteGraph generate_configuration_model(std::size_t n, std::size_t m,
                                                     std::size_t deg_left, std::size_t deg_right,
                                                     std::uint64_t seed,
                                                     const ConfigurationModelOptions& options) {
  if (n < 1 || m < 1 || deg_left < 1 || deg_right < 1) {
    throw ParameterError("graph sizes and degrees must be positive");
  }
  if (deg_left * n != deg_right * m) {
    throw ParameterError("handshake violated: deg_left*n = " + std::to_string(deg_left * n) +
                         " but deg_right*m = " + std::to_string(deg_right * m));
  }
  if (deg_left > m || deg_right > n) {
    throw GenerationError("no simple graph exists: a degree exceeds the opposite side size");
  }
  const std::size_t n_edges = deg_left * n;
  std::vector<Index> right_half(n_edges);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t t = 0; t < deg_right; ++t) right_half[j * deg_right + t] = static_cast<Index>(j);
  }

  EdgeCounts counts(m);
  std::vector<Edge> edges(n_edges);
  for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
    PhiloxStream rng(seed, attempt, StreamTag::kGraph);
    std::vector<Index> perm = right_half;
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    }
    counts.clear();
    for (std::size_t k = 0; k < n_edges; ++k) {
      edges[k] = Edge{static_cast<Index>(k / deg_left), perm[k]};
      ++counts[edges[k]];
    }
    if (repair_multi_edges(edges, counts, options.switch_budget_per_edge * n_edges, rng)) {
      return BiregularBipartiteGraph(n, m, deg_left, deg_right, edges);
    }
  }
  throw GenerationError("could not produce a simple (" + std::to_string(deg_left) + "," +
                        std::to_string(deg_right) + ")-biregular graph in " +
                        std::to_string(options.max_attempts) + " attempts");
}

// ---------------------------------------------------------------------------
// Expansion audit

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

struct AuditWalk {
  std::size_t n_side;
  std::size_t words;
  std::size_t s_max;
  const std::vector<std::uint64_t>& nbr;  // n_side * words
  std::vector<std::uint64_t> stack;       // (s_max + 1) * words of partial unions
  std::vector<std::size_t> best;          // best[s-1]

  void descend(std::size_t depth, std::size_t start) {
    const std::uint64_t* parent = stack.data() + depth * words;
    std::uint64_t* child = stack.data() + (depth + 1) * words;
    for (std::size_t v = start; v < n_side; ++v) {
      const std::uint64_t* nv = nbr.data() + v * words;
      std::size_t count = 0;
      for (std::size_t w = 0; w < words; ++w) {
        child[w] = parent[w] | nv[w];
        count += std::popcount(child[w]);
      }
      best[depth] = std::min(best[depth], count);
      if (depth + 1 < s_max) descend(depth + 1, v + 1);
    }
  }
};

}  // namespace

ExpansionReport expansion_audit(const BiregularBipartiteGraph& g, Side side, std::size_t s_max,
                                double budget) {
  const std::size_t n_side = g.n_side(side);
  const std::size_t n_other = side == Side::kLeft ? g.n_right() : g.n_left();
  if (s_max < 1 || s_max > n_side) {
    throw ParameterError("s_max must lie in [1, " + std::to_string(n_side) + "]");
  }
  double cost = 0.0;
  for (std::size_t s = 1; s <= s_max; ++s) cost += binomial(n_side, s);
  if (cost > budget) {
    throw BudgetExceeded("expansion audit of " + std::to_string(n_side) + " nodes up to size " +
                             std::to_string(s_max) + " exceeds budget",
                         cost);
  }

  const std::size_t words = (n_other + 63) / 64;
  std::vector<std::uint64_t> nbr(n_side * words, 0);
  const auto adj = g.adjacency(side);
  for (std::size_t v = 0; v < n_side; ++v) {
    for (Index u : adj[v]) nbr[v * words + (u >> 6)] |= std::uint64_t{1} << (u & 63);
  }
  AuditWalk walk{n_side, words, s_max, nbr, std::vector<std::uint64_t>((s_max + 1) * words, 0),
                 std::vector<std::size_t>(s_max, n_other + 1)};
  walk.descend(0, 0);

  ExpansionReport report{side, s_max, {}, walk.best, 0.0,
                         static_cast<double>(s_max) / static_cast<double>(n_side)};
  const double deg = static_cast<double>(g.deg_side(side));
  double min_ratio = 1.0;
  for (std::size_t s = 1; s <= s_max; ++s) {
    const double ratio = static_cast<double>(walk.best[s - 1]) / (deg * static_cast<double>(s));
    report.worst_ratio.push_back(ratio);
    min_ratio = std::min(min_ratio, ratio);
  }
  report.delta_hat = 1.0 - min_ratio;
  return report;
}

std::size_t correction_radius(std::size_t gamma_n, std::size_t gamma_m, std::size_t deg_right) {
  return std::min(gamma_n, gamma_m) / (3 * (1 + deg_right));
}

CorrectionBound theorem1_bound(const BiregularBipartiteGraph& g, const ExpansionReport& left,
                               const ExpansionReport& right) {
  if (left.side != Side::kLeft || right.side != Side::kRight) {
    throw ParameterError("theorem1_bound expects a left report and a right report");
  }
  if (left.max_subset_size > g.n_left() || right.max_subset_size > g.n_right()) {
    throw ParameterError("expansion reports do not belong to this graph");
  }
  CorrectionBound bound;
  bound.weight = correction_radius(left.max_subset_size, right.max_subset_size, g.deg_right());
  bound.applicable = left.delta_hat < 1.0 / 6.0 && right.delta_hat < 1.0 / 6.0;
  return bound;
}

// ---------------------------------------------------------------------------
// Text format

void write_graph(std::ostream& os, const BiregularBipartiteGraph& g) {
  os << g.n_left() << ' ' << g.n_right() << ' ' << g.deg_left() << ' ' << g.deg_right() << '\n';
  for (const Edge& e : g.edges()) os << e.left << ' ' << e.right << '\n';
}

BiregularBipartiteGraph read_graph(std::istream& is) {
  std::size_t n = 0, m = 0, dl = 0, dr = 0;
  if (!(is >> n >> m >> dl >> dr)) throw ParameterError("graph file: malformed header");
  std::vector<Edge> edges;
  edges.reserve(n * dl);
  long long l = 0, r = 0;
  while (is >> l >> r) {
    if (l < 0 || r < 0) throw ParameterError("graph file: negative node index");
    edges.push_back(Edge{static_cast<Index>(l), static_cast<Index>(r)});
  }
  if (!is.eof()) throw ParameterError("graph file: malformed edge line");
  if (edges.size() != n * dl) {
    throw ParameterError("graph file: expected " + std::to_string(n * dl) + " edges, found " +
                         std::to_string(edges.size()));
  }
  return BiregularBipartiteGraph(n, m, dl, dr, std::move(edges));
}

}  // namespace qldpc
