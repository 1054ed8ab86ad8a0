#include "qldpc/matching.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>

#include "qldpc/errors.hpp"

namespace qldpc {

namespace {

// Port of Joris van Rantwijk's primal-dual blossom algorithm with integer
// duals. Vertex duals are stored doubled, so slack(k) = y_i + y_j - 2 w_k.
// Edge endpoints are numbered p = 2k (u side) and 2k + 1 (v side).
class Blossom {
 public:
  Blossom(std::size_t n, std::span<const WeightedEdge> edges, bool max_cardinality)
      : nv_(static_cast<int>(n)), edges_(edges), max_cardinality_(max_cardinality) {
    const int ne = static_cast<int>(edges.size());
    std::int64_t max_weight = 0;
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) throw DimensionError("matching edge endpoint out of range");
      if (e.u == e.v) throw ParameterError("matching graph has a self-loop");
      max_weight = std::max(max_weight, e.weight);
    }
    endpoint_.resize(2 * static_cast<std::size_t>(ne));
    neighbend_.assign(n, {});
    for (int k = 0; k < ne; ++k) {
      endpoint_[2 * k] = static_cast<int>(edges[k].u);
      endpoint_[2 * k + 1] = static_cast<int>(edges[k].v);
      neighbend_[edges[k].u].push_back(2 * k + 1);
      neighbend_[edges[k].v].push_back(2 * k);
    }
    const std::size_t n2 = 2 * n;
    mate_.assign(n, -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(n);
    for (int v = 0; v < nv_; ++v) inblossom_[v] = v;
    blossomparent_.assign(n2, -1);
    blossomchilds_.assign(n2, {});
    blossombase_.assign(n2, -1);
    for (int v = 0; v < nv_; ++v) blossombase_[v] = v;
    blossomendps_.assign(n2, {});
    bestedge_.assign(n2, -1);
    blossombestedges_.assign(n2, {});
    has_bestedges_.assign(n2, 0);
    for (int b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
    // unused_ is popped from the back, like the reference's list.pop().
    std::reverse(unused_.begin(), unused_.end());
    dualvar_.assign(n2, 0);
    for (int v = 0; v < nv_; ++v) dualvar_[v] = max_weight;
    allowedge_.assign(static_cast<std::size_t>(ne), 0);
  }

  std::vector<std::int64_t> run() {
    if (edges_.empty()) return std::vector<std::int64_t>(static_cast<std::size_t>(nv_), -1);
    for (int stage = 0; stage < nv_; ++stage) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = nv_; b < 2 * nv_; ++b) {
        blossombestedges_[b].clear();
        has_bestedges_[b] = 0;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), 0);
      queue_.clear();
      for (int v = 0; v < nv_; ++v) {
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
      }
      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          const int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[v]) {
            const int k = p / 2;
            const int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            std::int64_t kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = 1;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              const int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = -1;
        std::int64_t delta = 0;
        int deltaedge = -1, deltablossom = -1;
        if (!max_cardinality_) {
          deltatype = 1;
          delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
        }
        for (int v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const std::int64_t d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * nv_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const std::int64_t ks = slack(bestedge_[b]);
            if (ks % 2 != 0) throw InternalError("blossom: odd slack between S-blossoms");
            const std::int64_t d = ks / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
              (deltatype == -1 || dualvar_[b] < delta)) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        if (deltatype == -1) {
          deltatype = 1;
          delta = std::max<std::int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
        }

        for (int v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 1) {
            dualvar_[v] -= delta;
          } else if (label_[inblossom_[v]] == 2) {
            dualvar_[v] += delta;
          }
        }
        for (int b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) {
              dualvar_[b] += delta;
            } else if (label_[b] == 2) {
              dualvar_[b] -= delta;
            }
          }
        }

        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge_[deltaedge] = 1;
          int i = endpoint_[2 * deltaedge], j = endpoint_[2 * deltaedge + 1];
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = 1;
          queue_.push_back(endpoint_[2 * deltaedge]);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (int b = nv_; b < 2 * nv_; ++b) {
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
          expand_blossom(b, true);
        }
      }
    }
    std::vector<std::int64_t> result(static_cast<std::size_t>(nv_), -1);
    for (int v = 0; v < nv_; ++v) {
      if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
    }
    return result;
  }

 private:
  std::int64_t slack(int k) const {
    return dualvar_[endpoint_[2 * k]] + dualvar_[endpoint_[2 * k + 1]] - 2 * edges_[k].weight;
  }

  static int wrap(int j, std::size_t size) {
    const int n = static_cast<int>(size);
    return ((j % n) + n) % n;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (int t : blossomchilds_[b]) leaves(t, out);
  }

  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p) {
    const int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      leaves(b, queue_);
    } else if (t == 2) {
      const int base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = endpoint_[2 * k], w = endpoint_[2 * k + 1];
    const int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    const int b = unused_.back();
    unused_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (int leaf : leaves(b)) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }

    std::vector<int> bestedgeto(2 * static_cast<std::size_t>(nv_), -1);
    for (int child : path) {
      std::vector<int> candidates;
      if (!has_bestedges_[child]) {
        for (int leaf : leaves(child)) {
          for (int p : neighbend_[leaf]) candidates.push_back(p / 2);
        }
      } else {
        candidates = blossombestedges_[child];
      }
      for (int e : candidates) {
        int i = endpoint_[2 * e], j = endpoint_[2 * e + 1];
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
          bestedgeto[bj] = e;
        }
      }
      blossombestedges_[child].clear();
      has_bestedges_[child] = 0;
      bestedge_[child] = -1;
    }
    blossombestedges_[b].clear();
    for (int e : bestedgeto) {
      if (e != -1) blossombestedges_[b].push_back(e);
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int e : blossombestedges_[b]) {
      if (bestedge_[b] == -1 || slack(e) < slack(bestedge_[b])) bestedge_[b] = e;
    }
  }

  void expand_blossom(int b, bool endstage) {
    const std::vector<int> children = blossomchilds_[b];
    for (int s : children) {
      blossomparent_[s] = -1;
      if (s < nv_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (int leaf : leaves(s)) inblossom_[leaf] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      const auto& childs = blossomchilds_[b];
      const auto& endps = blossomendps_[b];
      const std::size_t len = childs.size();
      const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
      int jstep, endptrick;
      if (j & 1) {
        j -= static_cast<int>(len);
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[endps[wrap(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[endps[wrap(j - endptrick, len)] / 2] = 1;
        j += jstep;
        p = endps[wrap(j - endptrick, len)] ^ endptrick;
        allowedge_[p / 2] = 1;
        j += jstep;
      }
      int bv = childs[wrap(j, len)];
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (childs[wrap(j, len)] != entrychild) {
        bv = childs[wrap(j, len)];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        int found = -1;
        for (int leaf : leaves(bv)) {
          found = leaf;
          if (label_[leaf] != 0) break;
        }
        if (found >= 0 && label_[found] != 0) {
          label_[found] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nv_) augment_blossom(t, v);
    auto& childs = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    const std::size_t len = childs.size();
    const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    int j = i;
    int jstep, endptrick;
    if (i & 1) {
      j -= static_cast<int>(len);
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      t = childs[wrap(j, len)];
      const int p = endps[wrap(j - endptrick, len)] ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = childs[wrap(j, len)];
      if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
  }

  void augment_matching(int k) {
    const int ends[2][2] = {{endpoint_[2 * k], 2 * k + 1}, {endpoint_[2 * k + 1], 2 * k}};
    for (const auto& start : ends) {
      int s = start[0];
      int p = start[1];
      while (true) {
        const int bs = inblossom_[s];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const int t = endpoint_[labelend_[bs]];
        const int bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const int j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  int nv_;
  std::span<const WeightedEdge> edges_;
  bool max_cardinality_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<char> has_bestedges_;
  std::vector<int> unused_;
  std::vector<std::int64_t> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
};

void check_cost_matrix(const std::vector<std::vector<std::int64_t>>& cost) {
  const std::size_t n = cost.size();
  if (n % 2 != 0) throw InvalidSyndrome("perfect matching needs an even vertex count, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (cost[i].size() != n) throw DimensionError("cost matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      if (cost[i][j] < 0) throw ParameterError("matching costs must be non-negative");
      if (cost[i][j] != cost[j][i]) throw ParameterError("cost matrix is not symmetric");
    }
  }
}

}  // namespace

std::vector<std::int64_t> max_weight_matching(std::size_t n_vertices, std::span<const WeightedEdge> edges,
                                              bool max_cardinality) {
  Blossom solver(n_vertices, edges, max_cardinality);
  return solver.run();
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> min_cost_perfect_matching(
    const std::vector<std::vector<std::int64_t>>& cost) {
  check_cost_matrix(cost);
  const std::size_t n = cost.size();
  std::int64_t max_cost = 0;
  for (const auto& row : cost) {
    for (auto c : row) max_cost = std::max(max_cost, c);
  }
  // Max-cardinality matchings on a complete graph are perfect; maximizing
  // sum(C - cost) over them minimizes the total cost.
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - (n > 0)) / 2);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) edges.push_back({i, j, max_cost + 1 - cost[i][j]});
  }
  const auto mate = max_weight_matching(n, edges, true);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (mate[i] < 0) throw InternalError("blossom matching left a vertex unmatched");
    if (static_cast<std::uint32_t>(mate[i]) > i) pairs.emplace_back(i, static_cast<std::uint32_t>(mate[i]));
  }
  return pairs;
}

std::int64_t brute_force_min_matching_cost(const std::vector<std::vector<std::int64_t>>& cost) {
  check_cost_matrix(cost);
  const std::size_t n = cost.size();
  if (n > 20) throw BudgetExceeded("brute-force matching on " + std::to_string(n) + " vertices", 0.0);
  std::vector<char> used(n, 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::function<void(std::int64_t)> rec = [&](std::int64_t acc) {
    if (acc >= best) return;
    std::size_t first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
      best = acc;
      return;
    }
    used[first] = 1;
    for (std::size_t j = first + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      rec(acc + cost[first][j]);
      used[j] = 0;
    }
    used[first] = 0;
  };
  rec(0);
  return n == 0 ? 0 : best;
}

}  // namespace qldpc
