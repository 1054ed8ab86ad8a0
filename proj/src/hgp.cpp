#include "qldpc/hgp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "qldpc/classical.hpp"
#include "qldpc/errors.hpp"

namespace qldpc {

bool css_orthogonal(const SparseBitMatrix& hx, const SparseBitMatrix& hz) {
  if (hx.n_cols() != hz.n_cols()) return false;
  const auto z_cols = hz.column_supports();
  std::vector<std::uint32_t> overlap(hz.n_rows(), 0);
  std::vector<Index> touched;
  for (std::size_t r = 0; r < hx.n_rows(); ++r) {
    touched.clear();
    for (Index q : hx.row(r)) {
      for (Index z : z_cols[q]) {
        if (overlap[z]++ == 0) touched.push_back(z);
      }
    }
    bool ok = true;
    for (Index z : touched) {
      ok = ok && (overlap[z] % 2 == 0);
      overlap[z] = 0;
    }
    if (!ok) return false;
  }
  return true;
}

CssCode make_css_code(SparseBitMatrix hx, SparseBitMatrix hz) {
  if (hx.n_cols() != hz.n_cols()) throw DimensionError("H_X and H_Z act on different qubit counts");
  if (!css_orthogonal(hx, hz)) throw ParameterError("H_X H_Z^T != 0");
  const std::size_t n = hx.n_cols();
  return CssCode{std::move(hx), std::move(hz), BlockSplit{n, 0}, std::nullopt};
}

CssCode hypergraph_product(const SparseBitMatrix& h1, const SparseBitMatrix& h2) {
  const std::size_t m1 = h1.n_rows(), n1 = h1.n_cols();
  const std::size_t m2 = h2.n_rows(), n2 = h2.n_cols();
  const std::size_t v_block = n1 * n2;
  const std::size_t n_qubits = v_block + m1 * m2;
  const auto h1_cols = h1.column_supports();
  const auto h2_cols = h2.column_supports();

  auto v_qubit = [&](std::size_t v1, std::size_t v2) { return static_cast<Index>(v1 * n2 + v2); };
  auto c_qubit = [&](std::size_t c1, std::size_t c2) {
    return static_cast<Index>(v_block + c1 * m2 + c2);
  };

  std::vector<std::vector<Index>> x_rows(n1 * m2);
  for (std::size_t v1 = 0; v1 < n1; ++v1) {
    for (std::size_t c2 = 0; c2 < m2; ++c2) {
      auto& row = x_rows[v1 * m2 + c2];
      for (Index v2 : h2.row(c2)) row.push_back(v_qubit(v1, v2));
      for (Index c1 : h1_cols[v1]) row.push_back(c_qubit(c1, c2));
    }
  }
  std::vector<std::vector<Index>> z_rows(m1 * n2);
  for (std::size_t c1 = 0; c1 < m1; ++c1) {
    for (std::size_t v2 = 0; v2 < n2; ++v2) {
      auto& row = z_rows[c1 * n2 + v2];
      for (Index v1 : h1.row(c1)) row.push_back(v_qubit(v1, v2));
      for (Index c2 : h2_cols[v2]) row.push_back(c_qubit(c1, c2));
    }
  }
  CssCode code{SparseBitMatrix(n1 * m2, n_qubits, std::move(x_rows)),
               SparseBitMatrix(m1 * n2, n_qubits, std::move(z_rows)),
               BlockSplit{v_block, m1 * m2}, ProductFactors{h1, h2}};
  if (!css_orthogonal(code.hx, code.hz)) {
    throw InternalError("hypergraph product violated H_X H_Z^T = 0");
  }
  return code;
}

CssCode hypergraph_product(const BiregularBipartiteGraph& g1, const BiregularBipartiteGraph& g2) {
  return hypergraph_product(code_from_graph(g1).H, code_from_graph(g2).H);
}

std::size_t product_dimension(const ProductFactors& f) {
  const std::size_t r1 = rank(f.h1), r2 = rank(f.h2);
  const std::size_t k1 = f.h1.n_cols() - r1, k1t = f.h1.n_rows() - r1;
  const std::size_t k2 = f.h2.n_cols() - r2, k2t = f.h2.n_rows() - r2;
  return k1 * k2 + k1t * k2t;
}

CodeParameters code_parameters(const CssCode& c) {
  CodeParameters p;
  p.n = c.n_qubits();
  p.rank_hx = rank(c.hx);
  p.rank_hz = rank(c.hz);
  if (p.rank_hx + p.rank_hz > p.n) throw InternalError("check ranks exceed the qubit count");
  p.k = p.n - p.rank_hx - p.rank_hz;
  p.rate = p.n == 0 ? 0.0 : static_cast<double>(p.k) / static_cast<double>(p.n);
  if (c.factors) {
    p.k_formula = product_dimension(*c.factors);
    if (*p.k_formula != p.k) {
      throw InternalError("rank-based k = " + std::to_string(p.k) + " but k1k2 + k1'k2' = " +
                          std::to_string(*p.k_formula));
    }
  }
  return p;
}

namespace {

std::vector<std::size_t> distinct(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::size_t> row_weights(const SparseBitMatrix& m) {
  std::vector<std::size_t> w(m.n_rows());
  for (std::size_t r = 0; r < m.n_rows(); ++r) w[r] = m.row_weight(r);
  return w;
}

}  // namespace

WeightProfile weight_profile(const CssCode& c) {
  auto deg = c.hx.column_weights();
  const auto zdeg = c.hz.column_weights();
  for (std::size_t q = 0; q < deg.size(); ++q) deg[q] += zdeg[q];
  const auto split = static_cast<std::ptrdiff_t>(std::min(c.blocks.v_block, deg.size()));
  WeightProfile w;
  w.v_block_degrees = distinct({deg.begin(), deg.begin() + split});
  w.c_block_degrees = distinct({deg.begin() + split, deg.end()});
  w.qubit_degrees = distinct(deg);
  w.x_weights = distinct(row_weights(c.hx));
  w.z_weights = distinct(row_weights(c.hz));
  return w;
}

LogicalBasis logical_basis(const CssCode& c) {
  LogicalBasis basis;
  RowEchelon z_span = c.hz.echelon();
  for (auto& v : kernel_basis(c.hx)) {
    if (z_span.insert(v)) basis.z_logicals.push_back(std::move(v));
  }
  RowEchelon x_span = c.hx.echelon();
  for (auto& v : kernel_basis(c.hz)) {
    if (x_span.insert(v)) basis.x_logicals.push_back(std::move(v));
  }
  return basis;
}

namespace {

void check_kernel_budget(std::size_t dim, double budget, const char* what) {
  const double cost = std::ldexp(1.0, static_cast<int>(dim));
  if (cost > budget) {
    throw BudgetExceeded(std::string(what) + ": kernel of dimension " + std::to_string(dim) +
                             " is too large to enumerate",
                         cost);
  }
}

// Visits every nonzero element of span(basis) once, in Gray-code order.
template <typename Visit>
void for_each_span_element(const std::vector<BitVector>& basis, std::size_t length, Visit&& visit) {
  BitVector current(length);
  const std::uint64_t count = std::uint64_t{1} << basis.size();
  for (std::uint64_t i = 1; i < count; ++i) {
    current ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
    visit(current);
  }
}

std::optional<std::size_t> min_opt(std::optional<std::size_t> a, std::optional<std::size_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

// Minimum weight of ker(checks) outside rowspace(stabilizers).
std::optional<std::size_t> min_logical_weight(const SparseBitMatrix& checks,
                                              const SparseBitMatrix& stabilizers, double budget) {
  const auto basis = kernel_basis(checks);
  check_kernel_budget(basis.size(), budget, "brute_force_distance");
  const RowEchelon& stab = stabilizers.echelon();
  std::optional<std::size_t> best;
  for_each_span_element(basis, checks.n_cols(), [&](const BitVector& v) {
    const std::size_t w = v.weight();
    if (best && w >= *best) return;
    if (!stab.contains(v)) best = w;
  });
  return best;
}

}  // namespace

std::optional<std::size_t> classical_distance(const SparseBitMatrix& h, double budget) {
  const auto basis = kernel_basis(h);
  check_kernel_budget(basis.size(), budget, "classical_distance");
  std::optional<std::size_t> best;
  for_each_span_element(basis, h.n_cols(), [&](const BitVector& v) {
    const std::size_t w = v.weight();
    if (!best || w < *best) best = w;
  });
  return best;
}

Distances brute_force_distance(const CssCode& c, double budget) {
  Distances d;
  d.d_z = min_logical_weight(c.hx, c.hz, budget);
  d.d_x = min_logical_weight(c.hz, c.hx, budget);
  d.d = min_opt(d.d_x, d.d_z);
  if (c.factors) {
    const auto t1 = transpose(c.factors->h1), t2 = transpose(c.factors->h2);
    const auto d1 = classical_distance(c.factors->h1, budget);
    const auto d1t = classical_distance(t1, budget);
    const auto d2 = classical_distance(c.factors->h2, budget);
    const auto d2t = classical_distance(t2, budget);
    d.formula_d_x = min_opt(d1, d2t);
    d.formula_d_z = min_opt(d1t, d2);
    d.formula_available = true;
  }
  return d;
}

}  // namespace qldpc
