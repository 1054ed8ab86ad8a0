#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/graph.hpp"

namespace qldpc {

/// Error sectors. A Z-type error is seen by the X checks (rows of H_X) and is
/// harmless iff it lies in rowspace(H_Z); symmetrically for X-type errors.
enum class Sector { kX, kZ };

struct BlockSplit {
  std::size_t v_block = 0;  // n1 * n2
  std::size_t c_block = 0;  // m1 * m2
};

/// Classical factors of a hypergraph product, kept for parameter cross-checks.
struct ProductFactors {
  SparseBitMatrix h1;
  SparseBitMatrix h2;
};

/// CSS code given by its X and Z check matrices, with H_X H_Z^T = 0.
struct CssCode {
  SparseBitMatrix hx;
  SparseBitMatrix hz;
  BlockSplit blocks;
  std::optional<ProductFactors> factors;

  std::size_t n_qubits() const { return hx.n_cols(); }
  /// Checks that detect errors of the given type.
  const SparseBitMatrix& checks_for(Sector errors) const { return errors == Sector::kZ ? hx : hz; }
  /// Stabilizers of the same type as the errors.
  const SparseBitMatrix& stabilizers_for(Sector errors) const {
    return errors == Sector::kZ ? hz : hx;
  }
};

bool css_orthogonal(const SparseBitMatrix& hx, const SparseBitMatrix& hz);

/// Wraps arbitrary check matrices; throws ParameterError if they do not commute.
CssCode make_css_code(SparseBitMatrix hx, SparseBitMatrix hz);

/// Hypergraph product of ker H1 and ker H2 (H_i is m_i x n_i).
///
/// Qubits: V1xV2 row-major (v1*n2 + v2), then C1xC2 (n1*n2 + c1*m2 + c2).
/// X generator (v1, c2), row v1*m2 + c2:  [ I_n1 (x) H2 | H1^T (x) I_m2 ].
/// Z generator (c1, v2), row c1*n2 + v2:  [ H1 (x) I_n2 | I_m1 (x) H2^T ].
CssCode hypergraph_product(const SparseBitMatrix& h1, const SparseBitMatrix& h2);
CssCode hypergraph_product(const BiregularBipartiteGraph& g1, const BiregularBipartiteGraph& g2);

struct CodeParameters {
  std::size_t n = 0;
  std::size_t k = 0;
  double rate = 0.0;
  std::size_t rank_hx = 0;
  std::size_t rank_hz = 0;
  /// k1 k2 + k1^T k2^T, when the code is a product.
  std::optional<std::size_t> k_formula;
};

/// N, k = N - rank(H_X) - rank(H_Z) and the rate. For products, also checks
/// the rank-based k against the factor formula and throws InternalError on mismatch.
CodeParameters code_parameters(const CssCode& c);

/// k1 k2 + k1^T k2^T from the factor ranks.
std::size_t product_dimension(const ProductFactors& f);

struct WeightProfile {
  std::vector<std::size_t> qubit_degrees;  // distinct values of |X checks| + |Z checks| per qubit
  std::vector<std::size_t> x_weights;      // distinct X generator weights
  std::vector<std::size_t> z_weights;      // distinct Z generator weights
  std::vector<std::size_t> v_block_degrees;
  std::vector<std::size_t> c_block_degrees;
};

WeightProfile weight_profile(const CssCode& c);

struct LogicalBasis {
  /// Representatives of ker H_X / rowspace(H_Z).
  std::vector<BitVector> z_logicals;
  /// Representatives of ker H_Z / rowspace(H_X).
  std::vector<BitVector> x_logicals;
};

/// Cubic in N; meant for small codes.
LogicalBasis logical_basis(const CssCode& c);

/// Minimum weight of a nonzero word of ker H; nullopt when the kernel is trivial.
std::optional<std::size_t> classical_distance(const SparseBitMatrix& h, double budget = 1 << 26);

struct Distances {
  std::optional<std::size_t> d_x;  // min weight of ker H_Z \ rowspace(H_X)
  std::optional<std::size_t> d_z;  // min weight of ker H_X \ rowspace(H_Z)
  std::optional<std::size_t> d;
  /// Product codes only: the same distances from brute-forced factor distances,
  /// d_x = min(d1, d2^T) and d_z = min(d1^T, d2) for the qubit layout above.
  std::optional<std::size_t> formula_d_x;
  std::optional<std::size_t> formula_d_z;
  bool formula_available = false;
};

/// Exhaustive search over the kernels. Refuses (BudgetExceeded) when a kernel
/// has more than `budget` elements.
Distances brute_force_distance(const CssCode& c, double budget = 1 << 26);

}  // namespace qldpc
