#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/hgp.hpp"
#include "qldpc/stats.hpp"

namespace qldpc {

/// Toric code on an L x L torus. Qubits are edges: horizontal edge (r, c)
/// joins vertices (r, c) and (r, c+1) and has index r*L + c; vertical edge
/// (r, c) joins (r, c) and (r+1, c) and has index L^2 + r*L + c.
/// X check (r, c) is the star of vertex (r, c); Z check (r, c) is the
/// plaquette whose top-left corner is vertex (r, c).
struct ToricCode {
  std::size_t L = 0;
  CssCode css;

  std::size_t n_qubits() const { return css.n_qubits(); }
  Index horizontal(std::size_t r, std::size_t c) const;
  Index vertical(std::size_t r, std::size_t c) const;
};

ToricCode build_toric(std::size_t L);

struct DefectMatching {
  std::vector<std::pair<Index, Index>> pairs;  // check indices, first < second
  std::vector<std::vector<Index>> paths;       // qubits of the geodesic joining each pair
  std::int64_t total_weight = 0;
};

/// Toroidal Manhattan distance between two checks (vertices or plaquettes).
std::size_t toric_distance(std::size_t L, Index a, Index b);

/// Qubits on the chosen geodesic between two checks detecting `errors`.
/// Columns are traversed first; each coordinate moves in the increasing
/// direction unless the decreasing one is strictly shorter.
std::vector<Index> toric_path(const ToricCode& code, Sector errors, Index a, Index b);

/// Exact minimum-weight perfect matching of the defects.
DefectMatching match_defects(const ToricCode& code, const std::vector<Index>& defects, Sector errors);

/// Correction for errors of the given type from the syndrome they leave on
/// the opposite checks (Z errors: X syndrome). Throws InvalidSyndrome on an
/// odd defect count.
BitVector mwpm_decode(const ToricCode& code, const BitVector& syndrome, Sector errors);

/// Winding-parity test of a zero-syndrome residual of the given error type.
/// Throws InvalidSyndrome when the residual has a nonzero syndrome.
bool toric_logical_failure(const ToricCode& code, const BitVector& residual, Sector errors);

struct ToricTrial {
  bool x_fail = false;
  bool z_fail = false;
  bool block_fail() const { return x_fail || z_fail; }
};

/// One trial with independent X and Z noise at rate p from the trial's own streams.
ToricTrial toric_trial(const ToricCode& code, double p, std::uint64_t seed, std::uint64_t trial);

/// Block failure rate q_log with a 99% interval.
EstimateWithCI toric_estimate(const ToricCode& code, double p, std::size_t trials, std::uint64_t seed,
                              unsigned workers = 1);

}  // namespace qldpc
