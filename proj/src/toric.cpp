#include "qldpc/toric.hpp"

#include <algorithm>
#include <string>

#include "qldpc/errors.hpp"
#include "qldpc/matching.hpp"
#include "qldpc/parallel.hpp"
#include "qldpc/rng.hpp"

namespace qldpc {

Index ToricCode::horizontal(std::size_t r, std::size_t c) const {
  return static_cast<Index>((r % L) * L + (c % L));
}

Index ToricCode::vertical(std::size_t r, std::size_t c) const {
  return static_cast<Index>(L * L + (r % L) * L + (c % L));
}

ToricCode build_toric(std::size_t L) {
  if (L < 2) throw ParameterError("toric code needs L >= 2, got " + std::to_string(L));
  ToricCode code;
  code.L = L;
  auto h = [L](std::size_t r, std::size_t c) { return static_cast<Index>((r % L) * L + (c % L)); };
  auto v = [L](std::size_t r, std::size_t c) { return static_cast<Index>(L * L + (r % L) * L + (c % L)); };
  std::vector<std::vector<Index>> stars(L * L), plaquettes(L * L);
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) {
      auto& s = stars[r * L + c];
      s = {h(r, c), h(r, c + L - 1), v(r, c), v(r + L - 1, c)};
      std::sort(s.begin(), s.end());
      auto& p = plaquettes[r * L + c];
      p = {h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)};
      std::sort(p.begin(), p.end());
    }
  }
  const std::size_t n = 2 * L * L;
  code.css = make_css_code(SparseBitMatrix(L * L, n, std::move(stars)),
                           SparseBitMatrix(L * L, n, std::move(plaquettes)));
  return code;
}

namespace {

std::size_t ring_distance(std::size_t L, std::size_t a, std::size_t b) {
  const std::size_t forward = (b + L - a) % L;
  return std::min(forward, L - forward);
}

}  // namespace

std::size_t toric_distance(std::size_t L, Index a, Index b) {
  return ring_distance(L, a % L, b % L) + ring_distance(L, a / L, b / L);
}

std::vector<Index> toric_path(const ToricCode& code, Sector errors, Index a, Index b) {
  const std::size_t L = code.L;
  if (a >= L * L || b >= L * L) throw DimensionError("toric_path: check index out of range");
  std::size_t r = a / L, c = a % L;
  const std::size_t tr = b / L, tc = b % L;
  const bool on_vertices = errors == Sector::kZ;
  std::vector<Index> path;

  const std::size_t col_forward = (tc + L - c) % L;
  const bool col_up = col_forward <= L - col_forward;
  const std::size_t col_steps = col_up ? col_forward : L - col_forward;
  for (std::size_t s = 0; s < col_steps; ++s) {
    if (col_up) {
      path.push_back(on_vertices ? code.horizontal(r, c) : code.vertical(r, c + 1));
      c = (c + 1) % L;
    } else {
      path.push_back(on_vertices ? code.horizontal(r, c + L - 1) : code.vertical(r, c));
      c = (c + L - 1) % L;
    }
  }
  const std::size_t row_forward = (tr + L - r) % L;
  const bool row_up = row_forward <= L - row_forward;
  const std::size_t row_steps = row_up ? row_forward : L - row_forward;
  for (std::size_t s = 0; s < row_steps; ++s) {
    if (row_up) {
      path.push_back(on_vertices ? code.vertical(r, c) : code.horizontal(r + 1, c));
      r = (r + 1) % L;
    } else {
      path.push_back(on_vertices ? code.vertical(r + L - 1, c) : code.horizontal(r, c));
      r = (r + L - 1) % L;
    }
  }
  return path;
}

DefectMatching match_defects(const ToricCode& code, const std::vector<Index>& defects, Sector errors) {
  if (defects.size() % 2 != 0) {
    throw InvalidSyndrome("odd number of defects (" + std::to_string(defects.size()) + ")");
  }
  const std::size_t n = defects.size();
  std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      cost[i][j] = cost[j][i] = static_cast<std::int64_t>(toric_distance(code.L, defects[i], defects[j]));
    }
  }
  DefectMatching m;
  for (const auto& [i, j] : min_cost_perfect_matching(cost)) {
    Index a = defects[i], b = defects[j];
    if (b < a) std::swap(a, b);
    m.pairs.emplace_back(a, b);
    m.paths.push_back(toric_path(code, errors, a, b));
    m.total_weight += cost[i][j];
  }
  return m;
}

BitVector mwpm_decode(const ToricCode& code, const BitVector& syndrome, Sector errors) {
  const SparseBitMatrix& checks = code.css.checks_for(errors);
  if (syndrome.length() != checks.n_rows()) {
    throw DimensionError("toric syndrome length " + std::to_string(syndrome.length()) + " != " +
                         std::to_string(checks.n_rows()));
  }
  BitVector correction(code.n_qubits());
  for (const auto& path : match_defects(code, syndrome.support(), errors).paths) {
    for (Index q : path) correction.flip(q);
  }
  return correction;
}

bool toric_logical_failure(const ToricCode& code, const BitVector& residual, Sector errors) {
  if (residual.length() != code.n_qubits()) throw DimensionError("toric residual has the wrong length");
  if (!mat_vec_mul(code.css.checks_for(errors), residual).none()) {
    throw InvalidSyndrome("toric residual has a nonzero syndrome");
  }
  // Two cuts dual to the logical representatives of the residual's type.
  bool first = false, second = false;
  for (std::size_t i = 0; i < code.L; ++i) {
    if (errors == Sector::kZ) {
      first ^= residual.test(code.vertical(0, i));
      second ^= residual.test(code.horizontal(i, 0));
    } else {
      first ^= residual.test(code.horizontal(0, i));
      second ^= residual.test(code.vertical(i, 0));
    }
  }
  return first || second;
}

ToricTrial toric_trial(const ToricCode& code, double p, std::uint64_t seed, std::uint64_t trial) {
  const std::size_t n = code.n_qubits();
  PhiloxStream x_stream(seed, trial, StreamTag::kXNoise);
  PhiloxStream z_stream(seed, trial, StreamTag::kZNoise);
  const BitVector x_error = BitVector::from_support(n, bernoulli_support(n, p, x_stream));
  const BitVector z_error = BitVector::from_support(n, bernoulli_support(n, p, z_stream));
  ToricTrial t;
  {
    const BitVector residual =
        z_error ^ mwpm_decode(code, mat_vec_mul(code.css.hx, z_error), Sector::kZ);
    t.z_fail = toric_logical_failure(code, residual, Sector::kZ);
  }
  {
    const BitVector residual =
        x_error ^ mwpm_decode(code, mat_vec_mul(code.css.hz, x_error), Sector::kX);
    t.x_fail = toric_logical_failure(code, residual, Sector::kX);
  }
  return t;
}

EstimateWithCI toric_estimate(const ToricCode& code, double p, std::size_t trials, std::uint64_t seed,
                              unsigned workers) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
  std::vector<std::size_t> failures(std::max(1u, workers), 0);
  parallel_chunks(trials, workers, 256, [&](unsigned worker, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) failures[worker] += toric_trial(code, p, seed, t).block_fail();
  });
  std::size_t total = 0;
  for (auto f : failures) total += f;
  return make_estimate(p, total, trials);
}

}  // namespace qldpc
