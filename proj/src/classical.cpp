#include "qldpc/classical.hpp"

#include <bit>

#include "qldpc/errors.hpp"
#include "qldpc/parallel.hpp"
#include "qldpc/rng.hpp"
#include "qldpc/stats.hpp"

namespace qldpc {

ClassicalCode code_from_graph(const BiregularBipartiteGraph& g, Orientation orientation) {
  std::vector<std::vector<Index>> rows(g.n_right());
  for (const Edge& e : g.edges()) rows[e.right].push_back(e.left);
  SparseBitMatrix h(g.n_right(), g.n_left(), std::move(rows));
  if (orientation == Orientation::kTransposed) h = transpose(h);
  return ClassicalCode{std::move(h), g, orientation};
}

namespace {

// Incremental state for the flip loop: syndrome, per-variable unsatisfied
// counts and a bitset of variables currently meeting the flip condition.
class FlipState {
 public:
  FlipState(const ClassicalCode& code, const std::vector<std::vector<Index>>& var_checks,
            const BitVector& y)
      : code_(code),
        var_checks_(var_checks),
        syndrome_(mat_vec_mul(code.H, y)),
        unsat_(code.n(), 0),
        threshold_(code.n(), 0),
        eligible_(code.n()) {
    for (std::size_t i = 0; i < code.n(); ++i) {
      threshold_[i] = (var_checks_[i].size() + 1) / 2;
      for (Index j : var_checks_[i]) unsat_[i] += syndrome_.test(j);
      refresh(i);
    }
  }

  // Lowest eligible variable, or n if none.
  std::size_t next() const {
    auto words = eligible_.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (words[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words[w]));
    }
    return code_.n();
  }

  void flip(std::size_t i) {
    for (Index j : var_checks_[i]) {
      syndrome_.flip(j);
      const bool now_unsat = syndrome_.test(j);
      for (Index k : code_.H.row(j)) {
        unsat_[k] = now_unsat ? unsat_[k] + 1 : unsat_[k] - 1;
        refresh(k);
      }
    }
  }

  bool satisfied() const { return syndrome_.none(); }

 private:
  void refresh(std::size_t i) {
    eligible_.set(i, !var_checks_[i].empty() && unsat_[i] >= threshold_[i]);
  }

  const ClassicalCode& code_;
  const std::vector<std::vector<Index>>& var_checks_;
  BitVector syndrome_;
  std::vector<std::size_t> unsat_;
  std::vector<std::size_t> threshold_;
  BitVector eligible_;
};

FlipResult run_flip(const ClassicalCode& code, const std::vector<std::vector<Index>>& var_checks,
                    const BitVector& y, std::size_t cap) {
  FlipState state(code, var_checks, y);
  FlipResult result;
  result.estimate = BitVector(code.n());
  while (true) {
    const std::size_t i = state.next();
    if (i == code.n()) break;
    if (result.iterations == cap) {
      result.stalled = true;
      break;
    }
    state.flip(i);
    result.estimate.flip(i);
    ++result.iterations;
  }
  result.status = state.satisfied() ? DecodeStatus::kConverged : DecodeStatus::kFail;
  return result;
}

}  // namespace

FlipResult flip_decode(const ClassicalCode& code, const BitVector& y, std::size_t iteration_cap) {
  if (y.length() != code.n()) {
    throw DimensionError("flip_decode: word length " + std::to_string(y.length()) +
                         " != code length " + std::to_string(code.n()));
  }
  const auto var_checks = code.H.column_supports();
  return run_flip(code, var_checks, y, iteration_cap == 0 ? 2 * code.m() : iteration_cap);
}

FlipBenchmark flip_benchmark(const ClassicalCode& code, double p, std::size_t trials,
                             std::uint64_t seed, unsigned workers) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
  const auto var_checks = code.H.column_supports();
  const std::size_t cap = 2 * code.m();
  std::vector<std::size_t> failures(std::max(1u, workers), 0);
  parallel_chunks(trials, workers, 256, [&](unsigned worker, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      PhiloxStream stream(seed, t, StreamTag::kClassicalNoise);
      const auto support = bernoulli_support(code.n(), p, stream);
      const BitVector error = BitVector::from_support(code.n(), support);
      const FlipResult r = run_flip(code, var_checks, error, cap);
      if (!r.converged() || r.estimate != error) ++failures[worker];
    }
  });
  FlipBenchmark b;
  b.trials = trials;
  for (auto f : failures) b.failures += f;
  b.failure_rate = trials == 0 ? 0.0 : static_cast<double>(b.failures) / static_cast<double>(trials);
  b.ci99 = wald_halfwidth(b.failures, trials);
  return b;
}

GraphSelection select_best_graph(std::span<const BiregularBipartiteGraph> candidates, double p,
                                 std::size_t trials, std::uint64_t seed, unsigned workers) {
  if (candidates.empty()) throw ParameterError("select_best_graph: no candidates");
  GraphSelection selection;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    selection.benchmarks.push_back(
        flip_benchmark(code_from_graph(candidates[i]), p, trials, seed, workers));
    if (selection.benchmarks[i].failures < selection.benchmarks[selection.index].failures) {
      selection.index = i;
    }
  }
  return selection;
}

}  // namespace qldpc
