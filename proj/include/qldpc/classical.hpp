#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/graph.hpp"

namespace qldpc {

/// Which side of the factor graph carries the variables. `kTransposed`
/// gives the code ker H^T whose variables are the graph's right nodes.
enum class Orientation { kStandard, kTransposed };

/// Classical code ker H. Rows of H are checks, columns are variables.
struct ClassicalCode {
  SparseBitMatrix H;
  BiregularBipartiteGraph graph;
  Orientation orientation;

  std::size_t n() const { return H.n_cols(); }
  std::size_t m() const { return H.n_rows(); }
};

ClassicalCode code_from_graph(const BiregularBipartiteGraph& g,
                              Orientation orientation = Orientation::kStandard);

enum class DecodeStatus { kConverged, kFail };

struct FlipResult {
  DecodeStatus status = DecodeStatus::kFail;
  BitVector estimate;  // Ê; meaningful only when converged
  std::size_t iterations = 0;
  bool stalled = false;  // hit the iteration cap

  bool converged() const { return status == DecodeStatus::kConverged; }
};

/// Bit-flip decoding of a received word y. A variable is flipped while it
/// has at least ceil(deg/2) unsatisfied checks, always choosing the lowest
/// such index. Iterations are capped at 2m (0 selects the default).
FlipResult flip_decode(const ClassicalCode& code, const BitVector& y, std::size_t iteration_cap = 0);

struct FlipBenchmark {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double failure_rate = 0.0;
  double ci99 = 0.0;
};

/// Block failure rate of flip under BSC(p), transmitting the zero codeword.
/// Trial t draws its error from the stream (seed, t).
FlipBenchmark flip_benchmark(const ClassicalCode& code, double p, std::size_t trials,
                             std::uint64_t seed, unsigned workers = 1);

struct GraphSelection {
  std::size_t index = 0;
  std::vector<FlipBenchmark> benchmarks;
};

/// Candidate with the lowest flip failure rate; ties go to the lowest index.
/// All candidates are benchmarked on the same error samples.
GraphSelection select_best_graph(std::span<const BiregularBipartiteGraph> candidates, double p,
                                 std::size_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace qldpc
