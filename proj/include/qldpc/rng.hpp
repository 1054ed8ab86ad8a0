#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qldpc/gf2.hpp"

namespace qldpc {

/// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters. Every random draw in this library is a pure function of
/// (key, counter), so any trial can be replayed in isolation.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Purposes a stream can be drawn for. They occupy a separate counter word,
/// so streams for different purposes never overlap.
enum class StreamTag : std::uint32_t {
  kXNoise = 0,
  kZNoise = 1,
  kClassicalNoise = 2,
  kGraph = 3,
  kSeedDerivation = 4,
  kTest = 5,
};

/// Sequential generator over the Philox stream keyed by
/// (master_seed, index, tag). Satisfies UniformRandomBitGenerator.
class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t master_seed, std::uint64_t index, StreamTag tag);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()();
  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1), 53-bit resolution.
  double uniform_open();
  /// Uniform integer in [0, n), n >= 1, without modulo bias.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  unsigned next_ = 4;
};

/// Positions of an i.i.d. Bernoulli(p) vector of length n, sampled by
/// geometric skipping. Increasing order.
std::vector<Index> bernoulli_support(std::size_t n, double p, PhiloxStream& stream);

/// Derives an independent 64-bit seed from (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace qldpc
