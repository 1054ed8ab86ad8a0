#include "qldpc/rng.hpp"

#include <cmath>

#include "qldpc/errors.hpp"

namespace qldpc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = std::uint64_t{a} * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

PhiloxStream::PhiloxStream(std::uint64_t master_seed, std::uint64_t index, StreamTag tag)
    : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      counter_{0, static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
               static_cast<std::uint32_t>(index >> 32)} {}

void PhiloxStream::refill() {
  block_ = philox4x32_10(counter_, key_);
  ++counter_[0];
  next_ = 0;
}

PhiloxStream::result_type PhiloxStream::operator()() {
  if (next_ == 4) refill();
  return block_[next_++];
}

std::uint64_t PhiloxStream::next_u64() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  return (hi << 32) | lo;
}

double PhiloxStream::uniform_open() {
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::uint64_t PhiloxStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw ParameterError("uniform_index over an empty range");
  // Rejection on the top of the range keeps the distribution exact.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x > limit);
  return x % n;
}

std::vector<Index> bernoulli_support(std::size_t n, double p, PhiloxStream& stream) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
  std::vector<Index> out;
  if (p == 0.0 || n == 0) return out;
  if (p == 1.0) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Index>(i);
    return out;
  }
  out.reserve(static_cast<std::size_t>(static_cast<double>(n) * p * 1.5) + 8);
  const double log_q = std::log1p(-p);
  double pos = 0.0;
  while (true) {
    // Gap to the next success is Geometric(p) on {0, 1, ...}.
    pos += std::floor(std::log(stream.uniform_open()) / log_q);
    if (pos >= static_cast<double>(n)) break;
    out.push_back(static_cast<Index>(pos));
    pos += 1.0;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  PhiloxStream s(master, index, StreamTag::kSeedDerivation);
  return s.next_u64();
}

}  // namespace qldpc
