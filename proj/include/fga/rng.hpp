#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fga {

// Counter-based pseudo-random generator (Philox-4x32, 10 rounds).
// Streams are cheap to create and statistically independent, so every
// (trial, client, phase) combination can own its own stream and results
// stay reproducible under any execution order.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_{static_cast<std::uint32_t>(stream),
                static_cast<std::uint32_t>(stream >> 32)} {}

  // Derives an independent child stream. Labels only need to be unique
  // among siblings.
  RngStream substream(std::uint64_t label) const {
    std::uint64_t seed =
        (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
    std::uint64_t parent =
        (static_cast<std::uint64_t>(stream_[1]) << 32) | stream_[0];
    return RngStream(seed, mix64(parent ^ mix64(label + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() {
    if (cached_) {
      cached_ = false;
      return cache_;
    }
    std::array<std::uint32_t, 4> out = block(counter_, key_);
    ++counter_;
    cache_ = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    cached_ = true;
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1); never returns an exact endpoint.
  double next_open_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool next_bernoulli(double p) { return next_double() < p; }

  // UniformRandomBitGenerator interface.
  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

  // Raw Philox block, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c[0];
      std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c[2];
      std::array<std::uint32_t, 4> next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<std::uint32_t>(p0)};
      c = next;
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return c;
  }

 private:
  struct Counter128 {
    std::uint64_t lo = 0;
    Counter128& operator++() {
      ++lo;
      return *this;
    }
  };

  std::array<std::uint32_t, 4> block(const Counter128& ctr,
                                     const std::array<std::uint32_t, 2>& key) {
    return block(std::array<std::uint32_t, 4>{
                     static_cast<std::uint32_t>(ctr.lo),
                     static_cast<std::uint32_t>(ctr.lo >> 32), stream_[0],
                     stream_[1]},
                 key);
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  Counter128 counter_;
  std::uint64_t cache_ = 0;
  bool cached_ = false;
};

}  // namespace fga
