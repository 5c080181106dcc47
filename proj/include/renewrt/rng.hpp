#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace renewrt {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters. Pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key);
};

/// Counter-based random stream. A stream is identified by (seed, stream_id)
/// and is an independent Philox sequence: the key is the 64-bit seed, the
/// upper counter words carry the stream id and the lower words count blocks.
/// Satisfies std::uniform_random_bit_generator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1), 53-bit resolution. Never returns
  /// exactly 0 or 1.
  double uniform();

  /// Exponential variate with the given rate by inverse CDF. Strictly positive.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

/// Inverse-CDF exponential draw from an explicit uniform u in (0, 1].
double exponential_from_uniform(double u, double rate);

}  // namespace renewrt
