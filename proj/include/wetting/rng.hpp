#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace wetting {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32-10 block function.
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

/// 53-bit uniform in [0, 1) from two 32-bit words (x0 supplies the high bits).
inline double uniform_from_words(std::uint32_t x0, std::uint32_t x1) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(x0) << 32) | x1) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

inline PhiloxKey key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform attached to (sweep t, site) of stream `stream` under `seed`:
/// philox(ctr = {t_lo, t_hi, site, stream}, key = {seed_lo, seed_hi}), words 0 and 1.
double site_uniform(std::uint64_t seed, std::uint32_t stream, std::uint64_t t, std::uint32_t site);

/// Stream id of role `role` within work item `item`.
inline std::uint32_t stream_id(std::uint32_t item, std::uint32_t role) { return (item << 8) | (role & 0xffu); }

/// Sequential generator on top of Philox. Counter layout
/// {c_lo, c_hi, 0xffffffff, stream} so it never collides with site_uniform.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed = 0, std::uint32_t stream = 0) : key_(key_from_seed(seed)), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  void refill();

  PhiloxKey key_;
  std::uint32_t stream_;
  std::uint64_t counter_ = 0;
  PhiloxCounter buf_{};
  int used_ = 4;
};

}  // namespace wetting
