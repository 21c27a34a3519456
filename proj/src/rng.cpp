#include "wetting/rng.hpp"

namespace wetting {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

double site_uniform(std::uint64_t seed, std::uint32_t stream, std::uint64_t t, std::uint32_t site) {
  const PhiloxCounter out = philox4x32(
      {static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32), site, stream}, key_from_seed(seed));
  return uniform_from_words(out[0], out[1]);
}

void CounterRng::refill() {
  buf_ = philox4x32({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32), 0xffffffffu,
                     stream_},
                    key_);
  ++counter_;
  used_ = 0;
}

CounterRng::result_type CounterRng::operator()() {
  if (used_ > 2) refill();
  const std::uint64_t v = (static_cast<std::uint64_t>(buf_[static_cast<std::size_t>(used_)]) << 32) |
                          buf_[static_cast<std::size_t>(used_ + 1)];
  used_ += 2;
  return v;
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = max() - max() % n;
  for (;;) {
    const std::uint64_t v = (*this)();
    if (v < limit) return v % n;
  }
}

}  // namespace wetting
