#include "favlab/rng.hpp"

namespace favlab {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
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

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t position) const {
  return philox4x32({static_cast<std::uint32_t>(position),
                     static_cast<std::uint32_t>(position >> 32),
                     static_cast<std::uint32_t>(stream_),
                     static_cast<std::uint32_t>(stream_ >> 32)},
                    key_);
}

std::uint32_t CounterRng::next_u32() {
  if (lane_ == 4) {
    buffer_ = block(position_++);
    lane_ = 0;
  }
  return buffer_[lane_++];
}

double CounterRng::next_double() {
  const std::uint32_t hi = next_u32();
  const std::uint32_t lo = next_u32();
  return to_unit_double(hi, lo);
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  while (true) {
    const std::uint64_t hi = next_u32();
    const std::uint64_t v = (hi << 32) | next_u32();
    if (v < limit) return v % bound;
  }
}

}  // namespace favlab
