#pragma once

#include <array>
#include <cstdint>

namespace favlab {

/// Philox4x32-10 (Salmon et al., Random123). A counter-based generator: the
/// output block is a pure function of (key, counter), so any trial can be
/// drawn independently of every other trial and of the thread that runs it.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Sequential view over one Philox stream. Stream (seed, stream_id) owns the
/// counter space {stream_id} x [0, 2^64).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream_id) {}

  /// Deterministic block at an absolute position; does not advance.
  std::array<std::uint32_t, 4> block(std::uint64_t position) const;

  std::uint32_t next_u32();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
  /// Uniform integer in [0, bound) (bound > 0), by rejection.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int lane_ = 4;
};

/// 53-bit double in [0,1) from two 32-bit words.
inline double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace favlab
