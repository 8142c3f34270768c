#pragma once

// Counter-based Philox4x32-10 generator keyed by (seed, stream). Each stream
// is an independent sequence, so replicate r or column j can be drawn from
// stream r / j on any thread and the result does not depend on scheduling.

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace lms {

class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Skips ahead by `blocks` 128-bit output blocks.
  void discard_blocks(std::uint64_t blocks);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::uint64_t stream_;
  std::array<std::uint32_t, 4> buffer_{};
  int index_ = 4;
};

/// Mixes (seed, a, b) into a single 64-bit stream id for nested keying.
std::uint64_t stream_id(std::uint64_t a, std::uint64_t b = 0);

/// Fills with i.i.d. standard normal draws.
template <typename Derived>
void fill_standard_normal(Derived&& out, Philox4x32& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto i = decltype(out.size()){0}; i < out.size(); ++i) out(i) = normal(rng);
}

}  // namespace lms
