#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mdpd {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

/// One Philox4x32-10 block (Salmon et al. counter-based generator).
Philox4x32Counter philox4x32_10(Philox4x32Counter counter, Philox4x32Key key);

/// Deterministic random stream "philox4x32-10/v1".
///
/// The key is the 64-bit seed; the upper half of the counter holds the
/// stream id and the lower half a block index, so distinct streams never
/// overlap and any draw can be regenerated without replaying the others.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kName = "philox4x32-10/v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform01();

  /// Repositions the stream at the given 64-bit draw index.
  void seek(std::uint64_t draw_index);

 private:
  void refill();

  Philox4x32Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
};

/// Mixes a seed with a sub-identifier; used to derive per-replicate streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id);

}  // namespace mdpd
