#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>

namespace bgpc {

/// Identifier written into instance files so a reader knows which generator produced them.
inline constexpr const char* kRngName = "philox4x32-10";

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to fold several ids into one stream id.
std::uint64_t mix64(std::uint64_t x);

/// Stream id for a tuple of ids, e.g. {cell, trial}.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> ids);

/// Counter-based random stream. The seed is the Philox key, the stream id
/// occupies the upper half of the counter and the block index the lower half,
/// so (seed, stream) pairs give independent, reproducible sequences.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, bound), unbiased. bound > 0.
  std::uint64_t uniform_int(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double normal();
  bool bernoulli(double p);

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  std::optional<double> spare_normal_;
};

}  // namespace bgpc
