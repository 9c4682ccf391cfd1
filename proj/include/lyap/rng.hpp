#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lyap {

/// Identifies one reproducible random stream: a run-level seed plus a
/// per-trial stream index. Streams with distinct ids are seeded through a
/// splitmix64 mix so neighbouring ids do not share state.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngStream with_stream(std::uint64_t id) const { return {seed, id}; }
  friend bool operator==(const RngStream&, const RngStream&) = default;
};

using Engine = std::mt19937_64;

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64";

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit engine seed derived from (seed, stream_id).
std::uint64_t derive_seed(const RngStream& stream);

Engine make_engine(const RngStream& stream);

}  // namespace lyap
