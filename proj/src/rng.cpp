#include "lyap/rng.hpp"

namespace lyap {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(const RngStream& stream) {
  return splitmix64(stream.seed ^ splitmix64(stream.stream_id + 0x632be59bd9b4e019ULL));
}

Engine make_engine(const RngStream& stream) { return Engine(derive_seed(stream)); }

}  // namespace lyap
