#pragma once

#include <cstdint>
#include <random>

namespace qsched {

// splitmix64; used only to derive well-separated seeds for std::mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic per-stream engine: stream `index` of a master seed.  Parallel
// and serial traversals of the streams see identical sequences.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
  std::uint64_t b = splitmix64(s);
  std::uint64_t c = splitmix64(s);
  return std::mt19937_64(b ^ (c << 1));
}

}  // namespace qsched
