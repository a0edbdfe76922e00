#pragma once

#include <cstdint>

namespace cgp {

/// Identifier of the per-replication seed rule, recorded with every estimate.
inline constexpr const char* kSeedRule = "splitmix64(master,horizon_index,replication)";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

/// Counter-based seed: a pure function of its three keys, so replications can
/// run in any order on any worker.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t horizon_index, std::uint64_t replication) {
  return splitmix64(splitmix64(splitmix64(master) ^ horizon_index) ^ replication);
}

}  // namespace cgp
