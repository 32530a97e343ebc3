#pragma once

#include <cstdint>
#include <random>

namespace rcr {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent per-trial streams from a
// single master seed so results do not depend on scheduling.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  return mix64(mix64(master_seed) ^ mix64(trial_index + 0x632be59bd9b4e019ULL));
}

inline Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  return Rng{trial_seed(master_seed, trial_index)};
}

}  // namespace rcr
