#pragma once

// Shared error types, seeding helpers and small numeric utilities.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace robustkit {

// All recoverable failures are reported through typed exceptions so callers
// (CLI, sweep harness) can distinguish budget problems from bad input.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define ROBUSTKIT_ERROR_TYPE(NAME)                                  \
  struct NAME : Error {                                             \
    explicit NAME(const std::string& msg = #NAME) : Error(msg) {}   \
  }

ROBUSTKIT_ERROR_TYPE(NonFinite);
ROBUSTKIT_ERROR_TYPE(NoConvergence);
ROBUSTKIT_ERROR_TYPE(DimensionMismatch);
ROBUSTKIT_ERROR_TYPE(BadEta);
ROBUSTKIT_ERROR_TYPE(BadEps);
ROBUSTKIT_ERROR_TYPE(UnknownStrategy);
ROBUSTKIT_ERROR_TYPE(UnknownGenerator);
ROBUSTKIT_ERROR_TYPE(DisjointSupports);
ROBUSTKIT_ERROR_TYPE(PreconditionViolated);
ROBUSTKIT_ERROR_TYPE(BudgetExceeded);
ROBUSTKIT_ERROR_TYPE(Singular);
ROBUSTKIT_ERROR_TYPE(TooLarge);
ROBUSTKIT_ERROR_TYPE(GenerationStarved);
ROBUSTKIT_ERROR_TYPE(DegenerateFit);

#undef ROBUSTKIT_ERROR_TYPE

// 64-bit seed; all randomized routines take one explicitly and derive
// sub-streams with split(), so results are reproducible bit-for-bit on a
// given platform.
using RngSeed = std::uint64_t;

// splitmix64 step; used both as a seed scrambler and to derive independent
// sub-seeds from (seed, index) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline RngSeed split_seed(RngSeed seed, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(seed ^ (a * 0x9e3779b97f4a7c15ULL)) + b);
}

inline std::mt19937_64 make_rng(RngSeed seed) { return std::mt19937_64(splitmix64(seed)); }

}  // namespace robustkit
