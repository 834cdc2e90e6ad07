#pragma once

#include <cstdint>
#include <random>

namespace ssrqec {

/// SplitMix64 finalizer. Used to turn structured counters into
/// well-mixed 64-bit seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for (component, index) under a master seed. The derivation is a
/// pure function of its arguments, so any partition of trials across
/// workers reproduces the same per-trial streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t component,
                          std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
/// Unlike std::uniform_real_distribution this is identical on every
/// standard library.
double uniform01(std::mt19937_64& rng);

}  // namespace ssrqec
