#pragma once

#include <cstdint>
#include <random>

namespace doda {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for one trial, derived from the base seed and the trial's coordinates
/// so that adding trials or sizes never shifts existing ones.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                          std::uint64_t b = 0);

/// Uniform integer in [0, range), range > 0. Lemire's multiply-and-reject,
/// written out so streams are identical across standard libraries.
std::uint64_t uniform_below(Rng &rng, std::uint64_t range);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Rng &rng);

} // namespace doda
