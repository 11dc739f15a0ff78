#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dtdr {

/// Derives an independent stream seed from a root seed and a label,
/// e.g. derive_seed(root, "mask"). Stable across platforms.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

/// 64-bit FNV-1a, used for labels and config digests.
std::uint64_t fnv1a64(std::string_view bytes);

using rng_t = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(rng_t& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform double in [lo, hi).
inline double uniform(rng_t& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

} // namespace dtdr
