#ifndef KWLE_RNG_HPP
#define KWLE_RNG_HPP

#include <cstdint>

namespace kwle {

/// SplitMix64 finalizer. Stateless, platform-independent.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derive a child key from a parent key and a tag. Used to build the
/// (master_seed, n, batch, rep) seed hierarchy of the simulation harness.
inline std::uint64_t mix_key(std::uint64_t parent, std::uint64_t tag) {
    return splitmix64(parent ^ (splitmix64(tag) + 0x9E3779B97F4A7C15ull));
}

/// Counter-based uniform draw in the open interval (0,1).
/// Identical (key, counter) always yields the identical double, independent
/// of call order or thread schedule.
inline double uniform_open(std::uint64_t key, std::uint64_t counter) {
    const std::uint64_t z = splitmix64(key ^ (counter * 0xD1B54A32D192ED03ull + 0x632BE59BD9B4E019ull));
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace kwle

#endif  // KWLE_RNG_HPP
