#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace lcc {

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view text) {
    return fnv1a64(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace detail {
inline std::uint64_t splitmix_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

/// Deterministic 64-bit generator (splitmix64). The generator identity and
/// the stream-derivation rule in make_stream are pinned: seeded streams are
/// part of the reproducibility contract and must not change.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return detail::splitmix_next(state_); }

private:
    std::uint64_t state_;
};

/// Derive an independent named stream from a master seed. Streams with
/// different labels or indices are decorrelated by one scramble round.
inline SeededRng make_stream(std::uint64_t seed, std::string_view label,
                             std::uint64_t index = 0) {
    std::uint64_t x = seed ^ (fnv1a64(label) * 0x9E3779B97F4A7C15ULL) ^
                      ((index + 1) * 0xD1B54A32D192ED03ULL);
    std::uint64_t mixed = detail::splitmix_next(x);
    return SeededRng(mixed);
}

} // namespace lcc
