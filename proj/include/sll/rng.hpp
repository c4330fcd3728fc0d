#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sll {

// Named, seeded RNG streams: (seed, stream name) -> independent mt19937_64.
// Mixing through splitmix64 keeps streams decorrelated even for adjacent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_name(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::string_view name,
                                   std::uint64_t index = 0) {
    std::uint64_t s = splitmix64(seed ^ splitmix64(hash_name(name)) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
    return std::mt19937_64(s);
}

} // namespace sll
