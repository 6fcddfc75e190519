#ifndef METABS_RNG_HPP
#define METABS_RNG_HPP

#include <cstdint>
#include <random>

namespace metabs
{

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent generator for (seed, stream, index). Streams separate uses of one
/// seed (trials, random structure draws); index is the trial counter.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    const std::uint64_t a = splitmix64(seed ^ splitmix64(stream + 0x5851F42D4C957F2DULL));
    return std::mt19937_64(splitmix64(a ^ splitmix64(index)));
}

} // namespace metabs

#endif
