#pragma once

#include <cstdint>

namespace iwal {

// SplitMix64 output function (Steele, Lea, Flood 2014 constants).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Top 53 bits mapped to [0, 1). Never returns 1.0, so a coin with
// probability exactly 1 always lands heads.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based stream: cell(k) is a pure function of (seed, k), so cells can
// be read lazily and out of order without mutating shared state. Replays are
// bit-identical for a fixed seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(splitmix64(seed)) {}

    std::uint64_t bits(std::uint64_t index) const {
        return splitmix64(seed_ + 0x9e3779b97f4a7c15ull * index);
    }
    double uniform(std::uint64_t index) const { return unit_double(bits(index)); }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

// Derives independent substream seeds (points, labels, coins) from one seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream_id) {
    return splitmix64(seed ^ splitmix64(0x5851f42d4c957f2dull * (stream_id + 1)));
}

} // namespace iwal
