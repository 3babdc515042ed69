#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace easerec {

/// splitmix64 (Steele, Lea, Vigna). State advances by 0x9e3779b97f4a7c15;
/// output is the state mixed with xor-shifts 30/27/31 and the constants
/// 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb. Used only to expand a 64-bit
/// seed into the xoshiro256** state.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna): output = rotl(s1 * 5, 7) * 9 with
/// the 17/45 state transition. Fully specified here so split plans can be
/// reproduced by any implementation; the OS entropy source is never used.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 mix(seed);
        for (auto& word : state_) word = mix.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform-ish draw in [0, n), n > 0, by plain modulo reduction. The
    /// modulo bias is negligible for the n used here (far below 2^64) and
    /// the reduction is trivial to reproduce elsewhere.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Uniform double in [0, 1) using the top 53 bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

/// Fisher-Yates from the back: for i = n-1 .. 1, swap v[i] with
/// v[rng.below(i + 1)].
template <typename T>
void shuffle(std::vector<T>& values, Xoshiro256& rng) {
    for (std::size_t i = values.size(); i > 1; --i)
        std::swap(values[i - 1], values[rng.below(i)]);
}

}  // namespace easerec
