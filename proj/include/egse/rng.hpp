#pragma once

// Deterministic random streams. Each (seed, stream) pair owns an independent
// engine whose state is derived through SplitMix64 mixing, so parallel tasks
// (replications, cells) draw from separate sequences reproducibly.

#include <cstdint>
#include <random>

namespace egse {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed;
        std::uint64_t mixed = splitmix64(s);
        s ^= stream * 0xD1B54A32D192ED03ull + 0x9E3779B97F4A7C15ull;
        mixed ^= splitmix64(s);
        engine_.seed(mixed);
    }

    double uniform() { return uniform_(engine_); }
    double normal() { return normal_(engine_); }
    double chisq(double nu) {
        std::chi_squared_distribution<double> d(nu);
        return d(engine_);
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace egse
