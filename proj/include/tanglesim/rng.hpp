#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace tanglesim {

// SplitMix64 finalizer; used to derive independent stream seeds from one
// root seed so that adding observers or reordering consumers never
// perturbs another stream's draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for the index-th member of a family (runs of a batch, chunks of a
// Monte-Carlo estimate) rooted at `root`.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64(root + 0x632be59bd9b4e019ULL * (index + 1));
}

// Purpose tags for the per-run substreams.
enum class RngStream : std::uint64_t {
    kArrivals = 1,
    kTipSelection = 2,
    kEvaluation = 3,
};

// mt19937_64 plus the few portable draw helpers the simulator needs.
// The helpers avoid std::*_distribution so that sequences are identical
// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). Multiply-shift bounding; the O(n/2^64)
    // bias is far below anything a simulation can resolve.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw std::logic_error("uniform_index: empty range");
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    // Exp(rate) sample via inversion; strictly positive.
    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return -std::log(u) / rate;
    }

private:
    std::mt19937_64 engine_;
};

inline Rng make_stream(std::uint64_t run_seed, RngStream purpose) {
    return Rng(splitmix64(run_seed ^ (0x9e6c63d0876a9a47ULL * static_cast<std::uint64_t>(purpose))));
}

}  // namespace tanglesim
