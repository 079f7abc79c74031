#pragma once

#include <cstdint>
#include <random>

namespace ppsim {

/// Deterministic uniform stream. Same seed => bit-identical sequence on any
/// platform: mt19937_64 is fully specified by the standard and the mapping
/// to (0,1) below avoids the implementation-defined std distributions.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent child stream for (master seed, run index) pairs.
    static RngStream derive(std::uint64_t master_seed, std::uint64_t index) {
        return RngStream(mix(master_seed + mix(index + 0x9E3779B97F4A7C15ULL)));
    }

    std::uint64_t next_u64() {
        ++draws_;
        return engine_();
    }

    /// Uniform on the open interval (0,1); -log of it is always finite.
    /// Uses the top 53 bits offset by half an ulp so the mapping is exact
    /// in double arithmetic and can hit neither endpoint.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Number of raw draws consumed so far (reproducibility accounting).
    std::uint64_t draw_count() const noexcept { return draws_; }

private:
    // SplitMix64 finalizer; used only to spread seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

} // namespace ppsim
