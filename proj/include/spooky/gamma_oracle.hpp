#pragma once

#include <cstdint>
#include <vector>

#include "spooky/core_graph.hpp"

namespace spooky {

/// 64-bit avalanche hash of (seed, key); splitmix64 finaliser over a Weyl step.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t key) noexcept;

/// Top 53 bits of a hash mapped to [0, 1).
inline double unit_interval(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

enum class GammaStatus : std::uint8_t { Unknown = 0, InGamma = 1, NotInGamma = 2 };

struct GammaCensus {
    std::uint32_t revealed_in = 0;
    std::uint32_t revealed_out = 0;
    std::uint32_t unknown = 0;
};

/// Lazily revealed G(n, p).  Membership of an edge is a pure function of
/// (seed, edge id, p), so the table never depends on the order of queries.
class GammaOracle {
public:
    GammaOracle() = default;
    GammaOracle(std::uint32_t n, double p, std::uint64_t seed);

    std::uint32_t n() const noexcept { return n_; }
    double p() const noexcept { return p_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Reveals and caches the status of `id`.  Idempotent.
    GammaStatus query(EdgeId id);
    /// Cached status; never reveals.
    GammaStatus peek(EdgeId id) const { return status_.at(id); }
    GammaCensus census() const noexcept;

    /// Membership without revealing; used for post-game analysis only.
    bool member(EdgeId id) const noexcept { return sample(seed_, p_, id); }
    static bool sample(std::uint64_t seed, double p, EdgeId id) noexcept {
        return unit_interval(mix64(seed, id)) < p;
    }

private:
    std::uint32_t n_ = 0;
    double p_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<GammaStatus> status_;
    std::uint32_t revealed_in_ = 0;
    std::uint32_t revealed_out_ = 0;
};

}  // namespace spooky
