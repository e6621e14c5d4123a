#include "spooky/gamma_oracle.hpp"

#include <string>

namespace spooky {

std::uint64_t mix64(std::uint64_t seed, std::uint64_t key) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (key + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

GammaOracle::GammaOracle(std::uint32_t n, double p, std::uint64_t seed)
    : n_(n), p_(p), seed_(seed), status_(pair_count(n), GammaStatus::Unknown) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("GammaOracle: p out of range");
}

GammaStatus GammaOracle::query(EdgeId id) {
    if (id >= status_.size()) {
        throw InvalidArgument("GammaOracle: edge id " + std::to_string(id) + " out of range");
    }
    GammaStatus& s = status_[id];
    if (s == GammaStatus::Unknown) {
        if (member(id)) {
            s = GammaStatus::InGamma;
            ++revealed_in_;
        } else {
            s = GammaStatus::NotInGamma;
            ++revealed_out_;
        }
    }
    return s;
}

GammaCensus GammaOracle::census() const noexcept {
    const auto total = static_cast<std::uint32_t>(status_.size());
    return {revealed_in_, revealed_out_, total - revealed_in_ - revealed_out_};
}

}  // namespace spooky
