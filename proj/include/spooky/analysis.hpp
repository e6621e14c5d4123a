#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "spooky/core_graph.hpp"
#include "spooky/transcript.hpp"

namespace spooky {

/// Some triangle (u < v < w), or nullopt if G is triangle-free.
std::optional<std::array<VertexId, 3>> triangle_witness(const SimpleGraph& g);

/// A K4 through v0 as {v0, a, b, c} with a < b < c, or nullopt.
std::optional<std::array<VertexId, 4>> k4_witness_at(const SimpleGraph& g, VertexId v0);

inline constexpr std::uint32_t kDefaultFactorLimit = 36;

/// Exact search for a partition of V(G) into vertex-disjoint copies of K_r,
/// r in {3, 4}.  Branches on the lowest unmatched vertex and memoises dead
/// positions.  Throws SizeError above `limit` vertices.
std::optional<std::vector<std::vector<VertexId>>> kr_factor_search(const SimpleGraph& g, std::uint32_t r,
                                                                   std::uint32_t limit = kDefaultFactorLimit);

struct RegularityVerdict {
    bool regular = true;
    std::vector<VertexId> x_witness;
    std::vector<VertexId> y_witness;
};

inline constexpr std::size_t kRegularityLimit = 15;

/// Exact check that e(X', Y') >= (d - eps) p |X'||Y'| for all nonempty
/// X' ⊆ X and Y' ⊆ Y.  For a fixed X' the worst Y' is the set of vertices
/// whose X'-degree falls below the threshold, so only X' is enumerated.
RegularityVerdict regular_pair_check(const SimpleGraph& g, std::span<const VertexId> x, std::span<const VertexId> y,
                                     double eps, double d, double p);

struct InvariantCheck {
    std::string name;
    bool passed = true;
    bool enforced = true;  // informational checks never fail the verdict
    std::int64_t first_event = -1;
    std::string witness;
    std::uint64_t occurrences = 0;
};

struct InvariantReport {
    std::vector<InvariantCheck> checks;
    bool verdict = true;
    std::uint64_t events = 0;
    std::string transcript_hash;
    nlohmann::json stats = nlohmann::json::object();

    const InvariantCheck* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

/// Replays a transcript from its header and event list alone and checks every
/// game rule and invariant.
InvariantReport verify_transcript(const Transcript& transcript);

}  // namespace spooky
