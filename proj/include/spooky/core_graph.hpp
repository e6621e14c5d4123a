#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spooky/errors.hpp"

namespace spooky {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Number of unordered pairs of an n-vertex set, i.e. |E(K_n)|.
constexpr std::uint64_t pair_count(std::uint32_t n) noexcept {
    return static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
}

/// Lexicographic rank of the pair {u, v} among all pairs of [n].
/// Throws InvalidArgument for u == v or an index >= n.
EdgeId edge_index(VertexId u, VertexId v, std::uint32_t n);

/// Inverse of edge_index; the first component is the smaller endpoint.
std::pair<VertexId, VertexId> endpoints(EdgeId id, std::uint32_t n);

/// Undirected simple graph with sorted adjacency lists.
class SimpleGraph {
public:
    SimpleGraph() = default;
    explicit SimpleGraph(std::uint32_t n) : adjacency_(n) {}

    std::uint32_t vertex_count() const noexcept {
        return static_cast<std::uint32_t>(adjacency_.size());
    }
    std::uint64_t edge_count() const noexcept { return edge_count_; }

    /// Returns false if the edge was already present.
    bool add_edge(VertexId u, VertexId v);
    bool has_edge(VertexId u, VertexId v) const;

    std::span<const VertexId> neighbours(VertexId v) const { return adjacency_.at(v); }
    std::uint32_t degree(VertexId v) const {
        return static_cast<std::uint32_t>(adjacency_.at(v).size());
    }

    /// |N(u) ∩ N(v)| by sorted merge.
    std::uint32_t common_neighbour_count(VertexId u, VertexId v) const;
    std::vector<VertexId> common_neighbours(VertexId u, VertexId v) const;

    /// Number of edges of the subgraph induced by a sorted vertex list.
    std::uint64_t induced_edge_count(std::span<const VertexId> sorted_vertices) const;

    /// Full-scan check of symmetry, sortedness, loop-freeness and the edge count.
    bool is_consistent() const;

private:
    void check_vertex(VertexId v) const;

    std::vector<std::vector<VertexId>> adjacency_;
    std::uint64_t edge_count_ = 0;
};

enum class EdgeStatus : std::uint8_t { Unclaimed = 0, Maker = 1, Breaker = 2, RevealedOut = 3 };

const char* to_string(EdgeStatus status) noexcept;

/// Ownership of every edge of K_n.  Edges leave Unclaimed exactly once.
class ClaimLedger {
public:
    ClaimLedger() = default;
    explicit ClaimLedger(std::uint32_t n);

    std::uint32_t n() const noexcept { return n_; }
    std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(status_.size()); }

    EdgeStatus status(EdgeId id) const { return status_.at(id); }
    bool is_unclaimed(EdgeId id) const { return status_.at(id) == EdgeStatus::Unclaimed; }

    /// Moves an Unclaimed edge to `to`; throws InvariantViolation otherwise.
    void assign(EdgeId id, EdgeStatus to);

    std::uint32_t count(EdgeStatus s) const noexcept {
        return counts_[static_cast<std::size_t>(s)];
    }
    bool any_unclaimed() const noexcept { return count(EdgeStatus::Unclaimed) > 0; }

    std::span<const EdgeStatus> statuses() const noexcept { return status_; }

private:
    std::uint32_t n_ = 0;
    std::vector<EdgeStatus> status_;
    std::array<std::uint32_t, 4> counts_{};
};

}  // namespace spooky
