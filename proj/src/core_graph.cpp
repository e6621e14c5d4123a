#include "spooky/core_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spooky {

namespace {

// Rank of the first pair whose smaller endpoint is u.
std::uint64_t row_start(std::uint64_t u, std::uint64_t n) {
    return u * n - u * (u + 1) / 2;
}

}  // namespace

EdgeId edge_index(VertexId u, VertexId v, std::uint32_t n) {
    if (u >= n || v >= n) {
        throw InvalidArgument("edge_index: vertex out of range (n=" + std::to_string(n) + ")");
    }
    if (u == v) {
        throw InvalidArgument("edge_index: loop at vertex " + std::to_string(u));
    }
    if (u > v) std::swap(u, v);
    return static_cast<EdgeId>(row_start(u, n) + (v - u - 1));
}

std::pair<VertexId, VertexId> endpoints(EdgeId id, std::uint32_t n) {
    if (id >= pair_count(n)) {
        throw InvalidArgument("endpoints: edge id " + std::to_string(id) + " out of range");
    }
    // row_start(u) <= id solved for u, then corrected for rounding.
    const double nn = static_cast<double>(n);
    const double disc = (2.0 * nn - 1.0) * (2.0 * nn - 1.0) - 8.0 * static_cast<double>(id);
    auto u = static_cast<std::int64_t>(std::floor(((2.0 * nn - 1.0) - std::sqrt(std::max(disc, 0.0))) / 2.0));
    u = std::clamp<std::int64_t>(u, 0, n - 2);
    while (u > 0 && row_start(u, n) > id) --u;
    while (u + 1 <= n - 2 && row_start(u + 1, n) <= id) ++u;
    const auto v = static_cast<std::uint64_t>(id) - row_start(u, n) + u + 1;
    return {static_cast<VertexId>(u), static_cast<VertexId>(v)};
}

void SimpleGraph::check_vertex(VertexId v) const {
    if (v >= adjacency_.size()) {
        throw InvalidArgument("SimpleGraph: vertex " + std::to_string(v) + " out of range");
    }
}

bool SimpleGraph::add_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InvalidArgument("SimpleGraph: loop at vertex " + std::to_string(u));
    auto& au = adjacency_[u];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return false;
    au.insert(it, v);
    auto& av = adjacency_[v];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++edge_count_;
    return true;
}

bool SimpleGraph::has_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
    const VertexId other = &a == &adjacency_[u] ? v : u;
    return std::binary_search(a.begin(), a.end(), other);
}

std::uint32_t SimpleGraph::common_neighbour_count(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& a = adjacency_[u];
    const auto& b = adjacency_[v];
    std::uint32_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::vector<VertexId> SimpleGraph::common_neighbours(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    std::vector<VertexId> out;
    std::set_intersection(adjacency_[u].begin(), adjacency_[u].end(), adjacency_[v].begin(),
                          adjacency_[v].end(), std::back_inserter(out));
    return out;
}

std::uint64_t SimpleGraph::induced_edge_count(std::span<const VertexId> sorted_vertices) const {
    std::uint64_t twice = 0;
    for (VertexId x : sorted_vertices) {
        check_vertex(x);
        const auto& ax = adjacency_[x];
        auto i = ax.begin();
        auto j = sorted_vertices.begin();
        while (i != ax.end() && j != sorted_vertices.end()) {
            if (*i < *j) {
                ++i;
            } else if (*j < *i) {
                ++j;
            } else {
                ++twice;
                ++i;
                ++j;
            }
        }
    }
    return twice / 2;
}

bool SimpleGraph::is_consistent() const {
    std::uint64_t degree_sum = 0;
    for (VertexId u = 0; u < adjacency_.size(); ++u) {
        const auto& au = adjacency_[u];
        degree_sum += au.size();
        for (std::size_t k = 0; k < au.size(); ++k) {
            const VertexId v = au[k];
            if (v == u || v >= adjacency_.size()) return false;
            if (k > 0 && au[k - 1] >= v) return false;
            if (!std::binary_search(adjacency_[v].begin(), adjacency_[v].end(), u)) return false;
        }
    }
    return degree_sum == 2 * edge_count_;
}

const char* to_string(EdgeStatus status) noexcept {
    switch (status) {
        case EdgeStatus::Unclaimed: return "Unclaimed";
        case EdgeStatus::Maker: return "Maker";
        case EdgeStatus::Breaker: return "Breaker";
        case EdgeStatus::RevealedOut: return "RevealedOut";
    }
    return "?";
}

ClaimLedger::ClaimLedger(std::uint32_t n)
    : n_(n), status_(pair_count(n), EdgeStatus::Unclaimed) {
    counts_[0] = static_cast<std::uint32_t>(status_.size());
}

void ClaimLedger::assign(EdgeId id, EdgeStatus to) {
    if (id >= status_.size()) {
        throw InvalidArgument("ClaimLedger: edge id " + std::to_string(id) + " out of range");
    }
    if (to == EdgeStatus::Unclaimed) {
        throw InvariantViolation("ClaimLedger: edge " + std::to_string(id) + " cannot revert to Unclaimed");
    }
    const EdgeStatus from = status_[id];
    if (from != EdgeStatus::Unclaimed) {
        throw InvariantViolation("ClaimLedger: edge " + std::to_string(id) + " already " + to_string(from) +
                                 ", cannot become " + to_string(to));
    }
    status_[id] = to;
    --counts_[0];
    ++counts_[static_cast<std::size_t>(to)];
}

}  // namespace spooky
