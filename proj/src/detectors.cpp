#include "spooky/analysis.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <unordered_set>

namespace spooky {

std::optional<std::array<VertexId, 3>> triangle_witness(const SimpleGraph& g) {
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        const auto nu = g.neighbours(u);
        for (VertexId v : nu) {
            if (v <= u) continue;
            const auto nv = g.neighbours(v);
            // First common neighbour above v.
            auto i = std::upper_bound(nu.begin(), nu.end(), v);
            auto j = std::upper_bound(nv.begin(), nv.end(), v);
            while (i != nu.end() && j != nv.end()) {
                if (*i < *j) {
                    ++i;
                } else if (*j < *i) {
                    ++j;
                } else {
                    return std::array<VertexId, 3>{u, v, *i};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::array<VertexId, 4>> k4_witness_at(const SimpleGraph& g, VertexId v0) {
    const auto nbhd = g.neighbours(v0);
    auto inside = [&](VertexId w) { return std::binary_search(nbhd.begin(), nbhd.end(), w); };
    for (VertexId a : nbhd) {
        for (VertexId b : g.neighbours(a)) {
            if (b <= a || !inside(b)) continue;
            for (VertexId c : g.common_neighbours(a, b)) {
                if (c > b && inside(c)) return std::array<VertexId, 4>{v0, a, b, c};
            }
        }
    }
    return std::nullopt;
}

namespace {

class FactorSearch {
public:
    FactorSearch(const SimpleGraph& g, std::uint32_t r) : r_(r), n_(g.vertex_count()), adj_(n_, 0) {
        for (VertexId u = 0; u < n_; ++u) {
            for (VertexId v : g.neighbours(u)) adj_[u] |= std::uint64_t{1} << v;
        }
    }

    bool solve(std::uint64_t unmatched) {
        if (unmatched == 0) return true;
        if (dead_.contains(unmatched)) return false;
        const auto u = static_cast<VertexId>(std::countr_zero(unmatched));
        clique_.assign(1, u);
        if (extend(unmatched & ~(std::uint64_t{1} << u), adj_[u] & unmatched)) return true;
        dead_.insert(unmatched);
        return false;
    }

    std::vector<std::vector<VertexId>> factor;

private:
    // Grows the clique containing the lowest unmatched vertex; on completion
    // recurses on what remains.
    bool extend(std::uint64_t rest, std::uint64_t candidates) {
        if (clique_.size() == r_) {
            factor.push_back(clique_);
            const std::vector<VertexId> saved = clique_;
            if (solve(rest)) return true;
            clique_ = saved;
            factor.pop_back();
            return false;
        }
        const std::uint32_t need = r_ - static_cast<std::uint32_t>(clique_.size());
        while (static_cast<std::uint32_t>(std::popcount(candidates)) >= need) {
            const auto w = static_cast<VertexId>(std::countr_zero(candidates));
            const std::uint64_t bit = std::uint64_t{1} << w;
            candidates &= ~bit;
            clique_.push_back(w);
            if (extend(rest & ~bit, candidates & adj_[w])) return true;
            clique_.pop_back();
        }
        return false;
    }

    std::uint32_t r_;
    std::uint32_t n_;
    std::vector<std::uint64_t> adj_;
    std::vector<VertexId> clique_;
    std::unordered_set<std::uint64_t> dead_;
};

}  // namespace

std::optional<std::vector<std::vector<VertexId>>> kr_factor_search(const SimpleGraph& g, std::uint32_t r,
                                                                   std::uint32_t limit) {
    if (r != 3 && r != 4) throw InvalidArgument("kr_factor_search: r must be 3 or 4");
    const std::uint32_t n = g.vertex_count();
    if (n > limit || n > 64) {
        throw SizeError("kr_factor_search: n = " + std::to_string(n) + " exceeds the limit " +
                        std::to_string(std::min<std::uint32_t>(limit, 64)));
    }
    if (n % r != 0) return std::nullopt;
    FactorSearch search(g, r);
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    if (!search.solve(all)) return std::nullopt;

    std::vector<std::uint8_t> used(n, 0);
    for (const auto& clique : search.factor) {
        for (std::size_t i = 0; i < clique.size(); ++i) {
            if (used[clique[i]]++) throw InvariantViolation("kr_factor_search: vertex reused");
            for (std::size_t j = i + 1; j < clique.size(); ++j) {
                if (!g.has_edge(clique[i], clique[j])) throw InvariantViolation("kr_factor_search: missing edge");
            }
        }
    }
    if (std::find(used.begin(), used.end(), 0) != used.end()) {
        throw InvariantViolation("kr_factor_search: factor is not spanning");
    }
    return search.factor;
}

RegularityVerdict regular_pair_check(const SimpleGraph& g, std::span<const VertexId> x, std::span<const VertexId> y,
                                     double eps, double d, double p) {
    if (x.size() > kRegularityLimit || y.size() > kRegularityLimit) {
        throw SizeError("regular_pair_check: sets larger than " + std::to_string(kRegularityLimit));
    }
    for (VertexId a : x) {
        if (std::find(y.begin(), y.end(), a) != y.end()) {
            throw InvalidArgument("regular_pair_check: X and Y intersect at " + std::to_string(a));
        }
    }
    // adjacency rows: bit i of row[j] says x[i] ~ y[j]
    std::vector<std::uint32_t> row(y.size(), 0);
    for (std::size_t j = 0; j < y.size(); ++j) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (g.has_edge(x[i], y[j])) row[j] |= 1U << i;
        }
    }
    const double density = (d - eps) * p;
    RegularityVerdict verdict;
    for (std::uint32_t mask = 1; mask < (1U << x.size()); ++mask) {
        const double threshold = density * std::popcount(mask);
        std::vector<VertexId> bad;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (static_cast<double>(std::popcount(row[j] & mask)) < threshold) bad.push_back(y[j]);
        }
        if (!bad.empty()) {
            verdict.regular = false;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (mask >> i & 1U) verdict.x_witness.push_back(x[i]);
            }
            verdict.y_witness = std::move(bad);
            return verdict;
        }
    }
    return verdict;
}

}  // namespace spooky
