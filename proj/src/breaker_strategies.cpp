#include "spooky/breaker_strategies.hpp"

#include <algorithm>
#include <random>

#include "spooky/gamma_oracle.hpp"

namespace spooky {

namespace {

// Collects distinct unclaimed edges up to the bias.
class MoveBuilder {
public:
    explicit MoveBuilder(const BreakerView& view) : view_(view) {}

    bool full() const { return edges_.size() >= view_.b; }

    bool add(VertexId u, VertexId w) {
        if (u == w || full()) return false;
        const EdgeId id = edge_index(u, w, view_.n);
        if (!view_.ledger.is_unclaimed(id)) return false;
        if (std::find(edges_.begin(), edges_.end(), id) != edges_.end()) return false;
        edges_.push_back(id);
        return true;
    }

    bool available(VertexId u, VertexId w) const {
        if (u == w) return false;
        const EdgeId id = edge_index(u, w, view_.n);
        return view_.ledger.is_unclaimed(id) && std::find(edges_.begin(), edges_.end(), id) == edges_.end();
    }

    // Up to `quota` unclaimed edges at u, lowest co-endpoint first.
    void add_at(VertexId u, std::uint32_t quota) {
        for (VertexId w = 0; w < view_.n && quota > 0 && !full(); ++w) {
            if (add(u, w)) --quota;
        }
    }

    std::vector<EdgeId> take() { return std::move(edges_); }
    std::size_t size() const { return edges_.size(); }

private:
    const BreakerView& view_;
    std::vector<EdgeId> edges_;
};

}  // namespace

std::uint32_t ceil_sqrt(std::uint32_t n) {
    std::uint64_t q = 0;
    while (q * q < n) ++q;
    return static_cast<std::uint32_t>(q);
}

std::uint32_t ceil_cbrt(std::uint32_t n) {
    std::uint64_t c = 0;
    while (c * c * c < n) ++c;
    return static_cast<std::uint32_t>(c);
}

std::vector<EdgeId> vertex_focus(const BreakerView& view, VertexId target) {
    MoveBuilder move(view);
    move.add_at(target, view.b);
    return move.take();
}

std::vector<EdgeId> triangle_blocker(const BreakerView& view) {
    if (!view.last_maker_edge) return {};
    const auto [u, v] = endpoints(*view.last_maker_edge, view.n);
    const std::uint32_t q = ceil_sqrt(view.n);
    MoveBuilder move(view);
    move.add_at(u, q);
    move.add_at(v, q);
    for (VertexId w : view.maker.neighbours(u)) {
        if (w != v) move.add(v, w);
    }
    for (VertexId w : view.maker.neighbours(v)) {
        if (w != u) move.add(u, w);
    }
    return move.take();
}

std::vector<EdgeId> k4_blocker(const BreakerView& view, VertexId v0, K4BlockerLog* log) {
    const std::uint32_t q = ceil_cbrt(view.n);
    MoveBuilder move(view);
    move.add_at(v0, q);
    if (!view.last_maker_edge) return move.take();

    const auto [a, c] = endpoints(*view.last_maker_edge, view.n);
    const auto nbhd = view.maker.neighbours(v0);
    auto in_nbhd = [&](VertexId w) { return std::binary_search(nbhd.begin(), nbhd.end(), w); };
    auto degree_in_nbhd = [&](VertexId w) {
        const auto nw = view.maker.neighbours(w);
        std::uint32_t d = 0;
        for (VertexId z : nw) d += in_nbhd(z);
        return d;
    };
    // Claim edges from x to the `count` highest N(v0)-degree vertices of N(v0)
    // whose edge to x is still available; ties go to the lower index.
    auto connect_to_top = [&](VertexId x, std::uint32_t count) {
        std::vector<std::pair<std::uint32_t, VertexId>> ranked;
        for (VertexId w : nbhd) {
            if (w != x && move.available(x, w)) ranked.emplace_back(degree_in_nbhd(w), w);
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) {
            return l.first != r.first ? l.first > r.first : l.second < r.second;
        });
        for (std::size_t i = 0; i < ranked.size() && i < count; ++i) move.add(x, ranked[i].second);
    };
    auto close_co_neighbourhood = [&](VertexId x) {
        std::vector<VertexId> common;
        for (VertexId w : view.maker.neighbours(x)) {
            if (in_nbhd(w)) common.push_back(w);
        }
        for (std::size_t i = 0; i < common.size(); ++i) {
            for (std::size_t j = i + 1; j < common.size(); ++j) move.add(common[i], common[j]);
        }
    };

    if (a == v0 || c == v0) {
        const VertexId y = a == v0 ? c : a;
        if (log) {
            ++log->rule_ii;
            for (VertexId z : view.maker.neighbours(y)) {
                if (z != v0 && in_nbhd(z)) {
                    ++log->newcomer_assumption_failures;
                    break;
                }
            }
        }
        connect_to_top(y, 2 * q);
    } else if (in_nbhd(a) && in_nbhd(c)) {
        if (log) ++log->rule_iii;
        connect_to_top(a, 2 * q);
        connect_to_top(c, 2 * q);
        close_co_neighbourhood(a);
        close_co_neighbourhood(c);
    } else {
        if (log) ++log->rule_i;
        move.add(v0, a);
        move.add(v0, c);
    }
    if (log && move.full()) ++log->truncated_turns;
    return move.take();
}

std::vector<EdgeId> random_breaker(const BreakerView& view, std::uint64_t seed) {
    const std::uint32_t total = view.ledger.size();
    const std::uint32_t unclaimed = view.ledger.count(EdgeStatus::Unclaimed);
    std::vector<EdgeId> out;
    if (unclaimed == 0 || view.b == 0) return out;
    std::mt19937_64 rng(mix64(seed, view.turn));
    if (unclaimed <= view.b) {
        for (EdgeId id = 0; id < total; ++id) {
            if (view.ledger.is_unclaimed(id)) out.push_back(id);
        }
        return out;
    }
    if (static_cast<std::uint64_t>(unclaimed) * 8 >= total) {
        std::uniform_int_distribution<EdgeId> pick(0, total - 1);
        while (out.size() < view.b) {
            const EdgeId id = pick(rng);
            if (view.ledger.is_unclaimed(id) && std::find(out.begin(), out.end(), id) == out.end()) {
                out.push_back(id);
            }
        }
        return out;
    }
    std::vector<EdgeId> pool;
    pool.reserve(unclaimed);
    for (EdgeId id = 0; id < total; ++id) {
        if (view.ledger.is_unclaimed(id)) pool.push_back(id);
    }
    // Partial Fisher-Yates.
    for (std::uint32_t i = 0; i < view.b; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(view.b);
    return pool;
}

std::unique_ptr<BreakerStrategy> make_breaker(const std::string& name, VertexId target, std::uint64_t seed) {
    if (name == "null") return std::make_unique<NullBreaker>();
    if (name == "random") return std::make_unique<RandomBreaker>(seed);
    if (name == "vertex-focus") return std::make_unique<VertexFocusBreaker>(target);
    if (name == "triangle-blocker") return std::make_unique<TriangleBlocker>();
    if (name == "k4-blocker") return std::make_unique<K4Blocker>(target);
    throw InvalidArgument("unknown breaker strategy '" + name + "'");
}

}  // namespace spooky
