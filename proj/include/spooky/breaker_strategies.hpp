#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spooky/core_graph.hpp"

namespace spooky {

/// What Breaker may look at: the public board.  Γ stays hidden.
struct BreakerView {
    const ClaimLedger& ledger;
    const SimpleGraph& maker;
    const SimpleGraph& breaker;
    std::uint32_t n;
    std::uint32_t b;
    std::optional<EdgeId> last_maker_edge;
    std::uint32_t turn = 0;  // 1-based Breaker turn number
};

/// Smallest q with q*q >= n, and smallest c with c*c*c >= n.
std::uint32_t ceil_sqrt(std::uint32_t n);
std::uint32_t ceil_cbrt(std::uint32_t n);

/// Up to b unclaimed edges at `target`, lowest co-endpoint first.
std::vector<EdgeId> vertex_focus(const BreakerView& view, VertexId target);

/// After Maker's uv: ceil(sqrt n) edges at each of u and v, then every edge
/// that would let Maker close a triangle through uv next turn.
std::vector<EdgeId> triangle_blocker(const BreakerView& view);

struct K4BlockerLog {
    std::uint32_t rule_i = 0;
    std::uint32_t rule_ii = 0;
    std::uint32_t rule_iii = 0;
    // Rule (ii) expects the newcomer y to have no Maker edge into N(v0).
    std::uint32_t newcomer_assumption_failures = 0;
    std::uint32_t truncated_turns = 0;
};

/// Keeps v0 out of every Maker K4: ceil(n^{1/3}) edges at v0 per turn plus
/// the case rules on Maker's last edge.
std::vector<EdgeId> k4_blocker(const BreakerView& view, VertexId v0, K4BlockerLog* log = nullptr);

/// b unclaimed edges sampled without replacement; a function of (seed, turn, board).
std::vector<EdgeId> random_breaker(const BreakerView& view, std::uint64_t seed);

class BreakerStrategy {
public:
    virtual ~BreakerStrategy() = default;
    virtual std::string name() const = 0;
    virtual nlohmann::json parameters() const { return nlohmann::json::object(); }
    virtual std::vector<EdgeId> choose(const BreakerView& view) = 0;
};

class NullBreaker final : public BreakerStrategy {
public:
    std::string name() const override { return "null"; }
    std::vector<EdgeId> choose(const BreakerView&) override { return {}; }
};

class VertexFocusBreaker final : public BreakerStrategy {
public:
    explicit VertexFocusBreaker(VertexId target) : target_(target) {}
    std::string name() const override { return "vertex-focus"; }
    nlohmann::json parameters() const override { return {{"target", target_}}; }
    std::vector<EdgeId> choose(const BreakerView& view) override { return vertex_focus(view, target_); }

private:
    VertexId target_;
};

class TriangleBlocker final : public BreakerStrategy {
public:
    std::string name() const override { return "triangle-blocker"; }
    std::vector<EdgeId> choose(const BreakerView& view) override { return triangle_blocker(view); }
};

class K4Blocker final : public BreakerStrategy {
public:
    explicit K4Blocker(VertexId v0) : v0_(v0) {}
    std::string name() const override { return "k4-blocker"; }
    nlohmann::json parameters() const override { return {{"v0", v0_}}; }
    std::vector<EdgeId> choose(const BreakerView& view) override { return k4_blocker(view, v0_, &log_); }
    const K4BlockerLog& log() const noexcept { return log_; }
    VertexId v0() const noexcept { return v0_; }

private:
    VertexId v0_;
    K4BlockerLog log_;
};

class RandomBreaker final : public BreakerStrategy {
public:
    explicit RandomBreaker(std::uint64_t seed) : seed_(seed) {}
    std::string name() const override { return "random"; }
    nlohmann::json parameters() const override { return {{"seed", seed_}}; }
    std::vector<EdgeId> choose(const BreakerView& view) override { return random_breaker(view, seed_); }

private:
    std::uint64_t seed_;
};

/// Builds a strategy from its CLI name ("null", "random", "vertex-focus",
/// "triangle-blocker", "k4-blocker").  `target` is the focus vertex or v0.
std::unique_ptr<BreakerStrategy> make_breaker(const std::string& name, VertexId target, std::uint64_t seed);

}  // namespace spooky
