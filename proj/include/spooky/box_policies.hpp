#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "spooky/spookybox.hpp"
#include "spooky/transcript.hpp"

namespace spooky {

class GhostPolicy {
public:
    virtual ~GhostPolicy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<BoxAddition> grow(const BoxGameState& state) = 0;
    virtual GhostDecision decide(const BoxGameState& state, VertexId proposal) = 0;
};

class BoxBreakerPolicy {
public:
    virtual ~BoxBreakerPolicy() = default;
    virtual std::string name() const = 0;
    virtual std::vector<VertexId> choose(const BoxGameState& state) = 0;
};

/// Never grows, never haunts.
class NullGhost final : public GhostPolicy {
public:
    std::string name() const override { return "null"; }
    std::vector<BoxAddition> grow(const BoxGameState&) override { return {}; }
    GhostDecision decide(const BoxGameState&, VertexId) override { return GhostDecision::Allow(); }
};

/// Haunts every proposal.
class AlwaysHauntGhost final : public GhostPolicy {
public:
    std::string name() const override { return "always-haunt"; }
    std::vector<BoxAddition> grow(const BoxGameState&) override { return {}; }
    GhostDecision decide(const BoxGameState&, VertexId) override { return GhostDecision::Haunt(); }
};

/// Random legal growth, random haunting of proposals and of extra vertices.
class RandomGhost final : public GhostPolicy {
public:
    explicit RandomGhost(std::uint64_t seed, double grow_prob = 0.3, double haunt_prob = 0.25,
                         double extra_prob = 0.1);
    std::string name() const override { return "random"; }
    std::vector<BoxAddition> grow(const BoxGameState& state) override;
    GhostDecision decide(const BoxGameState& state, VertexId proposal) override;

private:
    std::mt19937_64 rng_;
    double grow_prob_;
    double haunt_prob_;
    double extra_prob_;
};

/// Fills the box Breaker is attacking and haunts every proposal that would
/// help Maker inside it.
class SpitefulGhost final : public GhostPolicy {
public:
    explicit SpitefulGhost(std::uint64_t seed) : rng_(seed) {}
    std::string name() const override { return "spiteful"; }
    std::vector<BoxAddition> grow(const BoxGameState& state) override;
    GhostDecision decide(const BoxGameState& state, VertexId proposal) override;

private:
    std::mt19937_64 rng_;
};

class NullBoxBreaker final : public BoxBreakerPolicy {
public:
    std::string name() const override { return "null"; }
    std::vector<VertexId> choose(const BoxGameState&) override { return {}; }
};

/// b uniformly random free vertices.
class RandomBoxBreaker final : public BoxBreakerPolicy {
public:
    explicit RandomBoxBreaker(std::uint64_t seed) : rng_(seed) {}
    std::string name() const override { return "random"; }
    std::vector<VertexId> choose(const BoxGameState& state) override;

private:
    std::mt19937_64 rng_;
};

/// Pours the whole bias into the box where Breaker already leads most.
class GreedyConcentrateBreaker final : public BoxBreakerPolicy {
public:
    std::string name() const override { return "greedy-concentrate"; }
    std::vector<VertexId> choose(const BoxGameState& state) override;
};

/// Replays the Ghost and Breaker decisions recorded in a box-game transcript.
class ScriptedBoxPlayers {
public:
    explicit ScriptedBoxPlayers(const Transcript& transcript);

    GhostPolicy& ghost() { return ghost_; }
    BoxBreakerPolicy& breaker() { return breaker_; }

private:
    struct Ghost final : GhostPolicy {
        ScriptedBoxPlayers* owner = nullptr;
        std::string name() const override { return "scripted"; }
        std::vector<BoxAddition> grow(const BoxGameState& state) override;
        GhostDecision decide(const BoxGameState& state, VertexId proposal) override;
    };
    struct Breaker final : BoxBreakerPolicy {
        ScriptedBoxPlayers* owner = nullptr;
        std::string name() const override { return "scripted"; }
        std::vector<VertexId> choose(const BoxGameState& state) override;
    };

    const Event* next_of(EventType type);

    std::vector<Event> events_;
    std::size_t cursor_ = 0;
    Ghost ghost_;
    Breaker breaker_;
};

struct BoxGameRun {
    Transcript transcript;
    PotentialParameters parameters;
    std::uint32_t rounds = 0;
    double max_deficit = 0.0;
    std::uint32_t violations = 0;              // (round, box) pairs with deficit > tolerance
    std::uint32_t first_violation_round = 0;   // 0: none
    std::vector<double> round_log_potentials;  // entry 0: initial; entry r: after round r
    bool potential_monotone = true;
};

/// Plays a SpookyBox game to completion with the potential strategy for
/// Maker and the given Ghost and Breaker.
BoxGameRun run_box_game(const BoxGameConfig& cfg, std::vector<std::vector<VertexId>> initial_boxes,
                        GhostPolicy& ghost, BoxBreakerPolicy& breaker);

/// Random initial boxes of size at most max_size, for experiments.
std::vector<std::vector<VertexId>> random_boxes(std::uint32_t vertex_count, std::uint32_t e,
                                                std::uint32_t max_size, std::uint64_t seed);

}  // namespace spooky
