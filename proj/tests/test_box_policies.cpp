#include <algorithm>
#include <random>

#include "doctest.h"
#include "spooky/box_policies.hpp"

using namespace spooky;

TEST_CASE("null ghost and null breaker: Maker takes everything") {
    BoxGameConfig cfg{1, 2, 50, 8, 30, 0.0, false};
    NullGhost ghost;
    NullBoxBreaker breaker;
    const auto run = run_box_game(cfg, random_boxes(50, 8, 30, 1), ghost, breaker);
    CHECK(run.rounds == 50);
    CHECK(run.max_deficit <= 0.0);
    CHECK(run.violations == 0);
    CHECK(run.potential_monotone);
}

TEST_CASE("always-haunt ghost leaves Maker with nothing") {
    BoxGameConfig cfg{1, 2, 30, 4, 30, 1.0, false};
    AlwaysHauntGhost ghost;
    RandomBoxBreaker breaker(5);
    const auto boxes = random_boxes(30, 4, 30, 9);
    const auto run = run_box_game(cfg, boxes, ghost, breaker);
    std::uint32_t claims = 0;
    for (const auto& e : run.transcript.events) claims += e.type == EventType::MakerClaim;
    CHECK(claims == 0);

    // Each box's deficit is then c/3 - ell with c its Breaker count.
    std::vector<std::uint32_t> y(4, 0);
    for (const auto& e : run.transcript.events) {
        if (e.type != EventType::BreakerClaim) continue;
        for (VertexId v : e.list) {
            for (std::uint32_t b = 0; b < 4; ++b) {
                y[b] += std::count(boxes[b].begin(), boxes[b].end(), v) > 0;
            }
        }
    }
    double worst = -1e300;
    for (auto c : y) worst = std::max(worst, c / 3.0 - 1.0);
    CHECK(run.max_deficit == doctest::Approx(worst));
    CHECK((run.violations > 0) == (worst > kFairShareTolerance));
}

TEST_CASE("preconditions hold: no violation against random players, 100 seeds") {
    BoxGameConfig cfg{1, 2, 600, 16, 512, 80.0, false};
    REQUIRE(derive_parameters(cfg).preconditions_ok);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RandomGhost ghost(seed);
        RandomBoxBreaker breaker(seed * 31 + 1);
        const auto run = run_box_game(cfg, random_boxes(600, 16, 256, seed), ghost, breaker);
        REQUIRE(run.violations == 0);
        REQUIRE(run.potential_monotone);
    }
}

TEST_CASE("scripted players replay a transcript exactly") {
    BoxGameConfig cfg{2, 3, 80, 12, 40, 5.0, false};
    const auto boxes = random_boxes(80, 12, 20, 4);
    RandomGhost ghost(8);
    GreedyConcentrateBreaker breaker;
    const auto run = run_box_game(cfg, boxes, ghost, breaker);
    ScriptedBoxPlayers script(run.transcript);
    const auto again = run_box_game(cfg, boxes, script.ghost(), script.breaker());
    CHECK(again.transcript.events == run.transcript.events);
    CHECK(again.transcript.hash() == run.transcript.hash());
    CHECK(again.round_log_potentials == run.round_log_potentials);
}

TEST_CASE("policies only make legal moves") {
    BoxGameConfig cfg{1, 5, 200, 30, 60, 0.0, false};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SpitefulGhost ghost(seed);
        GreedyConcentrateBreaker breaker;
        // Illegal moves would throw ProtocolViolation.
        CHECK_NOTHROW(run_box_game(cfg, random_boxes(200, 30, 40, seed), ghost, breaker));
    }
}

TEST_CASE("random_boxes respects sizes and is deterministic") {
    const auto a = random_boxes(50, 20, 7, 3);
    const auto b = random_boxes(50, 20, 7, 3);
    CHECK(a == b);
    for (const auto& box : a) {
        CHECK(box.size() <= 7);
        CHECK(std::is_sorted(box.begin(), box.end()));
        CHECK(std::adjacent_find(box.begin(), box.end()) == box.end());
    }
}
