#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "spooky/box_policies.hpp"
#include "spooky/spookybox.hpp"

using namespace spooky;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

BoxGameConfig config(std::uint32_t m, std::uint32_t b, std::uint32_t v, std::uint32_t e, std::uint32_t M,
                     double ell = 0.0) {
    return {m, b, v, e, M, ell, false};
}

// Φ(H, X, Y) straight from the definition.
double potential_from_scratch(const BoxGameState& s) {
    const double lambda = s.parameters().lambda;
    const double tau = s.parameters().tau;
    double total = 0.0;
    for (std::uint32_t i = 0; i < s.box_count(); ++i) {
        int x = 0;
        int y = 0;
        for (VertexId v : s.box(i)) {
            x += s.owner(v) == Owner::Maker;
            y += s.owner(v) == Owner::Breaker;
        }
        total += std::pow(1.0 - lambda, x) * std::pow(1.0 + tau, y);
    }
    return total;
}

}  // namespace

TEST_CASE("derive_parameters at m=1, b=2, e=16, M=512") {
    const auto p = derive_parameters(config(1, 2, 1000, 16, 512, 80.0));
    const Big log_e = boost::multiprecision::log(Big(16));
    const Big lambda = boost::multiprecision::sqrt(3 * log_e / 512);
    const Big tau = boost::multiprecision::sqrt(1 + lambda) - 1;
    const Big ell_min = Big(10) / 3 * boost::multiprecision::sqrt(512 * log_e / 3);
    CHECK(std::abs(p.lambda - lambda.convert_to<double>()) < 1e-14);
    CHECK(std::abs(p.tau - tau.convert_to<double>()) < 1e-14);
    CHECK(std::abs(p.ell_min - ell_min.convert_to<double>()) < 1e-11);
    CHECK(p.lambda == doctest::Approx(0.12746).epsilon(1e-4));
    CHECK(p.tau == doctest::Approx(0.06182).epsilon(1e-3));
    CHECK(p.ell_min == doctest::Approx(72.5).epsilon(1e-3));
    CHECK(p.size_bound_ok);
    CHECK(p.slack_bound_ok);
    CHECK(p.preconditions_ok);
    CHECK_FALSE(derive_parameters(config(1, 2, 1000, 16, 512, 72.0)).preconditions_ok);
}

TEST_CASE("tau solves (1+tau)^b = 1 + m lambda") {
    const auto p1 = derive_parameters(config(1, 1, 10, 40, 900));
    CHECK(p1.tau == doctest::Approx(p1.lambda).epsilon(1e-15));
    for (std::uint32_t m : {1U, 2U, 3U}) {
        for (std::uint32_t b : {1U, 2U, 5U, 17U}) {
            for (std::uint32_t e : {2U, 10U, 1000U}) {
                const auto p = derive_parameters(config(m, b, 10, e, 100000));
                CHECK(std::abs(std::pow(1.0 + p.tau, b) - (1.0 + m * p.lambda)) < 1e-12);
            }
        }
    }
}

TEST_CASE("degenerate, capped and strict configurations") {
    const auto one = derive_parameters(config(1, 2, 5, 1, 10));
    CHECK(one.degenerate);
    CHECK(one.lambda == 0.0);
    CHECK(one.tau == 0.0);

    const auto capped = derive_parameters(config(1, 44, 10, 30, 30));
    CHECK(capped.lambda_capped);
    CHECK_FALSE(capped.size_bound_ok);
    CHECK(capped.lambda == doctest::Approx(1.0 / 3.0));

    auto strict = config(1, 2, 100, 16, 20, 0.0);
    strict.strict_preconditions = true;
    CHECK_THROWS_AS(derive_parameters(strict), ConfigError);
    CHECK_THROWS_AS(derive_parameters(config(0, 2, 10, 4, 10)), ConfigError);
    CHECK_THROWS_AS(derive_parameters(config(1, 2, 10, 4, 10, -1.0)), ConfigError);
}

TEST_CASE("box_log_potential and fair_share_deficit") {
    CHECK(box_log_potential(0, 0, 0.3, 0.2) == 0.0);
    CHECK(box_log_potential(1, 1, 0.5, 0.5) == doctest::Approx(std::log(0.75)));
    CHECK(fair_share_deficit(0, 0, 1, 2, 3.5) == doctest::Approx(-3.5));
    CHECK(fair_share_deficit(2, 10, 1, 2, 2.0) == doctest::Approx(0.0));
    CHECK(fair_share_deficit(1, 11, 1, 2, 2.0) == doctest::Approx(1.0));
    CHECK(fair_share_deficit(1, 11, 1, 2, 2.0) > kFairShareTolerance);
}

TEST_CASE("untouched boxes total e") {
    BoxGameState s(config(1, 2, 10, 4, 8), {{0, 1}, {1, 2}, {}, {5}});
    CHECK(std::exp(s.total_log_potential()) == doctest::Approx(4.0));
    CHECK(s.counters_consistent());
}

TEST_CASE("maker_effect") {
    BoxGameState s(config(1, 2, 10, 4, 8), {{0, 1}, {1, 2}, {}, {1, 5}});
    const double lambda = s.parameters().lambda;
    CHECK(s.maker_effect(7) == 0.0);
    CHECK(s.maker_effect(0) == doctest::Approx(lambda));
    CHECK(s.maker_effect(1) == doctest::Approx(3 * lambda));
}

TEST_CASE("effect equals the potential drop on random instances") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto boxes = random_boxes(40, 25, 12, rng());
        BoxGameState s(config(1, 3, 40, 25, 12), boxes);
        // Reach a mixed position first.
        s.breaker_claim(std::vector<VertexId>{static_cast<VertexId>(rng() % 40)});
        s.ghost_grow({});
        for (int k = 0; k < 6 && s.phase() == BoxPhase::MakerMove; ++k) {
            const auto v = s.select_maker_vertex();
            if (!v) break;
            s.resolve_maker_proposal(GhostDecision::Allow());
        }
        const double lambda = s.parameters().lambda;
        const double before = potential_from_scratch(s);
        for (VertexId v = 0; v < 40; ++v) {
            if (!s.is_free(v)) continue;
            // Φ(X ∪ {v}) recomputed from the box contents.
            double after = 0.0;
            for (std::uint32_t i = 0; i < s.box_count(); ++i) {
                int x = 0;
                int y = 0;
                for (VertexId u : s.box(i)) {
                    x += s.owner(u) == Owner::Maker || u == v;
                    y += s.owner(u) == Owner::Breaker;
                }
                after += std::pow(1.0 - lambda, x) * std::pow(1.0 + s.parameters().tau, y);
            }
            const double drop = before - after;
            CHECK(s.maker_effect(v) == doctest::Approx(drop).epsilon(1e-9));
        }
    }
}

TEST_CASE("selection maximises the effect, lowest index on ties") {
    BoxGameState s(config(1, 2, 3, 2, 4), {{0, 1}, {1, 2}});
    s.ghost_grow({});
    CHECK(s.select_maker_vertex() == VertexId{1});

    BoxGameState sym(config(1, 2, 4, 2, 4), {{2, 3}, {0, 1}});
    sym.ghost_grow({});
    CHECK(sym.select_maker_vertex() == VertexId{0});

    BoxGameState none(config(1, 2, 2, 1, 4), {{0, 1}});
    none.ghost_grow({});
    REQUIRE(none.select_maker_vertex() == VertexId{0});
    none.resolve_maker_proposal(GhostDecision::Haunt({1}));
    CHECK(none.phase() == BoxPhase::BreakerMove);
}

TEST_CASE("select returns nullopt once everything is taken") {
    BoxGameState s(config(2, 1, 2, 1, 4), {{0, 1}});
    s.ghost_grow({});
    REQUIRE(s.select_maker_vertex() == VertexId{0});
    s.resolve_maker_proposal(GhostDecision::Haunt());
    REQUIRE(s.select_maker_vertex() == VertexId{1});
    s.resolve_maker_proposal(GhostDecision::Haunt());
    CHECK(s.finished());
    CHECK(s.phase() == BoxPhase::BreakerMove);

    BoxGameState t(config(1, 1, 3, 1, 4), {{0, 1, 2}});
    t.ghost_grow({});
    t.select_maker_vertex();
    t.resolve_maker_proposal(GhostDecision::Allow({1, 2}));
    t.breaker_claim({});
    t.ghost_grow({});
    CHECK(t.phase() == BoxPhase::BreakerMove);
}

TEST_CASE("ghost_grow") {
    BoxGameState s(config(1, 2, 6, 2, 3), {{}, {4}});
    s.ghost_grow({});
    CHECK(s.phase() == BoxPhase::MakerMove);
    CHECK(s.box_size(0) == 0);
    s.select_maker_vertex();
    s.resolve_maker_proposal(GhostDecision::Allow());
    s.breaker_claim(std::vector<VertexId>{5});

    const double before = s.total_log_potential();
    s.ghost_grow({{0, {1}}});
    CHECK(s.box_size(0) == 1);
    CHECK(s.box_log_potential(0) == 0.0);
    CHECK(s.total_log_potential() == doctest::Approx(before));
    s.select_maker_vertex();
    s.resolve_maker_proposal(GhostDecision::Allow());
    s.breaker_claim({});

    CHECK_THROWS_AS(s.ghost_grow({{0, {5}}}), ProtocolViolation);     // Breaker's vertex
    CHECK_THROWS_AS(s.ghost_grow({{0, {2, 2}}}), ProtocolViolation);  // duplicate
    CHECK_THROWS_AS(s.ghost_grow({{0, {2, 3, 4}}}), ProtocolViolation);  // over M
    CHECK_THROWS_AS(s.ghost_grow({{1, {4}}}), ProtocolViolation);        // claimed, already present
    CHECK_THROWS_AS(s.ghost_grow({{7, {2}}}), ProtocolViolation);
    // Rejected additions leave the state alone.
    CHECK(s.box_size(0) == 1);
    CHECK(s.phase() == BoxPhase::GhostGrow);
    CHECK(s.counters_consistent());
}

TEST_CASE("resolve_maker_proposal") {
    BoxGameState s(config(1, 2, 6, 4, 6), {{0, 1}, {0, 2}, {0, 3}, {4}});
    s.ghost_grow({});
    REQUIRE(s.select_maker_vertex() == VertexId{0});
    const double lambda = s.parameters().lambda;
    s.resolve_maker_proposal(GhostDecision::Allow());
    CHECK(std::exp(s.total_log_potential()) == doctest::Approx(4.0 - 3 * lambda));
    CHECK(s.owner(0) == Owner::Maker);
    CHECK(s.phase() == BoxPhase::BreakerMove);
    s.breaker_claim(std::vector<VertexId>{1});
    s.ghost_grow({});
    const auto next = s.select_maker_vertex();
    REQUIRE(next);
    const double before = s.total_log_potential();
    s.resolve_maker_proposal(GhostDecision::Haunt({5}));
    CHECK(s.total_log_potential() == doctest::Approx(before));
    CHECK(s.owner(*next) == Owner::Haunted);
    CHECK(s.owner(5) == Owner::Haunted);
    const auto again = s.select_maker_vertex();
    REQUIRE(again);
    CHECK(*again != *next);
    CHECK(*again != 5);
    CHECK_THROWS_AS(s.resolve_maker_proposal(GhostDecision::Haunt({0})), ProtocolViolation);
    CHECK_THROWS_AS(s.resolve_maker_proposal(GhostDecision::Allow({*again})), ProtocolViolation);
}

TEST_CASE("breaker_claim") {
    BoxGameState s(config(1, 2, 8, 2, 6), {{0, 1, 2}, {3, 6}});
    const double lambda = s.parameters().lambda;
    const double tau = s.parameters().tau;
    s.ghost_grow({});
    REQUIRE(s.select_maker_vertex() == VertexId{0});
    s.resolve_maker_proposal(GhostDecision::Haunt({1, 2}));
    REQUIRE(s.select_maker_vertex() == VertexId{3});
    s.resolve_maker_proposal(GhostDecision::Allow());
    CHECK_THROWS_AS(s.breaker_claim(std::vector<VertexId>{5, 6, 7}), ProtocolViolation);
    CHECK_THROWS_AS(s.breaker_claim(std::vector<VertexId>{6, 6}), ProtocolViolation);
    CHECK_THROWS_AS(s.breaker_claim(std::vector<VertexId>{0}), ProtocolViolation);
    s.breaker_claim(std::vector<VertexId>{6, 7});
    CHECK(s.box_log_potential(1) == doctest::Approx(std::log1p(-lambda) + std::log1p(tau)));
    CHECK(s.box_log_potential(0) == 0.0);
    CHECK(s.round() == 2);
    CHECK_THROWS_AS(s.breaker_claim(std::vector<VertexId>{5}), ProtocolViolation);
}

TEST_CASE("opening Breaker move is allowed once") {
    BoxGameState s(config(1, 2, 6, 1, 6), {{0, 1, 2, 3}});
    CHECK(s.opening_move_allowed());
    s.breaker_claim(std::vector<VertexId>{0, 1});
    CHECK_FALSE(s.opening_move_allowed());
    CHECK(s.round() == 1);
    CHECK_THROWS_AS(s.breaker_claim(std::vector<VertexId>{2}), ProtocolViolation);
    s.ghost_grow({});
    CHECK(s.select_maker_vertex() == VertexId{2});
}

TEST_CASE("cached potentials track a from-scratch recount after every event") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const std::uint32_t V = 120;
        const std::uint32_t e = 60;
        const std::uint32_t M = 40;
        BoxGameState s(config(1, 2, V, e, M, 10.0), random_boxes(V, e, 20, rng()));
        RandomGhost ghost(rng());
        RandomBoxBreaker breaker(rng());
        while (!s.finished()) {
            s.ghost_grow(ghost.grow(s));
            REQUIRE(s.counters_consistent());
            while (s.phase() == BoxPhase::MakerMove) {
                const auto v = s.select_maker_vertex();
                if (!v) break;
                s.resolve_maker_proposal(ghost.decide(s, *v));
                REQUIRE(s.counters_consistent());
                REQUIRE(std::exp(s.total_log_potential()) ==
                        doctest::Approx(potential_from_scratch(s)).epsilon(1e-9));
            }
            s.breaker_claim(breaker.choose(s));
            REQUIRE(s.counters_consistent());
            REQUIRE(std::exp(s.total_log_potential()) == doctest::Approx(potential_from_scratch(s)).epsilon(1e-9));
        }
    }
}

TEST_CASE("log-domain potentials survive huge Breaker counts") {
    const std::uint32_t V = 6000;
    std::vector<VertexId> all(V);
    for (VertexId v = 0; v < V; ++v) all[v] = v;
    BoxGameState s(config(1, 3000, V, 2, V), {all, {0}});
    s.breaker_claim(std::vector<VertexId>(all.begin() + 1, all.begin() + 3001));
    CHECK(std::isfinite(s.total_log_potential()));
    const double big = 3000 * std::log1p(s.parameters().tau);
    CHECK(s.box_log_potential(0) == doctest::Approx(big));
    CHECK(s.total_log_potential() == doctest::Approx(std::log(std::exp(big) + 1.0)));
    s.ghost_grow({});
    CHECK(std::isfinite(s.log_maker_effect(0)));
    CHECK(s.select_maker_vertex() == VertexId{0});
}
