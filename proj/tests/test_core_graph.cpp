#include <random>
#include <set>

#include "doctest.h"
#include "spooky/core_graph.hpp"

using namespace spooky;

TEST_CASE("edge_index on K5") {
    CHECK(edge_index(0, 1, 5) == 0);
    CHECK(edge_index(0, 4, 5) == 3);
    CHECK(edge_index(3, 4, 5) == 9);
    CHECK(edge_index(4, 3, 5) == 9);
    CHECK(pair_count(5) == 10);
}

TEST_CASE("endpoints inverts edge_index") {
    CHECK(endpoints(0, 5) == std::pair<VertexId, VertexId>{0, 1});
    CHECK(endpoints(9, 5) == std::pair<VertexId, VertexId>{3, 4});

    // All 28 pairs at n = 8, counted in lexicographic order.
    EdgeId expected = 0;
    for (VertexId u = 0; u < 8; ++u) {
        for (VertexId v = u + 1; v < 8; ++v) {
            CHECK(edge_index(u, v, 8) == expected);
            CHECK(endpoints(expected, 8) == std::pair<VertexId, VertexId>{u, v});
            ++expected;
        }
    }
    CHECK(expected == 28);
}

TEST_CASE("edge encoding is a bijection up to n = 64") {
    for (std::uint32_t n = 2; n <= 64; ++n) {
        for (EdgeId id = 0; id < pair_count(n); ++id) {
            const auto [u, v] = endpoints(id, n);
            REQUIRE(u < v);
            REQUIRE(v < n);
            REQUIRE(edge_index(u, v, n) == id);
        }
    }
}

TEST_CASE("edge encoding at large n") {
    const std::uint32_t n = 65535;
    const EdgeId last = static_cast<EdgeId>(pair_count(n) - 1);
    CHECK(endpoints(last, n) == std::pair<VertexId, VertexId>{n - 2, n - 1});
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; ++i) {
        const EdgeId id = static_cast<EdgeId>(rng() % pair_count(n));
        const auto [u, v] = endpoints(id, n);
        REQUIRE(edge_index(u, v, n) == id);
    }
}

TEST_CASE("encoding errors") {
    CHECK_THROWS_AS(edge_index(2, 2, 5), InvalidArgument);
    CHECK_THROWS_AS(edge_index(0, 5, 5), InvalidArgument);
    CHECK_THROWS_AS(endpoints(10, 5), InvalidArgument);
}

TEST_CASE("SimpleGraph bookkeeping") {
    SimpleGraph g(6);
    CHECK(g.add_edge(0, 3));
    CHECK(g.add_edge(3, 1));
    CHECK(g.add_edge(0, 1));
    CHECK_FALSE(g.add_edge(1, 0));
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(3, 0));
    CHECK_FALSE(g.has_edge(2, 4));
    CHECK(g.degree(0) == 2);
    CHECK(g.neighbours(3).size() == 2);
    CHECK(g.neighbours(3)[0] == 0);
    CHECK(g.common_neighbour_count(0, 3) == 1);
    CHECK(g.common_neighbours(0, 3) == std::vector<VertexId>{1});
    const std::vector<VertexId> tri{0, 1, 3};
    CHECK(g.induced_edge_count(tri) == 3);
    const std::vector<VertexId> pair{0, 2};
    CHECK(g.induced_edge_count(pair) == 0);
    CHECK(g.is_consistent());
    CHECK_THROWS_AS(g.add_edge(2, 2), InvalidArgument);
    CHECK_THROWS_AS(g.add_edge(2, 6), InvalidArgument);
}

TEST_CASE("SimpleGraph stays consistent under random insertion") {
    std::mt19937_64 rng(11);
    SimpleGraph g(30);
    std::set<std::pair<VertexId, VertexId>> ref;
    for (int i = 0; i < 400; ++i) {
        VertexId u = rng() % 30;
        VertexId v = rng() % 30;
        if (u == v) continue;
        const bool fresh = ref.insert({std::min(u, v), std::max(u, v)}).second;
        CHECK(g.add_edge(u, v) == fresh);
    }
    CHECK(g.edge_count() == ref.size());
    CHECK(g.is_consistent());
    std::uint64_t degree_sum = 0;
    for (VertexId v = 0; v < 30; ++v) degree_sum += g.degree(v);
    CHECK(degree_sum == 2 * g.edge_count());
}

TEST_CASE("ClaimLedger transitions and counts") {
    ClaimLedger ledger(7);
    CHECK(ledger.size() == 21);
    CHECK(ledger.count(EdgeStatus::Unclaimed) == 21);
    ledger.assign(3, EdgeStatus::Maker);
    ledger.assign(4, EdgeStatus::Breaker);
    ledger.assign(5, EdgeStatus::RevealedOut);
    CHECK(ledger.status(3) == EdgeStatus::Maker);
    CHECK_FALSE(ledger.is_unclaimed(4));
    CHECK_THROWS_AS(ledger.assign(3, EdgeStatus::Breaker), InvariantViolation);
    CHECK_THROWS_AS(ledger.assign(5, EdgeStatus::Maker), InvariantViolation);
    CHECK_THROWS_AS(ledger.assign(6, EdgeStatus::Unclaimed), InvariantViolation);
    CHECK_THROWS_AS(ledger.assign(21, EdgeStatus::Maker), InvalidArgument);
    std::uint32_t total = 0;
    for (auto s : {EdgeStatus::Unclaimed, EdgeStatus::Maker, EdgeStatus::Breaker, EdgeStatus::RevealedOut}) {
        total += ledger.count(s);
    }
    CHECK(total == 21);
    CHECK(ledger.count(EdgeStatus::Unclaimed) == 18);
    CHECK(ledger.any_unclaimed());
}
