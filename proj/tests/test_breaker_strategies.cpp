#include <algorithm>
#include <set>

#include "doctest.h"
#include "spooky/breaker_strategies.hpp"
#include "spooky/maker_engine.hpp"

using namespace spooky;

namespace {

struct Board {
    std::uint32_t n;
    ClaimLedger ledger;
    SimpleGraph maker;
    SimpleGraph breaker;

    explicit Board(std::uint32_t n_) : n(n_), ledger(n_), maker(n_), breaker(n_) {}

    void maker_edge(VertexId u, VertexId v) {
        ledger.assign(edge_index(u, v, n), EdgeStatus::Maker);
        maker.add_edge(u, v);
    }
    void breaker_edge(VertexId u, VertexId v) {
        ledger.assign(edge_index(u, v, n), EdgeStatus::Breaker);
        breaker.add_edge(u, v);
    }
    BreakerView view(std::uint32_t b, std::optional<EdgeId> last = std::nullopt, std::uint32_t turn = 1) const {
        return {ledger, maker, breaker, n, b, last, turn};
    }
};

std::set<EdgeId> as_set(const std::vector<EdgeId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("ceil roots") {
    CHECK(ceil_sqrt(0) == 0);
    CHECK(ceil_sqrt(99) == 10);
    CHECK(ceil_sqrt(100) == 10);
    CHECK(ceil_sqrt(101) == 11);
    CHECK(ceil_cbrt(32) == 4);
    CHECK(ceil_cbrt(64) == 4);
    CHECK(ceil_cbrt(65) == 5);
}

TEST_CASE("vertex_focus") {
    Board board(10);
    const auto move = vertex_focus(board.view(4), 0);
    CHECK(move == std::vector<EdgeId>{edge_index(0, 1, 10), edge_index(0, 2, 10), edge_index(0, 3, 10),
                                      edge_index(0, 4, 10)});
    board.maker_edge(0, 2);
    const auto next = vertex_focus(board.view(4), 0);
    CHECK(next == std::vector<EdgeId>{edge_index(0, 1, 10), edge_index(0, 3, 10), edge_index(0, 4, 10),
                                      edge_index(0, 5, 10)});
    for (VertexId w = 1; w < 10; ++w) {
        if (board.ledger.is_unclaimed(edge_index(0, w, 10))) board.breaker_edge(0, w);
    }
    CHECK(vertex_focus(board.view(4), 0).empty());
}

TEST_CASE("triangle_blocker") {
    Board board(100);
    CHECK(triangle_blocker(board.view(40)).empty());
    board.maker_edge(3, 7);
    const auto first = triangle_blocker(board.view(40, edge_index(3, 7, 100)));
    CHECK(first.size() == 20);
    std::uint32_t at3 = 0;
    std::uint32_t at7 = 0;
    for (EdgeId id : first) {
        const auto [a, b] = endpoints(id, 100);
        at3 += a == 3 || b == 3;
        at7 += a == 7 || b == 7;
        CHECK(board.ledger.is_unclaimed(id));
    }
    CHECK(at3 == 10);
    CHECK(at7 == 10);

    // Maker holds 3-50 and now claims 3-60: 50-60 is dangerous.
    Board b2(100);
    b2.maker_edge(3, 50);
    b2.maker_edge(3, 60);
    const auto move = triangle_blocker(b2.view(40, edge_index(3, 60, 100)));
    CHECK(as_set(move).count(edge_index(50, 60, 100)) == 1);
    CHECK(move.size() <= 40);
}

TEST_CASE("k4_blocker rule (i) and the per-round quota") {
    Board board(64);
    board.maker_edge(10, 20);
    K4BlockerLog log;
    const auto move = k4_blocker(board.view(32, edge_index(10, 20, 64)), 0, &log);
    std::vector<EdgeId> expected{edge_index(0, 1, 64), edge_index(0, 2, 64), edge_index(0, 3, 64),
                                 edge_index(0, 4, 64), edge_index(0, 10, 64), edge_index(0, 20, 64)};
    CHECK(move == expected);
    CHECK(log.rule_i == 1);
}

TEST_CASE("k4_blocker rules (ii) and (iii)") {
    Board board(64);
    for (VertexId w : {30, 31, 32, 33}) board.maker_edge(0, w);
    board.maker_edge(30, 31);
    board.maker_edge(40, 30);
    board.maker_edge(40, 31);
    // Rule (ii): Maker just took v0-40 where 40 already sees 30 and 31.
    board.maker_edge(0, 40);
    K4BlockerLog log;
    const auto two = k4_blocker(board.view(32, edge_index(0, 40, 64)), 0, &log);
    CHECK(log.rule_ii == 1);
    CHECK(log.newcomer_assumption_failures == 1);
    CHECK(as_set(two).count(edge_index(40, 32, 64)) == 1);
    CHECK(as_set(two).count(edge_index(40, 33, 64)) == 1);
    CHECK(two.size() <= 32);

    // Rule (iii): 32-33 inside N(v0); co-neighbourhood of 32 gets closed.
    board.maker_edge(32, 30);
    board.maker_edge(32, 33);
    const auto three = k4_blocker(board.view(32, edge_index(32, 33, 64)), 0, &log);
    CHECK(log.rule_iii == 1);
    // 30 and 33 are both in N(v0) ∩ N(32); their edge must go.
    CHECK(as_set(three).count(edge_index(30, 33, 64)) == 1);
    for (EdgeId id : three) CHECK(board.ledger.is_unclaimed(id));
}

TEST_CASE("bias accounting at n = 64") {
    const std::uint32_t q = ceil_cbrt(64);
    CHECK(q + 4 * q + 3 * q == 32);
    CHECK(8 * q == 32);
}

TEST_CASE("random_breaker") {
    Board board(12);
    const auto a = random_breaker(board.view(5, std::nullopt, 3), 9);
    const auto b = random_breaker(board.view(5, std::nullopt, 3), 9);
    const auto c = random_breaker(board.view(5, std::nullopt, 4), 9);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(as_set(a).size() == 5);
    for (EdgeId id = 0; id < 60; ++id) board.ledger.assign(id, EdgeStatus::Breaker);
    const auto rest = random_breaker(board.view(10), 1);
    CHECK(rest == std::vector<EdgeId>{60, 61, 62, 63, 64, 65});
}

TEST_CASE("random breaker takes min(b, remaining) every turn of a full game") {
    RealGameParams params;
    params.n = 50;
    params.p = 0.4;
    params.b = 2;
    params.seed = 5;
    RealGame game(params);
    RandomBreaker breaker(17);
    while (!game.finished()) {
        game.maker_turn();
        if (game.finished()) break;
        const auto before = game.ledger().count(EdgeStatus::Unclaimed);
        const auto move = game.breaker_turn(breaker);
        CHECK(move.size() == std::min<std::uint32_t>(2, before));
    }
}

TEST_CASE("make_breaker") {
    CHECK(make_breaker("null", 0, 1)->name() == "null");
    CHECK(make_breaker("k4-blocker", 3, 1)->parameters()["v0"] == 3);
    CHECK(make_breaker("vertex-focus", 5, 1)->parameters()["target"] == 5);
    CHECK_THROWS_AS(make_breaker("nope", 0, 1), InvalidArgument);
}
