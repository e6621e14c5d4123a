#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>

#include "spooky/analysis.hpp"
#include "spooky/errors.hpp"
#include "spooky/gamma_oracle.hpp"
#include "spooky/log_sum_exp.hpp"
#include "spooky/spookybox.hpp"

// The verifier rebuilds every position from the header and the event list.
// It shares only the edge encoding, the graph container and the Γ hash with
// the engine; box games are replayed with their own counters.

namespace spooky {

namespace {

enum Slot : std::uint8_t { kFree = 0, kMaker = 1, kBreaker = 2, kHaunted = 3 };

struct Checks {
    std::vector<InvariantCheck> list;
    std::map<std::string, std::size_t> index;

    void add(const std::string& name, bool enforced = true) {
        index[name] = list.size();
        InvariantCheck c;
        c.name = name;
        c.enforced = enforced;
        list.push_back(std::move(c));
    }
    void fail(const std::string& name, std::int64_t event, const std::string& witness) {
        auto& c = list[index.at(name)];
        if (c.passed) {
            c.passed = false;
            c.first_event = event;
            c.witness = witness;
        }
        ++c.occurrences;
    }
};

struct BoxParams {
    std::uint32_t m = 1;
    std::uint32_t b = 1;
    std::uint32_t vertex_count = 0;
    std::uint32_t e = 0;
    std::uint32_t M = 0;
    double ell = 0.0;
    bool guaranteed = false;
};

BoxParams box_params(const nlohmann::json& j) {
    BoxParams p;
    p.m = j.at("m").get<std::uint32_t>();
    p.b = j.at("b").get<std::uint32_t>();
    p.vertex_count = j.at("vertex_count").get<std::uint32_t>();
    p.e = j.at("e").get<std::uint32_t>();
    p.M = j.at("M").get<std::uint32_t>();
    p.ell = j.at("ell").get<double>();
    if (p.m == 0 || p.b == 0 || p.M == 0) throw ParseError("transcript: box game config has a zero parameter", 0);
    return p;
}

// One box game, replayed from scratch.
struct BoxReplay {
    BoxParams cfg;
    double log1m_lambda = 0.0;
    double log1p_tau = 0.0;
    std::vector<std::uint32_t> size;
    std::vector<std::uint32_t> x;
    std::vector<std::uint32_t> y;
    std::vector<std::vector<std::uint32_t>> incidence;
    std::vector<std::uint8_t> slot;
    std::uint64_t free_count = 0;
    // Round bookkeeping.
    bool growing = true;       // no proposal yet this Maker step
    bool maker_moved = false;  // some Maker step has happened
    bool awaiting_breaker = false;
    std::uint32_t claims_this_step = 0;
    double baseline = 0.0;
    double max_deficit = -std::numeric_limits<double>::infinity();
    std::uint32_t rounds = 0;

    BoxReplay(const BoxParams& p, const std::vector<std::vector<VertexId>>& boxes) : cfg(p) {
        const double m = p.m;
        const double b = p.b;
        const double log_e = p.e <= 1 ? 0.0 : std::log(static_cast<double>(p.e));
        double lambda = std::sqrt((m + b) * log_e / p.M) / m;
        if (m * lambda > 1.0 / 3.0) lambda = 1.0 / (3.0 * m);
        const double tau = std::pow(1.0 + m * lambda, 1.0 / b) - 1.0;
        log1m_lambda = std::log1p(-lambda);
        log1p_tau = std::log1p(tau);
        size.assign(p.e, 0);
        x.assign(p.e, 0);
        y.assign(p.e, 0);
        incidence.resize(p.vertex_count);
        slot.assign(p.vertex_count, kFree);
        free_count = p.vertex_count;
        for (std::uint32_t s = 0; s < boxes.size(); ++s) {
            for (VertexId v : boxes[s]) {
                incidence.at(v).push_back(s);
                ++size[s];
            }
        }
        baseline = total_log();
    }

    double box_log(std::uint32_t s) const {
        return (x[s] ? x[s] * log1m_lambda : 0.0) + (y[s] ? y[s] * log1p_tau : 0.0);
    }
    double total_log() const {
        std::vector<double> logs(size.size());
        for (std::uint32_t s = 0; s < size.size(); ++s) logs[s] = box_log(s);
        return log_sum_exp(logs);
    }
    double deficit(std::uint32_t s) const {
        const double c = x[s] + y[s];
        return cfg.m * c / (cfg.m + cfg.b) - x[s] - cfg.ell;
    }
    bool in_box(VertexId v, std::uint32_t s) const {
        const auto& inc = incidence[v];
        return std::find(inc.begin(), inc.end(), s) != inc.end();
    }
    bool valid(VertexId v) const { return v < slot.size(); }
    bool is_free(VertexId v) const { return valid(v) && slot[v] == kFree; }
    void haunt(VertexId v) {
        if (slot[v] == kFree) --free_count;
        slot[v] = kHaunted;
    }
    void claim(VertexId v, Slot who) {
        slot[v] = who;
        --free_count;
        for (std::uint32_t s : incidence[v]) (who == kMaker ? x[s] : y[s]) += 1;
    }
};

std::string ev(std::size_t i) { return "event " + std::to_string(i) + ": "; }

const char* status_name(EdgeStatus s) { return to_string(s); }

// Shared handling of the box-game events; `label` prefixes witnesses.
class BoxEventChecker {
public:
    BoxEventChecker(BoxReplay& game, Checks& checks, std::string label)
        : g_(game), checks_(checks), label_(std::move(label)) {}

    void grow(std::size_t i, const Event& e) {
        if (!g_.growing || g_.awaiting_breaker) {
            checks_.fail("box_growth", i, ev(i) + label_ + "growth after Maker proposals began");
        }
        if (e.value >= g_.size.size()) {
            checks_.fail("box_growth", i, ev(i) + label_ + "box " + std::to_string(e.value) + " does not exist");
            return;
        }
        const std::uint32_t s = e.value;
        const std::uint32_t before = g_.size[s];
        if (e.size_after < before) {
            checks_.fail("box_monotone", i,
                         ev(i) + label_ + "box " + std::to_string(s) + " shrank from " + std::to_string(before) +
                             " to " + std::to_string(e.size_after));
        } else if (e.size_after != before + e.list.size()) {
            checks_.fail("box_monotone", i,
                         ev(i) + label_ + "box " + std::to_string(s) + " reports size " +
                             std::to_string(e.size_after) + " after adding " + std::to_string(e.list.size()) +
                             " to " + std::to_string(before));
        }
        for (std::size_t k = 0; k < e.list.size(); ++k) {
            const VertexId v = e.list[k];
            if (!g_.valid(v)) {
                checks_.fail("box_growth", i, ev(i) + label_ + "vertex " + std::to_string(v) + " out of range");
                continue;
            }
            if (!g_.is_free(v)) {
                checks_.fail("box_growth", i,
                             ev(i) + label_ + "box " + std::to_string(s) + " gains claimed or haunted vertex " +
                                 std::to_string(v));
            }
            if (g_.in_box(v, s)) {
                checks_.fail("box_growth", i,
                             ev(i) + label_ + "box " + std::to_string(s) + " already holds vertex " + std::to_string(v));
                continue;
            }
            g_.incidence[v].push_back(s);
            ++g_.size[s];
            if (g_.slot[v] == kMaker) ++g_.x[s];
            if (g_.slot[v] == kBreaker) ++g_.y[s];
        }
        if (g_.size[s] > g_.cfg.M) {
            checks_.fail("box_growth", i,
                         ev(i) + label_ + "box " + std::to_string(s) + " has " + std::to_string(g_.size[s]) +
                             " vertices, above M = " + std::to_string(g_.cfg.M));
        }
    }

    void propose(std::size_t i, const Event& e) {
        if (g_.awaiting_breaker) {
            checks_.fail("turn_order", i, ev(i) + label_ + "proposal after the Maker step ended");
        }
        g_.growing = false;
        if (!g_.is_free(e.value)) {
            checks_.fail("box_partition", i,
                         ev(i) + label_ + "proposal " + std::to_string(e.value) + " is claimed or haunted");
        }
        pending_ = e.value;
    }

    // MK or GH.
    void decide(std::size_t i, const Event& e) {
        if (!pending_ || *pending_ != e.value) {
            checks_.fail("turn_order", i, ev(i) + label_ + "decision on " + std::to_string(e.value) +
                                              " without a matching proposal");
        }
        pending_.reset();
        const bool allow = e.type == EventType::MakerClaim;
        for (VertexId v : e.list) {
            if (!g_.valid(v) || g_.slot[v] == kMaker || g_.slot[v] == kBreaker) {
                checks_.fail("box_partition", i, ev(i) + label_ + "extra haunt " + std::to_string(v) +
                                                     " is out of range or claimed");
                continue;
            }
            if (allow && v == e.value) {
                checks_.fail("box_partition", i, ev(i) + label_ + "allowed proposal " + std::to_string(v) +
                                                     " also haunted");
                continue;
            }
            g_.haunt(v);
        }
        if (g_.is_free(e.value)) {
            if (allow) {
                g_.claim(e.value, kMaker);
                ++g_.claims_this_step;
                if (g_.claims_this_step > g_.cfg.m) {
                    checks_.fail("maker_bias", i, ev(i) + label_ + "more than m Maker claims in one step");
                }
            } else {
                g_.haunt(e.value);
            }
        }
        g_.maker_moved = true;
        if (g_.claims_this_step >= g_.cfg.m || g_.free_count == 0) g_.awaiting_breaker = true;
    }

    void maker_step_done() {
        g_.awaiting_breaker = true;
        audit_deficits(last_index_);
    }

    // BK.  `opening` is set when the move precedes every Maker step.
    void breaker(std::size_t i, const Event& e, bool opening) {
        last_index_ = i;
        if (e.list.size() > g_.cfg.b) {
            checks_.fail("breaker_bias", i,
                         ev(i) + label_ + std::to_string(e.list.size()) + " box vertices exceed bias " +
                             std::to_string(g_.cfg.b));
        }
        std::vector<VertexId> seen;
        for (VertexId v : e.list) {
            if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
                checks_.fail("box_partition", i, ev(i) + label_ + "Breaker repeats vertex " + std::to_string(v));
                continue;
            }
            seen.push_back(v);
            if (!g_.is_free(v)) {
                checks_.fail("box_partition", i,
                             ev(i) + label_ + "Breaker takes claimed or haunted vertex " + std::to_string(v));
                continue;
            }
            g_.claim(v, kBreaker);
        }
        const double now = g_.total_log();
        if (opening) {
            g_.baseline = now;
        } else {
            if (now > g_.baseline + std::log1p(1e-9)) {
                checks_.fail("potential_monotone", i,
                             ev(i) + label_ + "round " + std::to_string(g_.rounds + 1) + " raised log-potential from " +
                                 std::to_string(g_.baseline) + " to " + std::to_string(now));
            }
            g_.baseline = now;
            ++g_.rounds;
        }
        audit_deficits(i);
        g_.growing = true;
        g_.awaiting_breaker = false;
        g_.claims_this_step = 0;
    }

    void audit_deficits(std::size_t i) {
        for (std::uint32_t s = 0; s < g_.size.size(); ++s) {
            const double d = g_.deficit(s);
            g_.max_deficit = std::max(g_.max_deficit, d);
            if (d > kFairShareTolerance) {
                checks_.fail(fair_name_, i,
                             ev(i) + label_ + "box " + std::to_string(s) + " fair-share deficit " + std::to_string(d));
            }
        }
    }

    void set_fair_name(std::string name) { fair_name_ = std::move(name); }
    std::optional<VertexId> pending() const { return pending_; }
    void note_event(std::size_t i) { last_index_ = i; }

private:
    BoxReplay& g_;
    Checks& checks_;
    std::string label_;
    std::string fair_name_ = "fair_share";
    std::optional<VertexId> pending_;
    std::size_t last_index_ = 0;
};

void verify_box(const Transcript& t, Checks& checks, InvariantReport& report) {
    const auto& h = t.header;
    BoxParams cfg = box_params(h.at("config"));
    cfg.guaranteed = h.value("guaranteed", false);
    const auto boxes = h.at("initial_boxes").get<std::vector<std::vector<VertexId>>>();
    if (boxes.size() != cfg.e) throw ParseError("transcript: initial_boxes does not match e", 0);
    for (const auto& box : boxes) {
        for (VertexId v : box) {
            if (v >= cfg.vertex_count) throw ParseError("transcript: initial box vertex out of range", 0);
        }
    }

    checks.add("box_growth");
    checks.add("box_monotone");
    checks.add("box_partition");
    checks.add("turn_order");
    checks.add("maker_bias");
    checks.add("breaker_bias");
    checks.add("potential_monotone");
    checks.add("fair_share", cfg.guaranteed);
    checks.add("termination");

    BoxReplay game(cfg, boxes);
    BoxEventChecker box(game, checks, "");
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        const Event& e = t.events[i];
        box.note_event(i);
        switch (e.type) {
            case EventType::GhostGrow: box.grow(i, e); break;
            case EventType::MakerProposal: box.propose(i, e); break;
            case EventType::MakerClaim:
            case EventType::GhostHaunt: box.decide(i, e); break;
            case EventType::BreakerClaim:
                box.audit_deficits(i);
                box.breaker(i, e, false);
                break;
            default:
                checks.fail("turn_order", static_cast<std::int64_t>(i),
                            ev(i) + "real-game event " + tag(e.type) + " in a box transcript");
        }
    }
    const auto free_left = game.free_count;
    if (free_left > 0) {
        checks.fail("termination", static_cast<std::int64_t>(t.events.size()),
                    std::to_string(free_left) + " vertices neither claimed nor haunted at the end");
    }
    report.stats["rounds"] = game.rounds;
    report.stats["max_deficit"] = game.max_deficit;
    report.stats["maker_vertices"] = std::count(game.slot.begin(), game.slot.end(), kMaker);
    report.stats["breaker_vertices"] = std::count(game.slot.begin(), game.slot.end(), kBreaker);
    report.stats["haunted_vertices"] = std::count(game.slot.begin(), game.slot.end(), kHaunted);
}

void verify_real(const Transcript& t, Checks& checks, InvariantReport& report) {
    const auto& h = t.header;
    const auto& params = h.at("params");
    const auto n = params.at("n").get<std::uint32_t>();
    const double p = params.at("p").get<double>();
    const auto b = params.at("b").get<std::uint32_t>();
    const auto seed = params.at("seed").get<std::uint64_t>();
    const bool breaker_first = params.value("breaker_first", false);
    const std::string maker_kind = params.value("maker", std::string("potential"));
    const bool potential = maker_kind == "potential";
    if (n < 2) throw ParseError("transcript: n must be at least 2", 0);
    const auto edges = static_cast<std::uint32_t>(pair_count(n));

    checks.add("ledger_transitions");
    checks.add("gamma_membership");
    checks.add("breaker_never_revealed_out");
    checks.add("breaker_bias");
    checks.add("turn_order");
    checks.add("maker_claim_consistency");
    checks.add("ghost_legitimacy");
    checks.add("box_growth");
    checks.add("box_monotone");
    checks.add("box_partition");
    checks.add("maker_bias");
    checks.add("bias_feed");
    checks.add("potential_monotone");
    checks.add("fair_share_degree_game", h.contains("degree_game") && h["degree_game"].value("guaranteed", false));
    checks.add("fair_share_nbhd_game", h.contains("nbhd_game") && h["nbhd_game"].value("guaranteed", false));
    checks.add("ledger_trichotomy");

    std::vector<EdgeStatus> ledger(edges, EdgeStatus::Unclaimed);
    SimpleGraph gm(n);

    std::vector<std::unique_ptr<BoxReplay>> games;
    std::vector<std::unique_ptr<BoxEventChecker>> box;
    std::array<std::deque<EdgeId>, 2> feed;
    if (potential) {
        std::vector<std::vector<VertexId>> degree_boxes(n);
        for (VertexId v = 0; v < n; ++v) {
            for (VertexId u = 0; u < n; ++u) {
                if (u != v) degree_boxes[v].push_back(edge_index(u, v, n));
            }
        }
        BoxParams dp = box_params(h.at("degree_game"));
        BoxParams np = box_params(h.at("nbhd_game"));
        if (dp.vertex_count != edges || np.vertex_count != edges || dp.e != n || np.e != n) {
            throw ParseError("transcript: box game configs do not match n", 0);
        }
        games.push_back(std::make_unique<BoxReplay>(dp, degree_boxes));
        games.push_back(std::make_unique<BoxReplay>(np, std::vector<std::vector<VertexId>>(n)));
        box.push_back(std::make_unique<BoxEventChecker>(*games[0], checks, "degree game: "));
        box.push_back(std::make_unique<BoxEventChecker>(*games[1], checks, "neighbourhood game: "));
        box[0]->set_fair_name("fair_share_degree_game");
        box[1]->set_fair_name("fair_share_nbhd_game");
    }

    bool maker_to_move = !breaker_first;
    std::uint32_t turn = 0;
    std::uint32_t claims_this_turn = 0;
    bool in_maker_turn = false;
    // A box decision that must be mirrored by the next ledger event.
    bool expecting = false;
    EventType expect_type = EventType::RealMakerClaim;
    EdgeId expect_edge = 0;

    auto end_maker_turn = [&](std::size_t i) {
        if (in_maker_turn && potential) {
            const std::size_t g = turn % 2 == 1 ? 0 : 1;
            if (box[g]->pending()) {
                checks.fail("turn_order", static_cast<std::int64_t>(i), ev(i) + "proposal left unresolved");
            }
            box[g]->maker_step_done();
        }
        in_maker_turn = false;
    };

    for (std::size_t i = 0; i < t.events.size(); ++i) {
        const Event& e = t.events[i];
        const auto at = static_cast<std::int64_t>(i);
        if (expecting) {
            if (e.type != expect_type || e.value != expect_edge) {
                checks.fail(expect_type == EventType::RealMakerClaim ? "maker_claim_consistency" : "ghost_legitimacy",
                            at,
                            ev(i) + "expected " + tag(expect_type) + " of edge " + std::to_string(expect_edge) +
                                ", found " + tag(e.type));
            }
            expecting = false;
        }
        switch (e.type) {
            case EventType::MakerTurn:
                end_maker_turn(i);
                if (!maker_to_move) checks.fail("turn_order", at, ev(i) + "Maker moves twice in a row");
                if (e.value != turn + 1) {
                    checks.fail("turn_order", at,
                                ev(i) + "turn " + std::to_string(e.value) + " follows turn " + std::to_string(turn));
                }
                turn = e.value;
                maker_to_move = false;
                in_maker_turn = true;
                claims_this_turn = 0;
                break;
            case EventType::RealMakerClaim:
            case EventType::RealRevealedOut: {
                if (!in_maker_turn) checks.fail("turn_order", at, ev(i) + "ledger reveal outside a Maker turn");
                if (e.value >= edges) {
                    checks.fail("ledger_transitions", at, ev(i) + "edge " + std::to_string(e.value) + " out of range");
                    break;
                }
                const bool in = GammaOracle::sample(seed, p, e.value);
                const bool claim = e.type == EventType::RealMakerClaim;
                if (in != claim) {
                    checks.fail("gamma_membership", at,
                                ev(i) + "edge " + std::to_string(e.value) + (in ? " is" : " is not") + " in Γ but was " +
                                    (claim ? "claimed by Maker" : "revealed out"));
                }
                if (ledger[e.value] != EdgeStatus::Unclaimed) {
                    checks.fail("ledger_transitions", at,
                                ev(i) + "edge " + std::to_string(e.value) + " is " + status_name(ledger[e.value]) +
                                    ", not Unclaimed");
                    break;
                }
                ledger[e.value] = claim ? EdgeStatus::Maker : EdgeStatus::RevealedOut;
                if (claim) {
                    const auto [u, v] = endpoints(e.value, n);
                    gm.add_edge(u, v);
                    if (++claims_this_turn > 1) {
                        checks.fail("maker_bias", at, ev(i) + "second Maker claim in turn " + std::to_string(turn));
                    }
                }
                break;
            }
            case EventType::RealBreakerClaim: {
                end_maker_turn(i);
                if (maker_to_move) checks.fail("turn_order", at, ev(i) + "Breaker moves twice in a row");
                maker_to_move = true;
                if (e.list.size() > b) {
                    checks.fail("breaker_bias", at,
                                ev(i) + std::to_string(e.list.size()) + " edges exceed bias " + std::to_string(b));
                }
                for (EdgeId id : e.list) {
                    if (id >= edges) {
                        checks.fail("ledger_transitions", at, ev(i) + "edge " + std::to_string(id) + " out of range");
                        continue;
                    }
                    if (ledger[id] == EdgeStatus::RevealedOut) {
                        checks.fail("breaker_never_revealed_out", at,
                                    ev(i) + "Breaker claims revealed-out edge " + std::to_string(id));
                    }
                    if (ledger[id] != EdgeStatus::Unclaimed) {
                        checks.fail("ledger_transitions", at,
                                    ev(i) + "edge " + std::to_string(id) + " is " + status_name(ledger[id]) +
                                        ", not Unclaimed");
                        continue;
                    }
                    ledger[id] = EdgeStatus::Breaker;
                    if (potential) {
                        feed[0].push_back(id);
                        feed[1].push_back(id);
                    }
                }
                break;
            }
            case EventType::GhostGrow:
            case EventType::MakerProposal:
            case EventType::MakerClaim:
            case EventType::GhostHaunt:
            case EventType::BreakerClaim: {
                if (!potential || e.game < 0 || e.game > 1) {
                    checks.fail("turn_order", at, ev(i) + "box event " + tag(e.type) + " without a matching box game");
                    break;
                }
                const auto g = static_cast<std::size_t>(e.game);
                auto& checker = *box[g];
                checker.note_event(i);
                if (e.type == EventType::BreakerClaim) {
                    // The feed: exactly the oldest pending real Breaker edges, at most 2b.
                    const std::size_t want = std::min<std::size_t>(feed[g].size(), games[g]->cfg.b);
                    bool matches = e.list.size() == want;
                    for (std::size_t k = 0; matches && k < want; ++k) matches = e.list[k] == feed[g][k];
                    if (!matches) {
                        checks.fail("bias_feed", at,
                                    ev(i) + (g == 0 ? "degree" : "neighbourhood") +
                                        " game Breaker move differs from the accumulated real Breaker edges");
                    }
                    if (feed[g].size() > games[g]->cfg.b) {
                        checks.fail("bias_feed", at, ev(i) + "accumulated Breaker edges exceed 2b");
                    }
                    for (std::size_t k = 0; k < std::min(want, e.list.size()); ++k) feed[g].pop_front();
                    const bool opening = !games[g]->maker_moved;
                    if (opening && games[g]->awaiting_breaker) {
                        checks.fail("turn_order", at, ev(i) + "opening box move after a Maker step");
                    }
                    if (!opening && !games[g]->awaiting_breaker) {
                        checks.fail("turn_order", at, ev(i) + "box Breaker move before the Maker step ended");
                    }
                    checker.breaker(i, e, opening);
                    break;
                }
                const std::size_t active = turn % 2 == 1 ? 0 : 1;
                if (!in_maker_turn || g != active) {
                    checks.fail("turn_order", at,
                                ev(i) + tag(e.type) + " in game " + std::to_string(g) + " during turn " +
                                    std::to_string(turn));
                }
                if (e.type == EventType::GhostGrow) {
                    if (g != 1) {
                        checks.fail("box_growth", at, ev(i) + "the degree game's boxes are fixed");
                        break;
                    }
                    const VertexId v = e.value;
                    for (EdgeId id : e.list) {
                        if (id >= edges || v >= n) continue;
                        const auto [a, c] = endpoints(id, n);
                        if (a == v || c == v || !gm.has_edge(a, v) || !gm.has_edge(c, v)) {
                            checks.fail("box_growth", at,
                                        ev(i) + "edge " + std::to_string(id) + " is not inside N_M(" +
                                            std::to_string(v) + ")");
                        }
                        if (ledger[id] != EdgeStatus::Unclaimed) {
                            checks.fail("box_growth", at,
                                        ev(i) + "edge " + std::to_string(id) + " added to box " + std::to_string(v) +
                                            " is " + status_name(ledger[id]));
                        }
                    }
                    checker.grow(i, e);
                } else if (e.type == EventType::MakerProposal) {
                    checker.propose(i, e);
                } else {
                    if (e.value < edges) {
                        const EdgeStatus s = ledger[e.value];
                        if (e.type == EventType::MakerClaim) {
                            if (s != EdgeStatus::Unclaimed) {
                                checks.fail("maker_claim_consistency", at,
                                            ev(i) + "allowed edge " + std::to_string(e.value) + " is " + status_name(s));
                            }
                            expecting = true;
                            expect_type = EventType::RealMakerClaim;
                            expect_edge = e.value;
                        } else if (s == EdgeStatus::Unclaimed) {
                            expecting = true;
                            expect_type = EventType::RealRevealedOut;
                            expect_edge = e.value;
                        } else if (s == EdgeStatus::Breaker) {
                            checks.fail("ghost_legitimacy", at,
                                        ev(i) + "haunted proposal " + std::to_string(e.value) + " is Breaker's");
                        }
                    }
                    for (EdgeId id : e.list) {
                        if (id < edges && (ledger[id] == EdgeStatus::Unclaimed || ledger[id] == EdgeStatus::Breaker)) {
                            checks.fail("ghost_legitimacy", at,
                                        ev(i) + "extra haunt " + std::to_string(id) + " is " + status_name(ledger[id]));
                        }
                    }
                    checker.decide(i, e);
                }
                break;
            }
        }
    }
    if (expecting) {
        checks.fail("maker_claim_consistency", static_cast<std::int64_t>(t.events.size()),
                    "transcript ends before the ledger records the last box decision");
    }
    end_maker_turn(t.events.size());
    for (std::size_t g = 0; g < feed.size(); ++g) {
        if (potential && !feed[g].empty()) {
            checks.fail("bias_feed", static_cast<std::int64_t>(t.events.size()),
                        std::to_string(feed[g].size()) + " real Breaker edges never reached game " + std::to_string(g));
        }
    }

    std::array<std::uint32_t, 4> census{};
    for (EdgeStatus s : ledger) ++census[static_cast<std::size_t>(s)];
    if (census[0] > 0) {
        checks.fail("ledger_trichotomy", static_cast<std::int64_t>(t.events.size()),
                    std::to_string(census[0]) + " edges still Unclaimed at the end");
    }
    report.stats["maker_edges"] = census[1];
    report.stats["breaker_edges"] = census[2];
    report.stats["revealed_out_edges"] = census[3];
    report.stats["maker_turns"] = turn;
    if (potential) {
        report.stats["degree_game"] = {{"rounds", games[0]->rounds}, {"max_deficit", games[0]->max_deficit}};
        report.stats["nbhd_game"] = {{"rounds", games[1]->rounds}, {"max_deficit", games[1]->max_deficit}};
    }
}

}  // namespace

const InvariantCheck* InvariantReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

nlohmann::json InvariantReport::to_json() const {
    nlohmann::json out;
    out["verdict"] = verdict ? "pass" : "fail";
    out["events"] = events;
    out["transcript_hash"] = transcript_hash;
    out["code_version"] = kCodeVersion;
    auto& list = out["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json j = {{"name", c.name}, {"passed", c.passed}, {"enforced", c.enforced}};
        if (!c.passed) {
            j["first_event"] = c.first_event;
            j["witness"] = c.witness;
            j["occurrences"] = c.occurrences;
        }
        list.push_back(std::move(j));
    }
    out["stats"] = stats;
    return out;
}

InvariantReport verify_transcript(const Transcript& transcript) {
    InvariantReport report;
    report.events = transcript.events.size();
    report.transcript_hash = hex16(transcript.hash());
    Checks checks;
    try {
        if (transcript.kind == "box") {
            verify_box(transcript, checks, report);
        } else if (transcript.kind == "real") {
            verify_real(transcript, checks, report);
        } else {
            throw ParseError("transcript: unknown kind '" + transcript.kind + "'", 0);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("transcript: malformed header: ") + ex.what(), 0);
    }
    report.checks = std::move(checks.list);
    report.verdict = std::all_of(report.checks.begin(), report.checks.end(),
                                 [](const InvariantCheck& c) { return c.passed || !c.enforced; });
    return report;
}

}  // namespace spooky
