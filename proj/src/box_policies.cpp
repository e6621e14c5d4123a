#include "spooky/box_policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spooky/errors.hpp"

namespace spooky {

namespace {

// Up to k distinct free vertices not already in `exclude_box` (or any box when
// exclude_box is negative), uniformly at random.
std::vector<VertexId> sample_free(const BoxGameState& state, std::uint32_t k, std::mt19937_64& rng,
                                  std::int64_t exclude_box = -1) {
    std::vector<VertexId> out;
    const std::uint32_t nv = state.config().vertex_count;
    if (k == 0 || state.free_count() == 0) return out;
    auto usable = [&](VertexId v) {
        if (!state.is_free(v)) return false;
        if (exclude_box >= 0) {
            const auto inc = state.incidence(v);
            if (std::find(inc.begin(), inc.end(), static_cast<std::uint32_t>(exclude_box)) != inc.end()) {
                return false;
            }
        }
        return std::find(out.begin(), out.end(), v) == out.end();
    };
    if (state.free_count() * 4 >= nv) {
        std::uniform_int_distribution<VertexId> pick(0, nv - 1);
        for (std::uint32_t tries = 0; out.size() < k && tries < 16 * k + 64; ++tries) {
            const VertexId v = pick(rng);
            if (usable(v)) out.push_back(v);
        }
        return out;
    }
    std::vector<VertexId> pool;
    for (VertexId v = 0; v < nv; ++v) {
        if (usable(v)) pool.push_back(v);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    if (pool.size() > k) pool.resize(k);
    return pool;
}

std::uint32_t most_attacked_box(const BoxGameState& state) {
    std::uint32_t best = 0;
    bool found = false;
    for (std::uint32_t s = 0; s < state.box_count(); ++s) {
        const std::uint32_t free_in_box = state.box_size(s) - state.x_count(s) - state.y_count(s);
        if (!found || state.y_count(s) > state.y_count(best) ||
            (state.y_count(s) == state.y_count(best) && free_in_box > 0 &&
             state.box_size(best) - state.x_count(best) - state.y_count(best) == 0)) {
            best = s;
            found = true;
        }
    }
    return best;
}

}  // namespace

RandomGhost::RandomGhost(std::uint64_t seed, double grow_prob, double haunt_prob, double extra_prob)
    : rng_(seed), grow_prob_(grow_prob), haunt_prob_(haunt_prob), extra_prob_(extra_prob) {}

std::vector<BoxAddition> RandomGhost::grow(const BoxGameState& state) {
    std::vector<BoxAddition> out;
    std::bernoulli_distribution coin(grow_prob_);
    const std::uint32_t M = state.config().M;
    for (std::uint32_t s = 0; s < state.box_count(); ++s) {
        if (!coin(rng_) || state.box_size(s) >= M) continue;
        std::uniform_int_distribution<std::uint32_t> count(1, std::min<std::uint32_t>(8, M - state.box_size(s)));
        auto vs = sample_free(state, count(rng_), rng_, s);
        if (!vs.empty()) out.push_back({s, std::move(vs)});
    }
    return out;
}

GhostDecision RandomGhost::decide(const BoxGameState& state, VertexId proposal) {
    std::bernoulli_distribution haunt(haunt_prob_);
    std::bernoulli_distribution extra(extra_prob_);
    GhostDecision d = haunt(rng_) ? GhostDecision::Haunt() : GhostDecision::Allow();
    if (extra(rng_)) {
        for (VertexId v : sample_free(state, 2, rng_)) {
            if (v != proposal) d.extra_haunts.push_back(v);
        }
    }
    return d;
}

std::vector<BoxAddition> SpitefulGhost::grow(const BoxGameState& state) {
    const std::uint32_t target = most_attacked_box(state);
    const std::uint32_t room = state.config().M - state.box_size(target);
    auto vs = sample_free(state, std::min<std::uint32_t>(room, 16), rng_, target);
    if (vs.empty()) return {};
    return {BoxAddition{target, std::move(vs)}};
}

GhostDecision SpitefulGhost::decide(const BoxGameState& state, VertexId proposal) {
    const std::uint32_t target = most_attacked_box(state);
    const auto inc = state.incidence(proposal);
    const bool helps_target = std::find(inc.begin(), inc.end(), target) != inc.end();
    return helps_target ? GhostDecision::Haunt() : GhostDecision::Allow();
}

std::vector<VertexId> RandomBoxBreaker::choose(const BoxGameState& state) {
    return sample_free(state, state.config().b, rng_);
}

std::vector<VertexId> GreedyConcentrateBreaker::choose(const BoxGameState& state) {
    const std::uint32_t b = state.config().b;
    std::vector<std::uint32_t> order(state.box_count());
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t c) {
        return state.y_count(a) > state.y_count(c);
    });
    std::vector<VertexId> out;
    auto take = [&](VertexId v) {
        if (out.size() < b && state.is_free(v) && std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    };
    for (std::uint32_t s : order) {
        for (VertexId v : state.box(s)) take(v);
        if (out.size() == b) return out;
    }
    for (VertexId v = 0; v < state.config().vertex_count && out.size() < b; ++v) take(v);
    return out;
}

ScriptedBoxPlayers::ScriptedBoxPlayers(const Transcript& transcript) : events_(transcript.events) {
    ghost_.owner = this;
    breaker_.owner = this;
}

const Event* ScriptedBoxPlayers::next_of(EventType type) {
    if (cursor_ < events_.size() && events_[cursor_].type == type) return &events_[cursor_++];
    return nullptr;
}

std::vector<BoxAddition> ScriptedBoxPlayers::Ghost::grow(const BoxGameState&) {
    std::vector<BoxAddition> out;
    while (const Event* e = owner->next_of(EventType::GhostGrow)) out.push_back({e->value, e->list});
    return out;
}

GhostDecision ScriptedBoxPlayers::Ghost::decide(const BoxGameState&, VertexId proposal) {
    const Event* mp = owner->next_of(EventType::MakerProposal);
    if (!mp || mp->value != proposal) {
        throw ProtocolViolation("scripted ghost: Maker proposal " + std::to_string(proposal) +
                                " diverges from the script");
    }
    if (const Event* e = owner->next_of(EventType::MakerClaim)) return GhostDecision::Allow(e->list);
    if (const Event* e = owner->next_of(EventType::GhostHaunt)) return GhostDecision::Haunt(e->list);
    throw ProtocolViolation("scripted ghost: script has no decision for proposal " + std::to_string(proposal));
}

std::vector<VertexId> ScriptedBoxPlayers::Breaker::choose(const BoxGameState&) {
    if (const Event* e = owner->next_of(EventType::BreakerClaim)) return e->list;
    throw ProtocolViolation("scripted breaker: script has no Breaker move here");
}

BoxGameRun run_box_game(const BoxGameConfig& cfg, std::vector<std::vector<VertexId>> initial_boxes,
                        GhostPolicy& ghost, BoxBreakerPolicy& breaker) {
    BoxGameRun run;
    run.transcript.kind = "box";
    auto& header = run.transcript.header;
    header["config"] = {{"m", cfg.m},   {"b", cfg.b}, {"vertex_count", cfg.vertex_count}, {"e", cfg.e},
                        {"M", cfg.M},   {"ell", cfg.ell}, {"strict_preconditions", cfg.strict_preconditions}};
    header["ghost"] = ghost.name();
    header["breaker"] = breaker.name();
    header["initial_boxes"] = initial_boxes;

    BoxGameState state(cfg, std::move(initial_boxes));
    run.parameters = state.parameters();
    header["lambda"] = run.parameters.lambda;
    header["tau"] = run.parameters.tau;
    header["ell_min"] = run.parameters.ell_min;
    header["guaranteed"] = run.parameters.preconditions_ok;

    auto& events = run.transcript.events;
    run.round_log_potentials.push_back(state.total_log_potential());
    run.max_deficit = state.max_fair_share_deficit();

    auto audit_deficits = [&] {
        std::uint32_t bad = 0;
        for (double d : state.fair_share_deficits()) {
            run.max_deficit = std::max(run.max_deficit, d);
            bad += d > kFairShareTolerance;
        }
        if (bad > 0) {
            run.violations += bad;
            if (run.first_violation_round == 0) run.first_violation_round = state.round();
        }
    };

    while (!state.finished()) {
        const auto additions = ghost.grow(state);
        state.ghost_grow(additions);
        for (const auto& add : additions) {
            if (add.vertices.empty()) continue;
            events.push_back({EventType::GhostGrow, 0, add.box, state.box_size(add.box), add.vertices});
        }
        while (state.phase() == BoxPhase::MakerMove) {
            const auto proposal = state.select_maker_vertex();
            if (!proposal) break;
            events.push_back({EventType::MakerProposal, 0, *proposal, 0, {}});
            GhostDecision decision = ghost.decide(state, *proposal);
            state.resolve_maker_proposal(decision);
            events.push_back({decision.allow ? EventType::MakerClaim : EventType::GhostHaunt, 0, *proposal, 0,
                              std::move(decision.extra_haunts)});
        }
        audit_deficits();
        auto claims = breaker.choose(state);
        state.breaker_claim(claims);
        events.push_back({EventType::BreakerClaim, 0, 0, 0, std::move(claims)});
        audit_deficits();

        const double now = state.total_log_potential();
        if (now > run.round_log_potentials.back() + 1e-9) run.potential_monotone = false;
        run.round_log_potentials.push_back(now);
        ++run.rounds;
    }
    header["rounds"] = run.rounds;
    return run;
}

std::vector<std::vector<VertexId>> random_boxes(std::uint32_t vertex_count, std::uint32_t e,
                                                std::uint32_t max_size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<VertexId> all(vertex_count);
    std::iota(all.begin(), all.end(), 0U);
    std::vector<std::vector<VertexId>> boxes(e);
    const std::uint32_t cap = std::min(max_size, vertex_count);
    std::uniform_int_distribution<std::uint32_t> size(0, cap);
    for (auto& box : boxes) {
        const std::uint32_t k = size(rng);
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::uint32_t> pick(i, vertex_count - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        box.assign(all.begin(), all.begin() + k);
        std::sort(box.begin(), box.end());
    }
    return boxes;
}

}  // namespace spooky
