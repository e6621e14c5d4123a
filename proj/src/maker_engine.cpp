#include "spooky/maker_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spooky/analysis.hpp"

namespace spooky {

namespace {

constexpr std::uint64_t kMakerStream = 0x6d616b6572ULL;

nlohmann::json box_config_json(const BoxGameConfig& cfg, const PotentialParameters& pp) {
    return {{"m", cfg.m},
            {"b", cfg.b},
            {"vertex_count", cfg.vertex_count},
            {"e", cfg.e},
            {"M", cfg.M},
            {"ell", cfg.ell},
            {"lambda", pp.lambda},
            {"tau", pp.tau},
            {"ell_min", pp.ell_min},
            {"lambda_capped", pp.lambda_capped},
            {"guaranteed", pp.preconditions_ok}};
}

double nan_if_unset(double v) {
    return v < -1e299 ? std::numeric_limits<double>::quiet_NaN() : v;
}

}  // namespace

const char* to_string(MakerKind kind) noexcept {
    switch (kind) {
        case MakerKind::Potential: return "potential";
        case MakerKind::Random: return "random";
        case MakerKind::Greedy: return "greedy";
    }
    return "?";
}

MakerKind parse_maker_kind(const std::string& name) {
    if (name == "potential") return MakerKind::Potential;
    if (name == "random") return MakerKind::Random;
    if (name == "greedy") return MakerKind::Greedy;
    throw ConfigError("unknown maker strategy '" + name + "'");
}

void validate(const RealGameParams& params) {
    if (params.n < 2 || params.n > 65535) throw ConfigError("n out of range");
    if (!(params.p > 0.0 && params.p <= 1.0)) throw ConfigError("p out of range");
    if (params.b == 0) throw ConfigError("b must be positive");
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) throw ConfigError("eps out of range");
    if (params.delta && !(*params.delta > 0.0)) throw ConfigError("delta must be positive");
    if (params.ell_degree && !(*params.ell_degree >= 0.0)) throw ConfigError("ell_degree must be non-negative");
    if (params.ell_nbhd && !(*params.ell_nbhd >= 0.0)) throw ConfigError("ell_nbhd must be non-negative");
}

ResolvedParams resolve(const RealGameParams& params) {
    validate(params);
    ResolvedParams r;
    const double n = params.n;
    const double p = params.p;
    const double eps = params.epsilon;
    r.delta = params.delta.value_or(1e-6 * eps * eps);
    r.ell_degree = params.ell_degree.value_or(r.delta * p * n);
    r.ell_nbhd = params.ell_nbhd.value_or(r.delta * p * p * p * n * n);

    const auto vertices = static_cast<std::uint32_t>(pair_count(params.n));
    r.degree_config = {1, 2 * params.b, vertices, params.n, params.n, r.ell_degree, false};
    const auto nbhd_cap = static_cast<std::uint32_t>(std::max(1.0, std::ceil(p * p * n * n - 1e-9)));
    r.nbhd_config = {1, 2 * params.b, vertices, params.n, nbhd_cap, r.ell_nbhd, false};

    r.degree_parameters = derive_parameters(r.degree_config);
    r.nbhd_parameters = derive_parameters(r.nbhd_config);
    if (params.ell_auto) {
        r.ell_degree = r.degree_config.ell = std::max(r.ell_degree, r.degree_parameters.ell_min);
        r.ell_nbhd = r.nbhd_config.ell = std::max(r.ell_nbhd, r.nbhd_parameters.ell_min);
        r.degree_parameters = derive_parameters(r.degree_config);
        r.nbhd_parameters = derive_parameters(r.nbhd_config);
    }

    r.theorem_p_ok = p >= 1e8 / (eps * eps) / std::sqrt(n);
    r.theorem_b_ok = params.b <= 1e-24 * std::pow(eps, 6) / p;
    if (!r.theorem_p_ok) r.warnings.emplace_back("p below the theorem's 1e8 eps^-2 n^-1/2");
    if (!r.theorem_b_ok) r.warnings.emplace_back("b above the theorem's 1e-24 eps^6 / p");

    auto check = [&](const char* label, const BoxGameConfig& cfg, const PotentialParameters& pp) {
        if (!pp.size_bound_ok) {
            r.warnings.push_back(std::string(label) + ": M = " + std::to_string(cfg.M) +
                                 " below 9(m+b) ln e (unguaranteed)");
        }
        if (!pp.slack_bound_ok) {
            r.warnings.push_back(std::string(label) + ": ell = " + std::to_string(cfg.ell) + " below ell_min = " +
                                 std::to_string(pp.ell_min) + " (unguaranteed)");
        }
        if (params.strict && params.maker == MakerKind::Potential && !pp.preconditions_ok) {
            throw ConfigError(std::string(label) + ": box-game preconditions fail in strict mode");
        }
    };
    check("degree game", r.degree_config, r.degree_parameters);
    check("neighbourhood game", r.nbhd_config, r.nbhd_parameters);
    return r;
}

bool EngineDiagnostics::tripped(bool guaranteed) const {
    if (feed_over_bias > 0) return true;
    for (const auto& g : games) {
        if (!g.potential_monotone) return true;
        if (guaranteed && g.violations > 0) return true;
    }
    return false;
}

RealGame::RealGame(const RealGameParams& params)
    : params_(params),
      resolved_(resolve(params)),
      ledger_(params.n),
      maker_(params.n),
      breaker_(params.n),
      oracle_(params.n, params.p, params.seed),
      maker_rng_(mix64(params.seed, kMakerStream)),
      maker_to_move_(!params.breaker_first) {
    const std::uint32_t n = params.n;
    if (params.maker == MakerKind::Potential) {
        // Degree boxes N_{K_n}(v) never change; neighbourhood boxes start empty.
        std::vector<std::vector<VertexId>> degree_boxes(n);
        for (VertexId v = 0; v < n; ++v) {
            degree_boxes[v].reserve(n - 1);
            for (VertexId u = 0; u < n; ++u) {
                if (u != v) degree_boxes[v].push_back(edge_index(u, v, n));
            }
            std::sort(degree_boxes[v].begin(), degree_boxes[v].end());
        }
        games_[0] = std::make_unique<BoxGameState>(resolved_.degree_config, std::move(degree_boxes));
        games_[1] = std::make_unique<BoxGameState>(resolved_.nbhd_config, std::vector<std::vector<VertexId>>(n));
        pending_pairs_.resize(n);
        for (std::size_t g = 0; g < 2; ++g) last_round_potential_[g] = games_[g]->total_log_potential();
    }

    transcript_.kind = "real";
    auto& h = transcript_.header;
    h["code_version"] = kCodeVersion;
    h["params"] = {{"n", params.n},
                   {"p", params.p},
                   {"b", params.b},
                   {"epsilon", params.epsilon},
                   {"delta", resolved_.delta},
                   {"ell_degree", resolved_.ell_degree},
                   {"ell_nbhd", resolved_.ell_nbhd},
                   {"ell_auto", params.ell_auto},
                   {"seed", params.seed},
                   {"breaker_first", params.breaker_first},
                   {"strict", params.strict},
                   {"maker", to_string(params.maker)}};
    h["degree_game"] = box_config_json(resolved_.degree_config, resolved_.degree_parameters);
    h["nbhd_game"] = box_config_json(resolved_.nbhd_config, resolved_.nbhd_parameters);
    h["theorem_hypotheses"] = {{"p_ok", resolved_.theorem_p_ok}, {"b_ok", resolved_.theorem_b_ok}};
    h["warnings"] = resolved_.warnings;
}

const BoxGameState* RealGame::box_game(BoxGameTag tag) const { return games_[static_cast<std::size_t>(tag)].get(); }

bool RealGame::reveal(EdgeId id) {
    if (oracle_.query(id) == GammaStatus::InGamma) return true;
    ledger_.assign(id, EdgeStatus::RevealedOut);
    transcript_.events.push_back({EventType::RealRevealedOut, -1, id, 0, {}});
    return false;
}

void RealGame::claim_for_maker(EdgeId id) {
    ledger_.assign(id, EdgeStatus::Maker);
    const auto [u, v] = endpoints(id, params_.n);
    if (!pending_pairs_.empty()) {
        for (VertexId w : maker_.neighbours(u)) pending_pairs_[u].push_back(edge_index(v, w, params_.n));
        for (VertexId w : maker_.neighbours(v)) pending_pairs_[v].push_back(edge_index(u, w, params_.n));
    }
    maker_.add_edge(u, v);
    transcript_.events.push_back({EventType::RealMakerClaim, -1, id, 0, {}});
}

std::optional<EdgeId> RealGame::maker_turn() {
    if (!maker_to_move_) throw InvariantViolation("maker_turn: it is Breaker's turn");
    if (closed_) throw InvariantViolation("maker_turn: game already closed");
    ++maker_turns_;
    transcript_.events.push_back({EventType::MakerTurn, -1, maker_turns_, 0, {}});
    std::optional<EdgeId> claimed;
    switch (params_.maker) {
        case MakerKind::Potential: claimed = potential_turn(); break;
        case MakerKind::Random: claimed = random_turn(); break;
        case MakerKind::Greedy: claimed = greedy_turn(); break;
    }
    last_maker_edge_ = claimed;
    maker_to_move_ = false;
    return claimed;
}

void RealGame::audit_deficit(std::size_t g) {
    auto& diag = diagnostics_.games[g];
    const auto& game = *games_[g];
    const double worst = game.max_fair_share_deficit();
    diag.max_deficit = std::max(diag.max_deficit, worst);
    if (worst > kFairShareTolerance) {
        for (double d : game.fair_share_deficits()) diag.violations += d > kFairShareTolerance;
        if (diag.first_violation_turn < 0) diag.first_violation_turn = maker_turns_;
    }
}

void RealGame::audit_round(std::size_t g) {
    auto& diag = diagnostics_.games[g];
    const double now = games_[g]->total_log_potential();
    const double rise = now - last_round_potential_[g];
    diag.worst_potential_rise = std::max(diag.worst_potential_rise, rise);
    if (rise > std::log1p(1e-9)) diag.potential_monotone = false;
    last_round_potential_[g] = now;
    ++diag.rounds;
}

void RealGame::feed_breaker(std::size_t g) {
    auto& game = *games_[g];
    auto& pending = pending_breaker_[g];
    const std::uint32_t bias = game.config().b;
    const bool closing = game.phase() == BoxPhase::BreakerMove;
    const bool opening = !closing && game.opening_move_allowed() && !pending.empty();
    if (!closing && !opening) return;

    std::vector<EdgeId> move;
    if (pending.size() > bias) {
        // Never expected: flag it, feed the bias-sized prefix, carry the rest.
        ++diagnostics_.feed_over_bias;
        move.assign(pending.begin(), pending.begin() + bias);
        pending.erase(pending.begin(), pending.begin() + bias);
    } else {
        move = std::move(pending);
        pending.clear();
    }
    game.breaker_claim(move);
    transcript_.events.push_back({EventType::BreakerClaim, static_cast<std::int32_t>(g), 0, 0, std::move(move)});
    if (closing) {
        audit_round(g);
    } else {
        last_round_potential_[g] = game.total_log_potential();
    }
    audit_deficit(g);
}

std::vector<BoxAddition> RealGame::neighbourhood_growth() {
    std::vector<BoxAddition> out;
    const std::uint32_t cap = resolved_.nbhd_config.M;
    const auto& game = *games_[1];
    for (VertexId v = 0; v < params_.n; ++v) {
        auto& pairs = pending_pairs_[v];
        if (pairs.empty()) continue;
        std::vector<VertexId> add;
        for (EdgeId id : pairs) {
            if (ledger_.is_unclaimed(id)) add.push_back(id);
        }
        pairs.clear();
        std::sort(add.begin(), add.end());
        const std::uint32_t room = cap - game.box_size(v);
        if (add.size() > room) {
            diagnostics_.nbhd_overflow_dropped += add.size() - room;
            add.resize(room);
        }
        if (!add.empty()) out.push_back({v, std::move(add)});
    }
    return out;
}

std::optional<EdgeId> RealGame::potential_turn() {
    const std::size_t g = maker_turns_ % 2 == 1 ? 0 : 1;
    const std::size_t other = 1 - g;
    auto& game = *games_[g];
    const auto tag = static_cast<std::int32_t>(g);

    feed_breaker(g);
    const auto additions = g == 1 ? neighbourhood_growth() : std::vector<BoxAddition>{};
    game.ghost_grow(additions);
    for (const auto& add : additions) {
        transcript_.events.push_back({EventType::GhostGrow, tag, add.box, game.box_size(add.box), add.vertices});
    }

    // Edges the other game already settled (claimed by Maker or revealed out)
    // are haunted here alongside the first proposal.
    std::vector<EdgeId> dead;
    for (EdgeId id : pending_dead_[g]) {
        if (game.is_free(id)) dead.push_back(id);
    }
    pending_dead_[g].clear();

    std::optional<EdgeId> claimed;
    bool first = true;
    while (game.phase() == BoxPhase::MakerMove) {
        const auto proposal = game.select_maker_vertex();
        if (!proposal) break;
        const EdgeId id = *proposal;
        ++diagnostics_.maker_proposals;
        transcript_.events.push_back({EventType::MakerProposal, tag, id, 0, {}});

        std::vector<EdgeId> extras;
        if (first) {
            for (EdgeId d : dead) {
                if (d != id) extras.push_back(d);
            }
            first = false;
        }
        const EdgeStatus status = ledger_.status(id);
        if (status == EdgeStatus::Breaker) {
            throw InvariantViolation("potential Maker proposed Breaker edge " + std::to_string(id));
        }
        const bool allow = status == EdgeStatus::Unclaimed && oracle_.query(id) == GammaStatus::InGamma;
        game.resolve_maker_proposal(allow ? GhostDecision::Allow(extras) : GhostDecision::Haunt(extras));
        transcript_.events.push_back(
            {allow ? EventType::MakerClaim : EventType::GhostHaunt, tag, id, 0, std::move(extras)});
        if (allow) {
            claim_for_maker(id);
            pending_dead_[other].push_back(id);
            claimed = id;
        } else if (status == EdgeStatus::Unclaimed) {
            ledger_.assign(id, EdgeStatus::RevealedOut);
            transcript_.events.push_back({EventType::RealRevealedOut, -1, id, 0, {}});
            pending_dead_[other].push_back(id);
        }
    }
    audit_deficit(g);
    return claimed;
}

std::optional<EdgeId> RealGame::random_turn() {
    const std::uint32_t total = ledger_.size();
    while (ledger_.any_unclaimed()) {
        EdgeId pick = 0;
        if (static_cast<std::uint64_t>(ledger_.count(EdgeStatus::Unclaimed)) * 8 >= total) {
            std::uniform_int_distribution<EdgeId> dist(0, total - 1);
            do {
                pick = dist(maker_rng_);
            } while (!ledger_.is_unclaimed(pick));
        } else {
            std::vector<EdgeId> pool;
            for (EdgeId id = 0; id < total; ++id) {
                if (ledger_.is_unclaimed(id)) pool.push_back(id);
            }
            std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
            pick = pool[dist(maker_rng_)];
        }
        if (reveal(pick)) {
            claim_for_maker(pick);
            return pick;
        }
    }
    return std::nullopt;
}

std::optional<EdgeId> RealGame::greedy_turn() {
    while (ledger_.any_unclaimed()) {
        EdgeId best = 0;
        std::int64_t best_score = -1;
        for (EdgeId id = 0; id < ledger_.size(); ++id) {
            if (!ledger_.is_unclaimed(id)) continue;
            const auto [u, v] = endpoints(id, params_.n);
            const std::int64_t score = maker_.degree(u) + maker_.degree(v);
            if (score > best_score) {
                best_score = score;
                best = id;
            }
        }
        if (reveal(best)) {
            claim_for_maker(best);
            return best;
        }
    }
    return std::nullopt;
}

std::vector<EdgeId> RealGame::breaker_turn(BreakerStrategy& strategy) {
    if (maker_to_move_) throw InvariantViolation("breaker_turn: it is Maker's turn");
    if (closed_) throw InvariantViolation("breaker_turn: game already closed");
    if (!transcript_.header.contains("breaker")) {
        transcript_.header["breaker"] = {{"name", strategy.name()}, {"params", strategy.parameters()}};
    }
    const BreakerView view{ledger_, maker_, breaker_, params_.n, params_.b, last_maker_edge_, breaker_turns_ + 1};
    std::vector<EdgeId> move = strategy.choose(view);
    if (move.size() > params_.b) {
        throw StrategyFault(strategy.name() + ": " + std::to_string(move.size()) + " edges exceed bias " +
                            std::to_string(params_.b));
    }
    for (std::size_t i = 0; i < move.size(); ++i) {
        const EdgeId id = move[i];
        if (id >= ledger_.size()) throw StrategyFault(strategy.name() + ": edge " + std::to_string(id) + " out of range");
        if (std::find(move.begin(), move.begin() + static_cast<std::ptrdiff_t>(i), id) !=
            move.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw StrategyFault(strategy.name() + ": edge " + std::to_string(id) + " claimed twice");
        }
        if (!ledger_.is_unclaimed(id)) {
            throw StrategyFault(strategy.name() + ": edge " + std::to_string(id) + " is " +
                                to_string(ledger_.status(id)) + ", not Unclaimed");
        }
    }
    for (EdgeId id : move) {
        ledger_.assign(id, EdgeStatus::Breaker);
        const auto [u, v] = endpoints(id, params_.n);
        breaker_.add_edge(u, v);
        if (games_[0]) {
            pending_breaker_[0].push_back(id);
            pending_breaker_[1].push_back(id);
        }
    }
    ++breaker_turns_;
    transcript_.events.push_back({EventType::RealBreakerClaim, -1, 0, 0, move});
    maker_to_move_ = true;
    return move;
}

void RealGame::close() {
    if (closed_) return;
    closed_ = true;
    if (!games_[0]) return;
    for (std::size_t g = 0; g < 2; ++g) feed_breaker(g);
    transcript_.header["diagnostics"] = {{"nbhd_overflow_dropped", diagnostics_.nbhd_overflow_dropped},
                                         {"feed_over_bias", diagnostics_.feed_over_bias}};
}

std::vector<std::vector<VertexId>> replay_s_sets(const Transcript& transcript, std::uint32_t n, double threshold) {
    SimpleGraph gm(n);
    SimpleGraph gb(n);
    std::vector<std::vector<VertexId>> s(n);
    for (const Event& e : transcript.events) {
        if (e.type == EventType::RealMakerClaim) {
            const auto [u, v] = endpoints(e.value, n);
            // u joins S(v) when N_{G^m}(v) already holds many Breaker edges at u.
            auto crowded = [&](VertexId centre, VertexId other) {
                std::uint32_t count = 0;
                const auto nb = gb.neighbours(other);
                for (VertexId w : gm.neighbours(centre)) count += std::binary_search(nb.begin(), nb.end(), w);
                return static_cast<double>(count) >= threshold;
            };
            if (crowded(v, u)) s[v].push_back(u);
            if (crowded(u, v)) s[u].push_back(v);
            gm.add_edge(u, v);
        } else if (e.type == EventType::RealBreakerClaim) {
            for (EdgeId id : e.list) {
                const auto [u, v] = endpoints(id, n);
                gb.add_edge(u, v);
            }
        }
    }
    return s;
}

GameReport RealGame::final_report() const {
    GameReport r;
    const std::uint32_t n = params_.n;
    const double p = params_.p;
    r.n = n;
    r.p = p;
    r.b = params_.b;
    r.epsilon = params_.epsilon;
    r.maker_degree.resize(n);
    r.gamma_nbhd_edges.resize(n);
    r.maker_nbhd_edges.resize(n);
    r.min_maker_degree = std::numeric_limits<std::uint32_t>::max();
    r.min_gamma_nbhd_edges = std::numeric_limits<std::uint64_t>::max();
    for (VertexId v = 0; v < n; ++v) {
        r.maker_degree[v] = maker_.degree(v);
        r.min_maker_degree = std::min(r.min_maker_degree, r.maker_degree[v]);
        r.max_maker_degree = std::max(r.max_maker_degree, r.maker_degree[v]);
        std::vector<VertexId> gamma_nbhd;
        for (VertexId u = 0; u < n; ++u) {
            if (u != v && oracle_.member(edge_index(u, v, n))) gamma_nbhd.push_back(u);
        }
        r.gamma_nbhd_edges[v] = maker_.induced_edge_count(gamma_nbhd);
        r.maker_nbhd_edges[v] = maker_.induced_edge_count(maker_.neighbours(v));
        r.min_gamma_nbhd_edges = std::min(r.min_gamma_nbhd_edges, r.gamma_nbhd_edges[v]);
    }
    r.eps_hat_degree = 1.0 - r.min_maker_degree / (p * n);
    r.eps_hat_nbhd = 1.0 - static_cast<double>(r.min_gamma_nbhd_edges) / (p * p * p * n * n / 2.0);
    if (games_[0]) {
        r.max_deficit_degree_game = nan_if_unset(diagnostics_.games[0].max_deficit);
        r.max_deficit_nbhd_game = nan_if_unset(diagnostics_.games[1].max_deficit);
    } else {
        r.max_deficit_degree_game = r.max_deficit_nbhd_game = std::numeric_limits<double>::quiet_NaN();
    }

    const double sqrt_delta = std::sqrt(resolved_.delta);
    r.s_threshold = sqrt_delta * p * n;
    const auto s = replay_s_sets(transcript_, n, r.s_threshold);
    r.s_sizes.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        r.s_sizes[v] = static_cast<std::uint32_t>(s[v].size());
        if (r.s_sizes[v] >= 8.0 * sqrt_delta * p * n) r.s_failure = true;
    }
    r.degree_failure = r.max_maker_degree >= 2.0 * p * n;

    r.census_maker = ledger_.count(EdgeStatus::Maker);
    r.census_breaker = ledger_.count(EdgeStatus::Breaker);
    r.census_revealed_out = ledger_.count(EdgeStatus::RevealedOut);
    r.census_unclaimed = ledger_.count(EdgeStatus::Unclaimed);

    if (auto it = transcript_.header.find("breaker"); it != transcript_.header.end()) {
        const auto& bp = (*it)["params"];
        if (bp.contains("v0")) r.v0 = bp["v0"].get<VertexId>();
        if (bp.contains("target")) r.v0 = bp["target"].get<VertexId>();
    }
    r.triangle_free = !triangle_witness(maker_).has_value();
    r.k4_free_at_v0 = !k4_witness_at(maker_, r.v0).has_value();
    r.transcript_hash = hex16(transcript_.hash());
    return r;
}

nlohmann::json GameReport::to_json() const {
    return {{"n", n},
            {"p", p},
            {"b", b},
            {"epsilon", epsilon},
            {"min_maker_degree", min_maker_degree},
            {"max_maker_degree", max_maker_degree},
            {"min_gamma_nbhd_edges", min_gamma_nbhd_edges},
            {"eps_hat_degree", eps_hat_degree},
            {"eps_hat_nbhd", eps_hat_nbhd},
            {"max_deficit_degree_game", max_deficit_degree_game},
            {"max_deficit_nbhd_game", max_deficit_nbhd_game},
            {"s_threshold", s_threshold},
            {"degree_failure", degree_failure},
            {"s_failure", s_failure},
            {"census",
             {{"maker", census_maker},
              {"breaker", census_breaker},
              {"revealed_out", census_revealed_out},
              {"unclaimed", census_unclaimed}}},
            {"triangle_free", triangle_free},
            {"k4_free_at_v0", k4_free_at_v0},
            {"v0", v0},
            {"transcript_hash", transcript_hash},
            {"maker_degree", maker_degree},
            {"gamma_nbhd_edges", gamma_nbhd_edges},
            {"maker_nbhd_edges", maker_nbhd_edges},
            {"s_sizes", s_sizes}};
}

GameResult run_game(const RealGameParams& params, BreakerStrategy& strategy) {
    RealGame game(params);
    if (params.breaker_first && !game.finished()) game.breaker_turn(strategy);
    std::uint32_t idle_rounds = 0;
    while (!game.finished()) {
        const std::uint32_t before = game.ledger().count(EdgeStatus::Unclaimed);
        game.maker_turn();
        if (game.finished()) break;
        game.breaker_turn(strategy);
        idle_rounds = game.ledger().count(EdgeStatus::Unclaimed) == before ? idle_rounds + 1 : 0;
        if (idle_rounds > 2) throw InvariantViolation("run_game: no progress for three rounds");
    }
    game.close();
    return {game.transcript(), game.final_report(), game.diagnostics(), game.resolved()};
}

}  // namespace spooky
