#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "spooky/breaker_strategies.hpp"
#include "spooky/core_graph.hpp"
#include "spooky/gamma_oracle.hpp"
#include "spooky/spookybox.hpp"
#include "spooky/transcript.hpp"

namespace spooky {

enum class MakerKind : std::uint8_t {
    Potential,  // the degree/neighbourhood box-game meta-strategy
    Random,     // uniformly random unclaimed edge
    Greedy,     // unclaimed edge maximising deg(u) + deg(v) in Maker's graph
};

const char* to_string(MakerKind kind) noexcept;
MakerKind parse_maker_kind(const std::string& name);

struct RealGameParams {
    std::uint32_t n = 0;
    double p = 1.0;
    std::uint32_t b = 1;
    double epsilon = 0.5;
    std::optional<double> delta;       // default 1e-6 eps^2
    std::optional<double> ell_degree;  // default delta p n
    std::optional<double> ell_nbhd;    // default delta p^3 n^2
    bool ell_auto = false;             // ell := max(default, ell_min)
    std::uint64_t seed = 1;
    bool breaker_first = false;
    bool strict = false;
    MakerKind maker = MakerKind::Potential;
};

/// Values derived from RealGameParams once, at game creation.
struct ResolvedParams {
    double delta = 0.0;
    double ell_degree = 0.0;
    double ell_nbhd = 0.0;
    BoxGameConfig degree_config;
    BoxGameConfig nbhd_config;
    PotentialParameters degree_parameters;
    PotentialParameters nbhd_parameters;
    bool theorem_p_ok = false;  // p >= 1e8 eps^-2 n^{-1/2}
    bool theorem_b_ok = false;  // b <= 1e-24 eps^6 / p
    std::vector<std::string> warnings;
};

/// Throws ConfigError with a short message ("p out of range", ...).
void validate(const RealGameParams& params);
ResolvedParams resolve(const RealGameParams& params);

enum class BoxGameTag : std::uint8_t { Degree = 0, Neighbourhood = 1 };

struct BoxGameDiagnostics {
    double max_deficit = -1e300;
    std::uint64_t violations = 0;
    std::int64_t first_violation_turn = -1;
    bool potential_monotone = true;
    double worst_potential_rise = 0.0;  // largest log-potential increase between rounds
    std::uint32_t rounds = 0;
};

struct EngineDiagnostics {
    std::array<BoxGameDiagnostics, 2> games;
    std::uint64_t nbhd_overflow_dropped = 0;
    std::uint64_t feed_over_bias = 0;  // accumulated Breaker set larger than 2b
    std::uint64_t maker_proposals = 0;

    /// Runtime invariant failures that are never acceptable (guaranteed ell or not).
    bool tripped(bool guaranteed) const;
};

struct GameReport {
    std::uint32_t n = 0;
    double p = 0.0;
    std::uint32_t b = 0;
    double epsilon = 0.0;
    std::uint32_t min_maker_degree = 0;
    std::uint32_t max_maker_degree = 0;
    std::vector<std::uint32_t> maker_degree;
    std::vector<std::uint64_t> gamma_nbhd_edges;  // e(G_M[N_Γ(v)])
    std::vector<std::uint64_t> maker_nbhd_edges;  // e(G_M[N_{G_M}(v)])
    std::uint64_t min_gamma_nbhd_edges = 0;
    double eps_hat_degree = 0.0;  // 1 - min degree / (p n)
    double eps_hat_nbhd = 0.0;    // 1 - min e(G_M[N_Γ(v)]) / (p^3 n^2 / 2)
    double max_deficit_degree_game = 0.0;
    double max_deficit_nbhd_game = 0.0;
    std::vector<std::uint32_t> s_sizes;
    double s_threshold = 0.0;  // sqrt(delta) p n
    bool degree_failure = false;  // some Maker degree reached 2pn
    bool s_failure = false;       // some |S(v)| reached 8 sqrt(delta) p n
    std::uint32_t census_maker = 0;
    std::uint32_t census_breaker = 0;
    std::uint32_t census_revealed_out = 0;
    std::uint32_t census_unclaimed = 0;
    bool triangle_free = true;
    bool k4_free_at_v0 = true;
    VertexId v0 = 0;
    std::string transcript_hash;

    nlohmann::json to_json() const;
};

/// The real (1:b) game on E(K_n): ledger, both players' graphs, the lazily
/// revealed Γ and, for the potential Maker, the degree and neighbourhood
/// SpookyBox games she plays privately.
class RealGame {
public:
    explicit RealGame(const RealGameParams& params);

    const RealGameParams& params() const noexcept { return params_; }
    const ResolvedParams& resolved() const noexcept { return resolved_; }
    const ClaimLedger& ledger() const noexcept { return ledger_; }
    const SimpleGraph& maker_graph() const noexcept { return maker_; }
    const SimpleGraph& breaker_graph() const noexcept { return breaker_; }
    const GammaOracle& oracle() const noexcept { return oracle_; }
    const Transcript& transcript() const noexcept { return transcript_; }
    const EngineDiagnostics& diagnostics() const noexcept { return diagnostics_; }
    const BoxGameState* box_game(BoxGameTag tag) const;
    std::optional<EdgeId> last_maker_edge() const noexcept { return last_maker_edge_; }

    std::uint32_t maker_turns() const noexcept { return maker_turns_; }
    std::uint32_t breaker_turns() const noexcept { return breaker_turns_; }
    bool maker_to_move() const noexcept { return maker_to_move_; }
    bool finished() const noexcept { return !ledger_.any_unclaimed(); }

    /// One Maker turn; returns the edge claimed, or nullopt when every
    /// remaining proposal was haunted.
    std::optional<EdgeId> maker_turn();
    /// One Breaker turn; throws StrategyFault on an illegal move.
    std::vector<EdgeId> breaker_turn(BreakerStrategy& strategy);

    /// Feeds outstanding Breaker claims to the box games; call once play ends.
    void close();

    GameReport final_report() const;

private:
    std::optional<EdgeId> potential_turn();
    std::optional<EdgeId> random_turn();
    std::optional<EdgeId> greedy_turn();
    /// Queries Γ for an unclaimed edge and records the outcome in the ledger.
    bool reveal(EdgeId id);
    void claim_for_maker(EdgeId id);
    void feed_breaker(std::size_t g);
    void audit_round(std::size_t g);
    void audit_deficit(std::size_t g);
    std::vector<BoxAddition> neighbourhood_growth();

    RealGameParams params_;
    ResolvedParams resolved_;
    ClaimLedger ledger_;
    SimpleGraph maker_;
    SimpleGraph breaker_;
    GammaOracle oracle_;
    std::array<std::unique_ptr<BoxGameState>, 2> games_;
    std::array<std::vector<EdgeId>, 2> pending_breaker_;
    std::array<std::vector<EdgeId>, 2> pending_dead_;
    std::array<double, 2> last_round_potential_{};
    std::vector<std::vector<EdgeId>> pending_pairs_;  // per neighbourhood box
    std::mt19937_64 maker_rng_;
    Transcript transcript_;
    EngineDiagnostics diagnostics_;
    std::optional<EdgeId> last_maker_edge_;
    std::uint32_t maker_turns_ = 0;
    std::uint32_t breaker_turns_ = 0;
    bool maker_to_move_ = true;
    bool closed_ = false;
};

struct GameResult {
    Transcript transcript;
    GameReport report;
    EngineDiagnostics diagnostics;
    ResolvedParams resolved;
};

/// Plays a full game: turns alternate until no edge is Unclaimed.
GameResult run_game(const RealGameParams& params, BreakerStrategy& strategy);

/// Recomputes the S(v) instrumentation from the transcript's ledger events.
std::vector<std::vector<VertexId>> replay_s_sets(const Transcript& transcript, std::uint32_t n, double threshold);

}  // namespace spooky
