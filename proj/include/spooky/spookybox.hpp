#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spooky/core_graph.hpp"

namespace spooky {

/// Parameters of a SpookyBox game: Maker takes m vertices and Breaker b per
/// round, on `vertex_count` vertices with `e` boxes of size at most M, and
/// fair-share slack `ell`.
struct BoxGameConfig {
    std::uint32_t m = 1;
    std::uint32_t b = 1;
    std::uint32_t vertex_count = 0;
    std::uint32_t e = 0;
    std::uint32_t M = 0;
    double ell = 0.0;
    bool strict_preconditions = false;
};

struct PotentialParameters {
    double lambda = 0.0;
    double tau = 0.0;
    double ell_min = 0.0;
    bool size_bound_ok = false;   // M >= 9(m+b) ln e
    bool slack_bound_ok = false;  // ell >= ell_min
    bool preconditions_ok = false;
    bool degenerate = false;      // e <= 1: lambda = 0, every effect is zero
    bool lambda_capped = false;   // formula gave m lambda > 1/3 (size bound failed)
};

/// lambda = sqrt((m+b) ln e / M) / m and tau = (1 + m lambda)^{1/b} - 1.
/// When the size bound M >= 9(m+b) ln e fails badly enough that m lambda
/// exceeds 1/3, lambda is clamped to 1/(3m).  Throws ConfigError on malformed
/// configs and on failed preconditions when strict_preconditions is set.
PotentialParameters derive_parameters(const BoxGameConfig& cfg);

/// log of (1-lambda)^x (1+tau)^y.
double box_log_potential(std::uint32_t x_count, std::uint32_t y_count, double lambda, double tau);

/// m c / (m+b) - x - ell for a box with c = x + y claimed vertices.
double fair_share_deficit(std::uint32_t x_count, std::uint32_t y_count, std::uint32_t m, std::uint32_t b,
                          double ell);

/// Deficits above this count as a fair-share violation.
inline constexpr double kFairShareTolerance = 1e-9;

enum class Owner : std::uint8_t { Free = 0, Maker = 1, Breaker = 2, Haunted = 3 };
enum class BoxPhase : std::uint8_t { GhostGrow, MakerMove, BreakerMove };

const char* to_string(BoxPhase phase) noexcept;

/// Ghost's answer to a Maker proposal.  Extra haunts may accompany either answer.
struct GhostDecision {
    bool allow = true;
    std::vector<VertexId> extra_haunts;

    static GhostDecision Allow(std::vector<VertexId> extras = {}) { return {true, std::move(extras)}; }
    static GhostDecision Haunt(std::vector<VertexId> extras = {}) { return {false, std::move(extras)}; }
};

struct BoxAddition {
    std::uint32_t box = 0;
    std::vector<VertexId> vertices;
};

namespace detail {

// Max-tree over per-vertex scores; ties go to the lowest index.
class ArgmaxTree {
public:
    static constexpr std::int32_t kNone = -1;

    ArgmaxTree() = default;
    explicit ArgmaxTree(std::uint32_t size);

    void set(std::uint32_t i, double score, bool available);
    void rebuild();
    void assign_no_update(std::uint32_t i, double score, bool available) {
        score_[i] = score;
        available_[i] = available;
    }
    std::int32_t best() const { return node_.empty() ? kNone : node_[1]; }

private:
    std::int32_t pick(std::int32_t a, std::int32_t b) const;
    void refresh(std::uint32_t node);

    std::uint32_t leaves_ = 0;
    std::vector<std::int32_t> node_;
    std::vector<double> score_;
    std::vector<std::uint8_t> available_;
};

}  // namespace detail

/// A SpookyBox position under the (lambda, tau)-potential strategy.
///
/// Box potentials are cached in the log domain.  Per-vertex effects are kept
/// in an argmax tree and refreshed lazily: a change to a box marks its
/// members dirty, and selection flushes the dirty set first.
class BoxGameState {
public:
    BoxGameState(const BoxGameConfig& cfg, std::vector<std::vector<VertexId>> initial_boxes);

    const BoxGameConfig& config() const noexcept { return cfg_; }
    const PotentialParameters& parameters() const noexcept { return params_; }
    BoxPhase phase() const noexcept { return phase_; }
    std::uint32_t round() const noexcept { return round_; }

    std::uint32_t box_count() const noexcept { return static_cast<std::uint32_t>(boxes_.size()); }
    std::span<const VertexId> box(std::uint32_t s) const { return boxes_.at(s); }
    std::span<const std::uint32_t> incidence(VertexId v) const { return incidence_.at(v); }
    std::uint32_t x_count(std::uint32_t s) const { return x_count_.at(s); }
    std::uint32_t y_count(std::uint32_t s) const { return y_count_.at(s); }
    std::uint32_t box_size(std::uint32_t s) const {
        return static_cast<std::uint32_t>(boxes_.at(s).size());
    }

    Owner owner(VertexId v) const { return owner_.at(v); }
    bool is_free(VertexId v) const { return owner_.at(v) == Owner::Free; }
    std::uint32_t free_count() const noexcept { return free_count_; }
    bool finished() const noexcept { return free_count_ == 0; }

    double box_log_potential(std::uint32_t s) const { return log_potential_.at(s); }
    /// log of the total potential, summed with max-shift.
    double total_log_potential() const;
    /// Effect of claiming v for Maker; v must be free.
    double maker_effect(VertexId v) const;
    double log_maker_effect(VertexId v) const;

    /// Ghost enlarges boxes with free vertices; moves GhostGrow -> MakerMove.
    void ghost_grow(const std::vector<BoxAddition>& additions);

    /// Argmax of the effect over free vertices, lowest index on ties.  Records
    /// the proposal.  With no free vertex left the Maker step ends and nullopt
    /// is returned.
    std::optional<VertexId> select_maker_vertex();
    std::optional<VertexId> pending_proposal() const noexcept { return pending_; }

    void resolve_maker_proposal(const GhostDecision& decision);

    /// Breaker claims up to b free vertices; closes the round.  Also accepted
    /// once before the first Maker step (an opening move).
    void breaker_claim(std::span<const VertexId> vertices);
    bool opening_move_allowed() const noexcept {
        return phase_ == BoxPhase::GhostGrow && round_ == 1 && !maker_has_moved_ && !opening_done_;
    }
    std::uint32_t maker_claims_this_round() const noexcept { return claims_this_round_; }

    std::vector<double> fair_share_deficits() const;
    double max_fair_share_deficit() const;

    /// Recounts x/y per box from owners and compares with the cached counters
    /// and log-potentials.
    bool counters_consistent() const;

private:
    void check_vertex(VertexId v) const;
    void haunt(VertexId v);
    void take(VertexId v, Owner who);
    void refresh_box(std::uint32_t s);
    void mark_dirty(VertexId v);
    void flush_dirty();
    void end_maker_step();

    BoxGameConfig cfg_;
    PotentialParameters params_;
    double log1m_lambda_ = 0.0;
    double log1p_tau_ = 0.0;
    double log_lambda_ = 0.0;

    std::vector<std::vector<VertexId>> boxes_;
    std::vector<std::vector<std::uint32_t>> incidence_;
    std::vector<std::uint32_t> x_count_;
    std::vector<std::uint32_t> y_count_;
    std::vector<double> log_potential_;
    std::vector<Owner> owner_;
    std::uint32_t free_count_ = 0;

    detail::ArgmaxTree tree_;
    std::vector<std::uint8_t> dirty_flag_;
    std::vector<VertexId> dirty_;

    BoxPhase phase_ = BoxPhase::GhostGrow;
    std::uint32_t round_ = 1;
    std::uint32_t claims_this_round_ = 0;
    bool maker_has_moved_ = false;
    bool opening_done_ = false;
    std::optional<VertexId> pending_;
};

}  // namespace spooky
