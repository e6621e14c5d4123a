#include "spooky/spookybox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spooky/log_sum_exp.hpp"

namespace spooky {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string vertex_str(VertexId v) { return "vertex " + std::to_string(v); }

}  // namespace

PotentialParameters derive_parameters(const BoxGameConfig& cfg) {
    if (cfg.m == 0) throw ConfigError("box game: m must be positive");
    if (cfg.b == 0) throw ConfigError("box game: b must be positive");
    if (cfg.M == 0) throw ConfigError("box game: M must be positive");
    if (!(cfg.ell >= 0.0)) throw ConfigError("box game: ell must be non-negative");

    const double m = cfg.m;
    const double b = cfg.b;
    const double M = cfg.M;
    PotentialParameters out;
    out.degenerate = cfg.e <= 1;
    const double log_e = out.degenerate ? 0.0 : std::log(static_cast<double>(cfg.e));

    out.lambda = std::sqrt((m + b) * log_e / M) / m;
    // m lambda <= 1/3 whenever the size bound holds; beyond it the formula can
    // reach 1 and the potential stops being defined, so clamp there.
    if (m * out.lambda > 1.0 / 3.0) {
        out.lambda = 1.0 / (3.0 * m);
        out.lambda_capped = true;
    }
    // Unique positive root of (1+tau)^b = 1 + m lambda.
    out.tau = std::expm1(std::log1p(m * out.lambda) / b);
    out.ell_min = (5.0 * m * b / (m + b)) * std::sqrt(M * log_e / (m + b));
    out.size_bound_ok = M >= 9.0 * (m + b) * log_e;
    out.slack_bound_ok = cfg.ell >= out.ell_min;
    out.preconditions_ok = out.size_bound_ok && out.slack_bound_ok;

    if (cfg.strict_preconditions && !out.preconditions_ok) {
        throw ConfigError("box game: preconditions fail (need M >= " + std::to_string(9.0 * (m + b) * log_e) +
                          " and ell >= " + std::to_string(out.ell_min) + ")");
    }
    return out;
}

double box_log_potential(std::uint32_t x_count, std::uint32_t y_count, double lambda, double tau) {
    double out = 0.0;
    if (x_count > 0) out += x_count * std::log1p(-lambda);
    if (y_count > 0) out += y_count * std::log1p(tau);
    return out;
}

double fair_share_deficit(std::uint32_t x_count, std::uint32_t y_count, std::uint32_t m, std::uint32_t b,
                          double ell) {
    const double c = static_cast<double>(x_count) + static_cast<double>(y_count);
    return static_cast<double>(m) * c / static_cast<double>(m + b) - static_cast<double>(x_count) - ell;
}

const char* to_string(BoxPhase phase) noexcept {
    switch (phase) {
        case BoxPhase::GhostGrow: return "GhostGrow";
        case BoxPhase::MakerMove: return "MakerMove";
        case BoxPhase::BreakerMove: return "BreakerMove";
    }
    return "?";
}

namespace detail {

ArgmaxTree::ArgmaxTree(std::uint32_t size) : score_(size, kNegInf), available_(size, 0) {
    leaves_ = 1;
    while (leaves_ < size) leaves_ <<= 1;
    node_.assign(2 * static_cast<std::size_t>(leaves_), kNone);
}

std::int32_t ArgmaxTree::pick(std::int32_t a, std::int32_t b) const {
    if (a == kNone) return b;
    if (b == kNone) return a;
    return score_[b] > score_[a] ? b : a;
}

void ArgmaxTree::refresh(std::uint32_t node) {
    node_[node] = pick(node_[2 * node], node_[2 * node + 1]);
}

void ArgmaxTree::set(std::uint32_t i, double score, bool available) {
    score_[i] = score;
    available_[i] = available;
    std::uint32_t node = leaves_ + i;
    node_[node] = available ? static_cast<std::int32_t>(i) : kNone;
    for (node >>= 1; node >= 1; node >>= 1) refresh(node);
}

void ArgmaxTree::rebuild() {
    for (std::uint32_t i = 0; i < leaves_; ++i) {
        node_[leaves_ + i] = (i < score_.size() && available_[i]) ? static_cast<std::int32_t>(i) : kNone;
    }
    for (std::uint32_t node = leaves_ - 1; node >= 1; --node) refresh(node);
}

}  // namespace detail

BoxGameState::BoxGameState(const BoxGameConfig& cfg, std::vector<std::vector<VertexId>> initial_boxes)
    : cfg_(cfg), params_(derive_parameters(cfg)), boxes_(std::move(initial_boxes)) {
    if (boxes_.size() != cfg_.e) {
        throw ConfigError("box game: expected " + std::to_string(cfg_.e) + " boxes, got " +
                          std::to_string(boxes_.size()));
    }
    log1m_lambda_ = std::log1p(-params_.lambda);
    log1p_tau_ = std::log1p(params_.tau);
    log_lambda_ = params_.lambda > 0.0 ? std::log(params_.lambda) : kNegInf;

    const std::uint32_t nv = cfg_.vertex_count;
    incidence_.resize(nv);
    for (std::uint32_t s = 0; s < boxes_.size(); ++s) {
        if (boxes_[s].size() > cfg_.M) {
            throw ConfigError("box game: initial box " + std::to_string(s) + " exceeds M");
        }
        for (VertexId v : boxes_[s]) {
            if (v >= nv) throw ConfigError("box game: initial box " + std::to_string(s) + " has bad " + vertex_str(v));
            if (!incidence_[v].empty() && incidence_[v].back() == s) {
                throw ConfigError("box game: initial box " + std::to_string(s) + " repeats " + vertex_str(v));
            }
            incidence_[v].push_back(s);
        }
    }
    x_count_.assign(boxes_.size(), 0);
    y_count_.assign(boxes_.size(), 0);
    log_potential_.assign(boxes_.size(), 0.0);
    owner_.assign(nv, Owner::Free);
    free_count_ = nv;

    tree_ = detail::ArgmaxTree(nv);
    for (VertexId v = 0; v < nv; ++v) tree_.assign_no_update(v, log_maker_effect(v), true);
    tree_.rebuild();
    dirty_flag_.assign(nv, 0);
}

void BoxGameState::check_vertex(VertexId v) const {
    if (v >= owner_.size()) throw ProtocolViolation("box game: " + vertex_str(v) + " out of range");
}

double BoxGameState::total_log_potential() const { return log_sum_exp(log_potential_); }

double BoxGameState::log_maker_effect(VertexId v) const {
    const auto& inc = incidence_.at(v);
    if (inc.empty() || !std::isfinite(log_lambda_)) return kNegInf;
    double hi = kNegInf;
    for (std::uint32_t s : inc) hi = std::max(hi, log_potential_[s]);
    double sum = 0.0;
    for (std::uint32_t s : inc) sum += std::exp(log_potential_[s] - hi);
    return log_lambda_ + hi + std::log(sum);
}

double BoxGameState::maker_effect(VertexId v) const {
    check_vertex(v);
    if (owner_[v] != Owner::Free) {
        throw InvalidArgument("maker_effect: " + vertex_str(v) + " is claimed or haunted");
    }
    return std::exp(log_maker_effect(v));
}

void BoxGameState::mark_dirty(VertexId v) {
    if (owner_[v] == Owner::Free && !dirty_flag_[v]) {
        dirty_flag_[v] = 1;
        dirty_.push_back(v);
    }
}

void BoxGameState::flush_dirty() {
    if (dirty_.empty()) return;
    const bool bulk = dirty_.size() * 8 > owner_.size();
    for (VertexId v : dirty_) {
        dirty_flag_[v] = 0;
        const bool available = owner_[v] == Owner::Free;
        const double score = available ? log_maker_effect(v) : kNegInf;
        if (bulk) {
            tree_.assign_no_update(v, score, available);
        } else {
            tree_.set(v, score, available);
        }
    }
    if (bulk) tree_.rebuild();
    dirty_.clear();
}

void BoxGameState::refresh_box(std::uint32_t s) {
    log_potential_[s] = x_count_[s] * log1m_lambda_ + y_count_[s] * log1p_tau_;
    for (VertexId u : boxes_[s]) mark_dirty(u);
}

void BoxGameState::take(VertexId v, Owner who) {
    owner_[v] = who;
    --free_count_;
    tree_.set(v, kNegInf, false);
    for (std::uint32_t s : incidence_[v]) {
        if (who == Owner::Maker) {
            ++x_count_[s];
        } else {
            ++y_count_[s];
        }
        refresh_box(s);
    }
}

void BoxGameState::haunt(VertexId v) {
    owner_[v] = Owner::Haunted;
    --free_count_;
    tree_.set(v, kNegInf, false);
}

void BoxGameState::ghost_grow(const std::vector<BoxAddition>& additions) {
    if (phase_ != BoxPhase::GhostGrow) {
        throw ProtocolViolation(std::string("ghost_grow: wrong phase ") + to_string(phase_));
    }
    // Validate everything before mutating.
    std::vector<std::uint32_t> new_size(boxes_.size());
    for (std::uint32_t s = 0; s < boxes_.size(); ++s) new_size[s] = box_size(s);
    std::vector<std::pair<std::uint32_t, VertexId>> seen;
    for (const auto& add : additions) {
        if (add.box >= boxes_.size()) {
            throw ProtocolViolation("ghost_grow: box " + std::to_string(add.box) + " does not exist");
        }
        for (VertexId v : add.vertices) {
            check_vertex(v);
            if (owner_[v] != Owner::Free) {
                throw ProtocolViolation("ghost_grow: box " + std::to_string(add.box) + ": " + vertex_str(v) +
                                        " is claimed or haunted");
            }
            const auto& inc = incidence_[v];
            if (std::find(inc.begin(), inc.end(), add.box) != inc.end()) {
                throw ProtocolViolation("ghost_grow: box " + std::to_string(add.box) + " already contains " +
                                        vertex_str(v));
            }
            seen.emplace_back(add.box, v);
            if (++new_size[add.box] > cfg_.M) {
                throw ProtocolViolation("ghost_grow: box " + std::to_string(add.box) + " would exceed M at " +
                                        vertex_str(v));
            }
        }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw ProtocolViolation("ghost_grow: duplicate vertex within one box addition");
    }
    for (const auto& add : additions) {
        for (VertexId v : add.vertices) {
            boxes_[add.box].push_back(v);
            incidence_[v].push_back(add.box);
            mark_dirty(v);
        }
    }
    phase_ = BoxPhase::MakerMove;
    claims_this_round_ = 0;
    if (free_count_ == 0) end_maker_step();
}

std::optional<VertexId> BoxGameState::select_maker_vertex() {
    if (phase_ != BoxPhase::MakerMove) {
        throw ProtocolViolation(std::string("select_maker_vertex: wrong phase ") + to_string(phase_));
    }
    if (pending_) return pending_;
    flush_dirty();
    const std::int32_t best = tree_.best();
    if (best == detail::ArgmaxTree::kNone) {
        end_maker_step();
        return std::nullopt;
    }
    pending_ = static_cast<VertexId>(best);
    return pending_;
}

void BoxGameState::resolve_maker_proposal(const GhostDecision& decision) {
    if (phase_ != BoxPhase::MakerMove || !pending_) {
        throw ProtocolViolation("resolve_maker_proposal: no pending proposal");
    }
    const VertexId proposal = *pending_;
    for (VertexId v : decision.extra_haunts) {
        check_vertex(v);
        if (owner_[v] == Owner::Maker || owner_[v] == Owner::Breaker) {
            throw ProtocolViolation("ghost haunt: " + vertex_str(v) + " is already claimed");
        }
        if (decision.allow && v == proposal) {
            throw ProtocolViolation("ghost haunt: allowed proposal " + vertex_str(v) + " also haunted");
        }
    }
    pending_.reset();
    if (decision.allow) {
        take(proposal, Owner::Maker);
        ++claims_this_round_;
    } else {
        haunt(proposal);
    }
    for (VertexId v : decision.extra_haunts) {
        if (owner_[v] == Owner::Free) haunt(v);
    }
    if (claims_this_round_ >= cfg_.m || free_count_ == 0) end_maker_step();
}

void BoxGameState::end_maker_step() {
    phase_ = BoxPhase::BreakerMove;
    pending_.reset();
}

void BoxGameState::breaker_claim(std::span<const VertexId> vertices) {
    const bool opening = opening_move_allowed();
    if (!opening && phase_ != BoxPhase::BreakerMove) {
        throw ProtocolViolation(std::string("breaker_claim: wrong phase ") + to_string(phase_));
    }
    if (vertices.size() > cfg_.b) {
        throw ProtocolViolation("breaker_claim: " + std::to_string(vertices.size()) + " vertices exceed bias " +
                                std::to_string(cfg_.b));
    }
    std::vector<VertexId> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ProtocolViolation("breaker_claim: repeated vertex");
    }
    for (VertexId v : vertices) {
        check_vertex(v);
        if (owner_[v] != Owner::Free) {
            throw ProtocolViolation("breaker_claim: " + vertex_str(v) + " is claimed or haunted");
        }
    }
    for (VertexId v : vertices) take(v, Owner::Breaker);
    if (opening) {
        opening_done_ = true;
        return;
    }
    ++round_;
    phase_ = BoxPhase::GhostGrow;
}

std::vector<double> BoxGameState::fair_share_deficits() const {
    std::vector<double> out(boxes_.size());
    for (std::uint32_t s = 0; s < boxes_.size(); ++s) {
        out[s] = fair_share_deficit(x_count_[s], y_count_[s], cfg_.m, cfg_.b, cfg_.ell);
    }
    return out;
}

double BoxGameState::max_fair_share_deficit() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < boxes_.size(); ++s) {
        worst = std::max(worst, fair_share_deficit(x_count_[s], y_count_[s], cfg_.m, cfg_.b, cfg_.ell));
    }
    return worst;
}

bool BoxGameState::counters_consistent() const {
    for (std::uint32_t s = 0; s < boxes_.size(); ++s) {
        std::uint32_t x = 0;
        std::uint32_t y = 0;
        for (VertexId v : boxes_[s]) {
            x += owner_[v] == Owner::Maker;
            y += owner_[v] == Owner::Breaker;
        }
        if (x != x_count_[s] || y != y_count_[s]) return false;
        if (x + y > boxes_[s].size() || boxes_[s].size() > cfg_.M) return false;
        const double expect = spooky::box_log_potential(x, y, params_.lambda, params_.tau);
        if (std::abs(expect - log_potential_[s]) > 1e-9 * std::max(1.0, std::abs(expect))) return false;
    }
    return true;
}

}  // namespace spooky
