#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace spooky {

inline constexpr const char* kCodeVersion = "spooky-engine 1.0.0";
inline constexpr int kTranscriptFormatVersion = 1;

enum class EventType : std::uint8_t {
    MakerTurn,         // TM  real Maker turn k begins
    RealMakerClaim,    // RM  ledger: edge -> Maker
    RealRevealedOut,   // RX  ledger: edge -> RevealedOut
    RealBreakerClaim,  // RB  ledger: edges -> Breaker (one per Breaker turn, possibly empty)
    GhostGrow,         // GG  box game g: box s gains vertices
    MakerProposal,     // MP  box game g: Maker proposes v
    MakerClaim,        // MK  box game g: Ghost allows v, haunts extras
    GhostHaunt,        // GH  box game g: Ghost haunts v and extras
    BreakerClaim,      // BK  box game g: Breaker claims vertices
};

const char* tag(EventType type) noexcept;

struct Event {
    EventType type = EventType::MakerTurn;
    std::int32_t game = -1;           // box game tag; -1 for real-game events
    std::uint32_t value = 0;          // turn, edge, vertex or box, depending on type
    std::uint32_t size_after = 0;     // GG: box size after the addition
    std::vector<std::uint32_t> list;  // edges, added vertices or extra haunts

    bool operator==(const Event&) const = default;
};

/// A game record: a JSON header (configuration, seeds, strategy, code
/// version) and a flat list of tagged events.
struct Transcript {
    std::string kind;  // "real" or "box"
    nlohmann::json header = nlohmann::json::object();
    std::vector<Event> events;

    /// FNV-1a over the canonical event serialisation.
    std::uint64_t hash() const;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex16(std::uint64_t value);

/// Canonical compact JSON for one event and for an event list.
void append_event_json(std::string& out, const Event& event);
std::string serialize_events(std::span<const Event> events);

std::string to_json_text(const Transcript& transcript);
/// Throws ParseError carrying the byte offset of a syntax error (0 for
/// structural errors, whose message names the offending event).
Transcript parse_transcript(std::string_view text);

Transcript read_transcript_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace spooky
