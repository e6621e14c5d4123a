#include "spooky/transcript.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spooky/errors.hpp"

namespace spooky {

namespace {

constexpr std::array<const char*, 9> kTags = {"TM", "RM", "RX", "RB", "GG", "MP", "MK", "GH", "BK"};

void append_uint(std::string& out, std::uint64_t v) {
    char buf[24];
    const int len = std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    out.append(buf, static_cast<std::size_t>(len));
}

void append_list(std::string& out, const std::vector<std::uint32_t>& list) {
    out += '[';
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += ',';
        append_uint(out, list[i]);
    }
    out += ']';
}

EventType parse_tag(const std::string& t, std::size_t index) {
    for (std::size_t i = 0; i < kTags.size(); ++i) {
        if (t == kTags[i]) return static_cast<EventType>(i);
    }
    throw ParseError("transcript: event " + std::to_string(index) + " has unknown tag '" + t + "'", 0);
}

std::uint32_t get_uint(const nlohmann::json& obj, const char* key, std::size_t index) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_unsigned()) {
        throw ParseError("transcript: event " + std::to_string(index) + " lacks unsigned field '" + key + "'", 0);
    }
    return it->get<std::uint32_t>();
}

std::vector<std::uint32_t> get_list(const nlohmann::json& obj, const char* key, std::size_t index) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_array()) {
        throw ParseError("transcript: event " + std::to_string(index) + " lacks array field '" + key + "'", 0);
    }
    std::vector<std::uint32_t> out;
    out.reserve(it->size());
    for (const auto& x : *it) {
        if (!x.is_number_unsigned()) {
            throw ParseError("transcript: event " + std::to_string(index) + " has a non-integer in '" + key + "'",
                             0);
        }
        out.push_back(x.get<std::uint32_t>());
    }
    return out;
}

}  // namespace

const char* tag(EventType type) noexcept { return kTags[static_cast<std::size_t>(type)]; }

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

void append_event_json(std::string& out, const Event& e) {
    out += "{\"t\":\"";
    out += tag(e.type);
    out += '"';
    switch (e.type) {
        case EventType::MakerTurn:
            out += ",\"k\":";
            append_uint(out, e.value);
            break;
        case EventType::RealMakerClaim:
        case EventType::RealRevealedOut:
            out += ",\"e\":";
            append_uint(out, e.value);
            break;
        case EventType::RealBreakerClaim:
            out += ",\"e\":";
            append_list(out, e.list);
            break;
        case EventType::GhostGrow:
            out += ",\"g\":";
            append_uint(out, static_cast<std::uint32_t>(e.game));
            out += ",\"s\":";
            append_uint(out, e.value);
            out += ",\"v\":";
            append_list(out, e.list);
            out += ",\"n\":";
            append_uint(out, e.size_after);
            break;
        case EventType::MakerProposal:
            out += ",\"g\":";
            append_uint(out, static_cast<std::uint32_t>(e.game));
            out += ",\"v\":";
            append_uint(out, e.value);
            break;
        case EventType::MakerClaim:
        case EventType::GhostHaunt:
            out += ",\"g\":";
            append_uint(out, static_cast<std::uint32_t>(e.game));
            out += ",\"v\":";
            append_uint(out, e.value);
            out += ",\"x\":";
            append_list(out, e.list);
            break;
        case EventType::BreakerClaim:
            out += ",\"g\":";
            append_uint(out, static_cast<std::uint32_t>(e.game));
            out += ",\"v\":";
            append_list(out, e.list);
            break;
    }
    out += '}';
}

std::string serialize_events(std::span<const Event> events) {
    std::string out = "[";
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i) out += ",\n";
        append_event_json(out, events[i]);
    }
    out += "]";
    return out;
}

std::uint64_t Transcript::hash() const { return fnv1a64(serialize_events(events)); }

std::string to_json_text(const Transcript& t) {
    nlohmann::json head;
    head["format"] = "spooky-transcript";
    head["format_version"] = kTranscriptFormatVersion;
    head["code_version"] = kCodeVersion;
    head["kind"] = t.kind;
    head["header"] = t.header;
    const std::string events = serialize_events(t.events);
    head["hash"] = hex16(fnv1a64(events));
    std::string text = head.dump();
    // Splice the pre-rendered event array in as the last member.
    text.pop_back();
    text += ",\"events\":\n";
    text += events;
    text += "}\n";
    return text;
}

Transcript parse_transcript(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("transcript: ") + err.what(), err.byte);
    }
    if (!doc.is_object() || doc.value("format", "") != "spooky-transcript") {
        throw ParseError("transcript: not a spooky-transcript document", 0);
    }
    Transcript t;
    t.kind = doc.value("kind", "");
    if (t.kind != "real" && t.kind != "box") throw ParseError("transcript: unknown kind '" + t.kind + "'", 0);
    if (auto it = doc.find("header"); it != doc.end() && it->is_object()) {
        t.header = *it;
    } else {
        throw ParseError("transcript: missing header object", 0);
    }
    auto events = doc.find("events");
    if (events == doc.end() || !events->is_array()) throw ParseError("transcript: missing events array", 0);
    t.events.reserve(events->size());
    std::size_t index = 0;
    for (const auto& obj : *events) {
        if (!obj.is_object() || !obj.contains("t") || !obj["t"].is_string()) {
            throw ParseError("transcript: event " + std::to_string(index) + " is not a tagged record", 0);
        }
        Event e;
        e.type = parse_tag(obj["t"].get<std::string>(), index);
        switch (e.type) {
            case EventType::MakerTurn: e.value = get_uint(obj, "k", index); break;
            case EventType::RealMakerClaim:
            case EventType::RealRevealedOut: e.value = get_uint(obj, "e", index); break;
            case EventType::RealBreakerClaim: e.list = get_list(obj, "e", index); break;
            case EventType::GhostGrow:
                e.game = static_cast<std::int32_t>(get_uint(obj, "g", index));
                e.value = get_uint(obj, "s", index);
                e.list = get_list(obj, "v", index);
                e.size_after = get_uint(obj, "n", index);
                break;
            case EventType::MakerProposal:
                e.game = static_cast<std::int32_t>(get_uint(obj, "g", index));
                e.value = get_uint(obj, "v", index);
                break;
            case EventType::MakerClaim:
            case EventType::GhostHaunt:
                e.game = static_cast<std::int32_t>(get_uint(obj, "g", index));
                e.value = get_uint(obj, "v", index);
                e.list = get_list(obj, "x", index);
                break;
            case EventType::BreakerClaim:
                e.game = static_cast<std::int32_t>(get_uint(obj, "g", index));
                e.list = get_list(obj, "v", index);
                break;
        }
        t.events.push_back(std::move(e));
        ++index;
    }
    return t;
}

Transcript read_transcript_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_transcript(buf.str());
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace spooky
