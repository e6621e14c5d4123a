#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "spooky/errors.hpp"
#include "spooky/transcript.hpp"

using namespace spooky;

namespace {

Transcript sample() {
    Transcript t;
    t.kind = "real";
    t.header["params"] = {{"n", 5}, {"seed", 3}};
    t.events = {{EventType::MakerTurn, -1, 1, 0, {}},
                {EventType::GhostGrow, 1, 2, 3, {4, 7, 9}},
                {EventType::MakerProposal, 0, 6, 0, {}},
                {EventType::MakerClaim, 0, 6, 0, {1, 2}},
                {EventType::RealMakerClaim, -1, 6, 0, {}},
                {EventType::GhostHaunt, 1, 8, 0, {}},
                {EventType::RealRevealedOut, -1, 8, 0, {}},
                {EventType::RealBreakerClaim, -1, 0, 0, {0, 3}},
                {EventType::BreakerClaim, 0, 0, 0, {0, 3}}};
    return t;
}

}  // namespace

TEST_CASE("FNV-1a 64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex16(0xabcULL) == "0000000000000abc");
    CHECK(hex16(0xaf63dc4c8601ec8cULL).size() == 16);
}

TEST_CASE("canonical event serialisation") {
    std::string s;
    append_event_json(s, {EventType::GhostGrow, 1, 2, 3, {4, 7, 9}});
    CHECK(s == R"({"t":"GG","g":1,"s":2,"v":[4,7,9],"n":3})");
    s.clear();
    append_event_json(s, {EventType::RealBreakerClaim, -1, 0, 0, {}});
    CHECK(s == R"({"t":"RB","e":[]})");
    s.clear();
    append_event_json(s, {EventType::MakerTurn, -1, 12, 0, {}});
    CHECK(s == R"({"t":"TM","k":12})");
}

TEST_CASE("transcript text round-trips") {
    const Transcript t = sample();
    const std::string text = to_json_text(t);
    const Transcript back = parse_transcript(text);
    CHECK(back.kind == "real");
    CHECK(back.header == t.header);
    CHECK(back.events == t.events);
    CHECK(back.hash() == t.hash());
    CHECK(to_json_text(back) == text);
    CHECK(text.find(hex16(t.hash())) != std::string::npos);
}

TEST_CASE("hash changes with any event") {
    Transcript t = sample();
    const auto h = t.hash();
    t.events[3].list.push_back(5);
    CHECK(t.hash() != h);
}

TEST_CASE("parse errors") {
    const std::string text = to_json_text(sample());
    try {
        parse_transcript(text.substr(0, 60));
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() > 0);
        CHECK(e.byte_offset() <= 61);
    }
    try {
        parse_transcript("{\"format\":\"spooky-transcript\",,}");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.byte_offset() == 31);  // the second comma
    }
    CHECK_THROWS_AS(parse_transcript("[]"), ParseError);
    CHECK_THROWS_AS(parse_transcript(R"({"format":"spooky-transcript","kind":"real","header":{},"events":[{"t":"ZZ"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_transcript(R"({"format":"spooky-transcript","kind":"real","header":{},"events":[{"t":"RM"}]})"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_transcript(R"({"format":"spooky-transcript","kind":"real","header":{},"events":[{"t":"RB","e":[-1]}]})"),
        ParseError);
    CHECK_THROWS_AS(parse_transcript(R"({"format":"spooky-transcript","kind":"odd","header":{},"events":[]})"),
                    ParseError);
}

TEST_CASE("file round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "spooky_transcript_test.json").string();
    write_text_file(path, to_json_text(sample()));
    const Transcript back = read_transcript_file(path);
    CHECK(back.events == sample().events);
    std::remove(path.c_str());
    CHECK_THROWS(read_transcript_file(path));
}
