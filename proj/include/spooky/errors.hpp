#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spooky {

// Bad input to a pure function (out-of-range index, loop edge, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A player or policy broke the rules of the box game.
class ProtocolViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Parameters rejected before any game is played.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Internal state disagrees with itself; always a bug or a corrupted replay.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A Breaker strategy returned an illegal move.
class StrategyFault : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Exponential search refused because the instance is over the size limit.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

}  // namespace spooky
