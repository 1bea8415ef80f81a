#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace llw {

enum class ErrorKind {
    Syntax,       // malformed formula, sequent, term, or file text
    Invalid,      // well-formed input violating an operation's precondition
    Budget,       // search or enumeration bound exceeded
    Io,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class SyntaxError : public Error {
public:
    // `position` is a 0-based byte offset into the parsed text.
    SyntaxError(const std::string &message, std::size_t position)
        : Error(ErrorKind::Syntax,
                message + " at column " + std::to_string(position + 1)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

} // namespace llw
