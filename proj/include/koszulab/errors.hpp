#pragma once

#include <stdexcept>
#include <string>

namespace koszulab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed presentation text. Lexical errors carry the byte offset of the
// failure; schema errors carry a JSON pointer in the message and npos here.
class SyntaxError : public Error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " (at byte " + std::to_string(position) + ")"), position_(position) {}
    explicit SyntaxError(const std::string& what) : Error(what), position_(npos) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class NonGroupAction : public Error {
public:
    using Error::Error;
};

class UnknownBuiltin : public Error {
public:
    using Error::Error;
};

class ResourceLimit : public Error {
public:
    using Error::Error;
};

class CreatesCycle : public Error {
public:
    using Error::Error;
};

class CompositionNotZero : public Error {
public:
    using Error::Error;
};

class BlockMissing : public Error {
public:
    using Error::Error;
};

class GenusOverflow : public Error {
public:
    using Error::Error;
};

}  // namespace koszulab
