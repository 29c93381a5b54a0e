#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hammer {

// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line_number, const std::string& what)
        : Error("line " + std::to_string(line_number) + ": " + what), line_(line_number) {}

    std::size_t line_number() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InvalidRate : public Error {
public:
    using Error::Error;
};

class CounterOverflow : public Error {
public:
    using Error::Error;
};

class CounterUnderflow : public Error {
public:
    using Error::Error;
};

class EmptyWindow : public Error {
public:
    using Error::Error;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class EmptyMatrix : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

}  // namespace hammer
