#pragma once

#include <stdexcept>
#include <string>

namespace mgrit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class DivisibilityError : public Error {
public:
    using Error::Error;
};

class UnknownScheme : public Error {
public:
    using Error::Error;
};

class SingularStage : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class MissingGridSpacing : public Error {
public:
    using Error::Error;
};

class SizeLimit : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

// Raised by analytic_bound / approx_factor when no closed form exists for the
// requested (levels, r, cycle); callers fall back to inequality_bound.
class Unsupported : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

class UnknownKey : public Error {
public:
    UnknownKey(const std::string& what, std::string key) : Error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

class MissingKey : public UnknownKey {
public:
    using UnknownKey::UnknownKey;
};

class ConflictingProblemParams : public Error {
public:
    using Error::Error;
};

} // namespace mgrit
