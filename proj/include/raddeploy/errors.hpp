#pragma once

#include <stdexcept>
#include <string>

namespace raddeploy {

/// A parameter is outside the range an operation accepts.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The sizing equations have no finite solution (zero denominator).
class SingularConfiguration : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A model was queried outside its validity band (e.g. atmosphere above 11 km).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller broke an operation's precondition (stepping a stowed payload,
/// pushing with the door closed, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A detection over a recorded history found nothing.
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file could not be parsed or validated. Carries the offending key
/// (and line number when the problem is syntactic).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}

    [[nodiscard]] const std::string& key() const { return key_; }
    [[nodiscard]] int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

}  // namespace raddeploy
