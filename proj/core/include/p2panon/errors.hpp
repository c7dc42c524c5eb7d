// Copyright 2026 The p2panon Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef P2PANON_ERRORS_HPP
#define P2PANON_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace p2panon {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an operation's arguments was violated.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// An input document could not be parsed; the message names the record.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Two records in an input document share an identifier.
class DuplicateRecordError : public Error {
 public:
  using Error::Error;
};

/// An observation that cannot arise under the model was supplied.
class ImpossibleObservationError : public Error {
 public:
  using Error::Error;
};

/// An operation requiring data received an empty input.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// A quantity violated a documented invariant (e.g. an unnormalized posterior).
class InvariantViolationError : public Error {
 public:
  using Error::Error;
};

/// Not enough observations to complete an inference.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure carrying every violation found,
/// each prefixed with the config path of the offending key.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& vs) {
    std::string out = "invalid configuration:";
    for (const auto& v : vs) {
      out += "\n  - " + v;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace p2panon

#endif  // P2PANON_ERRORS_HPP
