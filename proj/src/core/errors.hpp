#pragma once

#include <stdexcept>
#include <string>

namespace commsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct DimensionMismatch : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

// Raised by the Pauli-sum grammar; carries the offending token and line.
struct ParseError : Error {
  ParseError(const std::string& message, std::string token, int line)
      : Error(message + " (token \"" + token + "\", line " +
              std::to_string(line) + ")"),
        token(std::move(token)),
        line(line) {}

  std::string token;
  int line;
};

struct NumericError : Error {
  using Error::Error;
};

}  // namespace commsim
