#pragma once

#include <stdexcept>
#include <string>

namespace compsemi {

/// Argument outside the domain of a function (e.g. Re z <= 0 for log Gamma).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Operands of incompatible size.
class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed word / combination text. Carries the 0-based offset of the
/// offending character.
class ParseError : public std::invalid_argument {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

}  // namespace compsemi
