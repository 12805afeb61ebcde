#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace efpast {

/// Syntax error in a term or formula; carries a byte offset into the input.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A structurally invalid document or value: bad automaton tables, sort
/// violations, antichain violations, dangling references.
class validation_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured size bound was exceeded. Recoverable; the caller may retry
/// with larger limits.
class resource_limit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency assertion failed. Indicates a bug in this
/// library, not bad input.
class internal_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace efpast
