#pragma once

#include <stdexcept>
#include <string>

namespace autoprove {

/// Error in a user-supplied predicate, command, or library file.
/// `offset` is a character position in the offending predicate string,
/// or -1 when no position applies.
class PredicateError : public std::runtime_error {
 public:
  explicit PredicateError(const std::string& msg, int offset = -1)
      : std::runtime_error(msg), offset_(offset) {}

  int offset() const { return offset_; }

 private:
  int offset_;
};

}  // namespace autoprove
