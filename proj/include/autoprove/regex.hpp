#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "autoprove/automaton.hpp"

namespace autoprove {

/// AST for the supported regular-expression syntax: digit literals, '.',
/// character classes (with ranges and '^' complement relative to {0..9}),
/// '*', '+', '|', grouping parentheses, and juxtaposition for concatenation.
struct RegexNode {
  enum class Kind { Literal, Any, Class, Concat, Union, Star, Plus, Epsilon };
  Kind kind{};
  int literal = 0;             ///< Literal digit
  std::set<int> members;       ///< Class members (digits)
  bool complemented = false;   ///< Class written as [^...]
  std::vector<std::unique_ptr<RegexNode>> children;
};

std::unique_ptr<RegexNode> parse_regex(const std::string& src);

/// Compiles the AST into a minimal single-tape automaton over the domain's
/// alphabet; the language is the regex language intersected with alphabet^*.
/// A bare (non-number-system) domain alphabet must be a subset of {0,...,9}.
Automaton compile_regex(const RegexNode& ast, const TapeDomain& domain);

/// parse_regex + compile_regex.
Automaton regex_to_automaton(const std::string& src, const TapeDomain& domain);

extern const char* kRegexAlphabetMessage;

}  // namespace autoprove
