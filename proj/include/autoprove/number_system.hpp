#pragma once

#include <optional>
#include <string>
#include <vector>

#include "autoprove/automaton.hpp"

namespace autoprove {

/// A positional numeration system, packaged as the automata the evaluator
/// needs to compare and add numbers written in the system. All component
/// automata are canonical (deterministic, minimized) and their tapes carry
/// the system's name and digit alphabet, with labels left empty.
struct NumberSystem {
  std::string name;           ///< "msd_2", "lsd_fib", or a custom name
  std::vector<int> alphabet;  ///< digit alphabet, sorted

  Automaton addition;       ///< tapes (x, y, z): accepts iff x + y = z
  Automaton less_than;      ///< tapes (x, y): accepts iff x < y
  Automaton equal;          ///< tapes (x, y): accepts iff x = y, both valid
  Automaton representable;  ///< one tape: the valid representations

  bool msd() const { return name.rfind("lsd_", 0) != 0; }
  TapeDomain tape() const;
};

/// Base-k positional notation, most or least significant digit first.
NumberSystem make_base_k(int k, bool msd);

/// Zeckendorf (Fibonacci) numeration: digit alphabet {0,1}, no two adjacent
/// ones, position weights 1, 2, 3, 5, 8, ...
NumberSystem make_fibonacci(bool msd);

/// The same system read in the opposite direction: every automaton is
/// reversed and retagged with `new_name`.
NumberSystem reverse_system(const NumberSystem& s, const std::string& new_name);

/// Recognizes built-in system names: msd_k / lsd_k for any base k >= 2,
/// msd_fib / lsd_fib, and the unprefixed shorthands "k" and "fib" (read as
/// msd). Returns nullopt for anything else.
std::optional<NumberSystem> make_builtin_system(const std::string& name);

/// Canonical spelling of a number system name: names without an msd_/lsd_
/// prefix read most-significant-digit-first ("2" -> "msd_2").
std::string normalize_system_name(const std::string& name);

/// Builds a custom system from a user-supplied addition automaton and
/// optional comparison/validity automata. Missing pieces get defaults:
/// representable defaults to all words over the digit alphabet, and
/// less-than defaults to digit-order comparison of equally padded
/// representations (restricted to valid ones). Tapes are retagged with
/// `name` and widened to a common digit alphabet.
NumberSystem assemble_custom_system(const std::string& name, Automaton addition,
                                    std::optional<Automaton> less_than,
                                    std::optional<Automaton> representable);

// Encoding helpers, used by tests and tools.

/// Numeric value of base-k digits, most significant first.
long long base_k_value(int k, const std::vector<int>& msd_digits);
/// Canonical base-k digits of a value, most significant first; empty for 0.
std::vector<int> base_k_digits(int k, long long value);
/// Numeric value of Fibonacci-system digits, most significant first.
long long fibonacci_value(const std::vector<int>& msd_digits);
/// Canonical Zeckendorf digits of a value, most significant first; empty
/// for 0.
std::vector<int> fibonacci_digits(long long value);

}  // namespace autoprove
