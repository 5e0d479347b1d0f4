#pragma once

#include <string>
#include <vector>

#include "autoprove/automaton.hpp"
#include "autoprove/number_system.hpp"
#include "autoprove/predicate.hpp"

namespace autoprove {

/// Environment the predicate compiler queries for number systems and stored
/// automata. Implementations throw PredicateError for unknown names.
class EvalEnv {
 public:
  virtual ~EvalEnv() = default;
  /// Number system by name (msd_2, lsd_fib, custom bases, ...).
  virtual const NumberSystem& number_system(const std::string& name) = 0;
  /// Automaton from the automata library ($name calls).
  virtual const Automaton& stored_automaton(const std::string& name) = 0;
  /// Word automaton (indexed as name[e]...).
  virtual const Automaton& word_automaton(const std::string& name) = 0;
};

struct StepRecord {
  std::string display;
  int states = 0;
  long long millis = 0;
};

struct EvalResult {
  Automaton automaton = Automaton::false_automaton();
  std::vector<StepRecord> steps;
  long long total_millis = 0;
};

/// Compiles a parsed predicate into an automaton over its free variables
/// (tapes labeled by variable name, lexicographically sorted).
EvalResult compile_ast(const Node& root, EvalEnv& env);

/// parse_predicate + compile_ast; rejects sources whose top-level expression
/// is not of automaton type.
EvalResult compile_predicate(const std::string& source, EvalEnv& env);

/// Existential projection of the given tape labels with the padding repair:
/// after the (nondeterministic) projection, representations of the remaining
/// variables may lack the padding the witness track needed, so the automaton
/// is closed under leading zeros (msd) or trailing zeros (lsd) before
/// determinization. All remaining number-system tapes must agree on the
/// direction. Labels without a matching tape are ignored; projecting every
/// tape yields a TRUE/FALSE constant.
Automaton project_with_repair(const Automaton& a, const std::vector<std::string>& labels,
                              int offset = -1);

}  // namespace autoprove
