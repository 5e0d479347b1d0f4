#pragma once

#include <functional>
#include <string>

#include "autoprove/automaton.hpp"
#include "autoprove/compare.hpp"

namespace autoprove {

/// Resolves a tape to the automaton of valid representations of its number
/// system, or nullptr when the tape carries a bare alphabet (every word is
/// valid there).
using ValidityResolver = std::function<const Automaton*(const TapeDomain&)>;

/// Turns an automaton with output into an ordinary acceptor over its index
/// tapes: accepts exactly the index tuples whose letter stands in relation
/// `cmp` to `value`. Number-system tapes are restricted to valid
/// representations. The result is minimized.
Automaton compare_word_constant(const Automaton& word, Cmp cmp, int value,
                                const ValidityResolver& validity);

/// Acceptor over the merged index tapes (merged by label, as in cross
/// products) of two automata with output: accepts when the two letters
/// stand in relation `cmp`. Index tuples rejected by either operand are
/// rejected. Number-system tapes are restricted to valid representations.
Automaton compare_word_outputs(const Automaton& left, const Automaton& right, Cmp cmp,
                               const ValidityResolver& validity);

}  // namespace autoprove
