#include "autoprove/word_automaton.hpp"

#include <stdexcept>

namespace autoprove {

namespace {

Automaton restrict_to_valid(Automaton a, const ValidityResolver& validity) {
  if (!a.is_machine()) return a;
  for (int i = 0; i < a.num_tapes(); ++i) {
    const Automaton* v = validity(a.tapes()[i]);
    if (v) a = intersect_positional(a, embed_tape(*v, a.tapes(), i));
  }
  return minimize(a);
}

}  // namespace

Automaton compare_word_constant(const Automaton& word, Cmp cmp, int value,
                                const ValidityResolver& validity) {
  if (!word.is_machine())
    throw std::logic_error("word automata are always ordinary machines");
  Automaton out = word;
  for (int q = 0; q < out.num_states(); ++q)
    out.set_output(q, cmp_eval(cmp, out.output(q), value) ? 1 : 0);
  return restrict_to_valid(minimize(out), validity);
}

Automaton compare_word_outputs(const Automaton& left, const Automaton& right, Cmp cmp,
                               const ValidityResolver& validity) {
  Automaton product = cross_product(
      left, right, [cmp](std::optional<int> a, std::optional<int> b) -> int {
        if (!a || !b) return 0;
        return cmp_eval(cmp, *a, *b) ? 1 : 0;
      });
  return restrict_to_valid(std::move(product), validity);
}

}  // namespace autoprove
