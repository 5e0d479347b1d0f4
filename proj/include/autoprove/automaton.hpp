#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace autoprove {

/// Input domain of one automaton tape: either a named number system
/// (whose representations the tape is meant to carry) or a bare alphabet.
struct TapeDomain {
  std::string label;          ///< variable bound to this tape; empty until bound
  std::string system;         ///< number system name ("msd_2", ...); empty = bare alphabet
  std::vector<int> alphabet;  ///< sorted, distinct, non-empty

  bool is_number_system() const { return !system.empty(); }
  /// Reading direction implied by the system name prefix. Bare alphabets
  /// report most-significant-first; callers must not rely on that.
  bool msd() const { return system.rfind("lsd_", 0) != 0; }
  std::optional<int> symbol_index(int symbol) const;
  bool same_alphabet(const TapeDomain& o) const { return alphabet == o.alphabet; }
};

/// Multi-tape finite automaton over tuples of integer symbols.
///
/// One symbol of the automaton is a tuple with one component per tape; a word
/// is a sequence of such tuples (all tapes advance in lockstep). Tuples are
/// stored internally as dense codes (mixed-radix over per-tape alphabet
/// indexes). Transitions into the dead state are never stored: a missing
/// transition means rejection. Every state carries an integer output; a state
/// is final exactly when its output is nonzero, which lets the same type
/// serve as an acceptor and as an automaton-with-output.
///
/// The zero-tape constants TRUE and FALSE are represented by a marker kind
/// and carry no states.
class Automaton {
 public:
  enum class Kind { Machine, True, False };

  struct Edge {
    int code;  ///< encoded symbol tuple
    int dst;
    friend bool operator<(const Edge& a, const Edge& b) {
      return a.code != b.code ? a.code < b.code : a.dst < b.dst;
    }
    friend bool operator==(const Edge& a, const Edge& b) {
      return a.code == b.code && a.dst == b.dst;
    }
  };

  Automaton() = default;
  Automaton(std::vector<TapeDomain> tapes, int num_states);

  static Automaton true_automaton();
  static Automaton false_automaton();
  /// Single state accepting every word over `tapes` (including the empty word).
  static Automaton universal(std::vector<TapeDomain> tapes);
  /// Single non-final state with no transitions: the empty language.
  static Automaton empty_language(std::vector<TapeDomain> tapes);

  Kind kind() const { return kind_; }
  bool is_machine() const { return kind_ == Kind::Machine; }
  bool is_true() const { return kind_ == Kind::True; }
  bool is_false() const { return kind_ == Kind::False; }

  int num_states() const { return static_cast<int>(outputs_.size()); }
  int num_tapes() const { return static_cast<int>(tapes_.size()); }
  const std::vector<TapeDomain>& tapes() const { return tapes_; }
  std::vector<TapeDomain>& tapes() { return tapes_; }

  const std::vector<int>& initial_states() const { return initial_; }
  void set_initial(std::vector<int> initial);
  int output(int state) const { return outputs_[state]; }
  void set_output(int state, int out) { outputs_[state] = out; }
  const std::vector<int>& outputs() const { return outputs_; }
  bool is_final(int state) const { return outputs_[state] != 0; }

  const std::vector<Edge>& edges(int state) const { return edges_[state]; }
  void add_edge(int src, int code, int dst);
  void add_edge(int src, const std::vector<int>& tuple, int dst);
  /// Deterministic successor on `code`, or nullopt (dead).
  std::optional<int> next(int state, int code) const;

  /// Number of distinct tuple codes (product of tape alphabet sizes).
  int alphabet_size() const;
  /// Encode a symbol tuple as a dense code; nullopt if any symbol is not in
  /// its tape alphabet.
  std::optional<int> encode(const std::vector<int>& tuple) const;
  std::vector<int> decode(int code) const;

  bool is_deterministic() const;
  /// True when every (state, code) pair has a stored successor.
  bool is_total() const;

  /// Finds the tape carrying `label`, or -1.
  int tape_index_of(const std::string& label) const;
  bool all_tapes_labeled() const;
  /// Reassigns tape labels positionally, then reorders tapes so labels are
  /// sorted lexicographically, remapping every stored code. Labels must be
  /// distinct and non-empty.
  void relabel(const std::vector<std::string>& labels);
  void clear_labels();

 private:
  Kind kind_ = Kind::Machine;
  std::vector<TapeDomain> tapes_;
  std::vector<int> initial_;
  std::vector<int> outputs_;
  std::vector<std::vector<Edge>> edges_;

  void permute_tapes(const std::vector<int>& order);
};

/// Does the automaton accept `word` (a sequence of symbol tuples)?
/// TRUE accepts everything of arity zero; FALSE rejects. Throws on arity
/// mismatch or symbols outside the tape alphabets.
bool accepts(const Automaton& a, const std::vector<std::vector<int>>& word);

/// Runs a deterministic automaton-with-output and returns the output of the
/// last state reached. Throws if the run leaves the transition graph.
int run_with_output(const Automaton& a, const std::vector<std::vector<int>>& word);

/// Adds an explicit non-final sink completing every missing transition.
/// Returns the sink-completed automaton and the sink index (equal to the
/// original state count, or -1 when the input was already total).
Automaton totalize(const Automaton& a, int* sink_index = nullptr);

/// Subset construction. Accepts nondeterministic input (duplicate codes,
/// multiple initial states); deterministic input is returned unchanged.
Automaton determinize(const Automaton& a);

/// Canonical minimization of a deterministic automaton: merges states with
/// equal output and equal behaviour, drops states that cannot reach a final
/// state, and renumbers the survivors in breadth-first order from the initial
/// state (edges explored in ascending code order). The empty language
/// canonicalizes to a single non-final state. Minimal automata are unique,
/// so two deterministic automata over the same tapes accept the same
/// language iff their minimized forms are structurally identical.
Automaton minimize(const Automaton& a);

/// determinize + minimize.
Automaton canonicalize(const Automaton& a);

/// Output combiner for cross products. Receives the outputs of the two
/// factor states, or nullopt for a factor that has left its transition graph
/// (implicit dead state). Must return 0 for the (nullopt, nullopt) pair.
using OutputCombiner = std::function<int(std::optional<int>, std::optional<int>)>;

extern const std::string kAlphabetConflictMessage;

/// Synchronized product of two automata whose tapes are all labeled. The
/// result runs over the union of the two label sets (sorted); tapes sharing a
/// label are read in lockstep and must have equal alphabets (throws
/// PredicateError with kAlphabetConflictMessage otherwise). Outputs come from
/// `combine`. TRUE/FALSE operands short-circuit: the constant is substituted
/// into `combine`, yielding the other operand, its plain complement (within
/// its tape alphabets), or a constant. The result is minimized.
Automaton cross_product(const Automaton& a, const Automaton& b, const OutputCombiner& combine);

OutputCombiner boolean_combiner(bool (*f)(bool, bool));

/// Removes tape `tape_index`, unioning transitions that collapse onto the
/// same reduced tuple. The result is generally nondeterministic. Projecting
/// the last tape yields TRUE if the language was non-empty, else FALSE.
Automaton project_tape(const Automaton& a, int tape_index);
Automaton project_label(const Automaton& a, const std::string& label);

/// Reverses the language (tuple sequences read back to front), then
/// canonicalizes.
Automaton reverse(const Automaton& a);

bool is_empty(const Automaton& a);
/// Does the automaton accept every word over its tape alphabets?
bool is_universal(const Automaton& a);

/// Complement with respect to all words over the tape alphabets (no
/// representation-validity constraints applied).
Automaton complement_within_alphabets(const Automaton& a);

/// Language equality, ignoring tape labels (alphabets must match). Outputs
/// are compared as accept/reject only.
bool language_equal(const Automaton& a, const Automaton& b);

/// Embeds a single-tape automaton into a wider tape list: tape `tape_index`
/// follows `single`, all other tapes are unconstrained.
Automaton embed_tape(const Automaton& single, const std::vector<TapeDomain>& tapes,
                     int tape_index);

/// Positional intersection of two automata with identical tape arity and
/// alphabets; labels are ignored and the left operand's tapes are kept.
Automaton intersect_positional(const Automaton& a, const Automaton& b);

}  // namespace autoprove
