#pragma once

#include <string>
#include <vector>

namespace autoprove {

/// A word-automaton definition that ships with the tool. The text is the
/// exact file content materialized into the word automata library the first
/// time the word is referenced (unless the user already provides a file of
/// the same name there).
struct BundledWord {
  std::string name;  ///< word name, also the file stem ("T" -> "T.txt")
  std::string text;  ///< file content in the automaton text format
};

/// The words available out of the box: T (Thue-Morse) and PF (the
/// paperfolding words).
const std::vector<BundledWord>& bundled_words();

}  // namespace autoprove
