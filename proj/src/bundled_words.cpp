#include "autoprove/bundled_words.hpp"

namespace autoprove {

namespace {

// The Thue-Morse word: t(n) = parity of the number of ones in the binary
// representation of n.
const char kThueMorse[] =
    "msd_2\n"
    "0 0\n"
    "0 -> 0\n"
    "1 -> 1\n"
    "1 1\n"
    "0 -> 1\n"
    "1 -> 0\n";

// The paperfolding words over {-1, 1}: the first input selects the sequence
// of folding instructions, the second is the position, read least
// significant digit first.
const char kPaperfolding[] =
    "{-1,1} lsd_2\n"
    "\n"
    "0 0\n"
    "* 0 -> 0\n"
    "1 1 -> 1\n"
    "-1 1 -> 2\n"
    "\n"
    "1 1\n"
    "* 1 -> 4\n"
    "* 0 -> 3\n"
    "\n"
    "2 -1\n"
    "* 0 -> 4\n"
    "* 1 -> 3\n"
    "\n"
    "3 1\n"
    "* * -> 3\n"
    "\n"
    "4 -1\n"
    "* * -> 4\n";

}  // namespace

const std::vector<BundledWord>& bundled_words() {
  static const std::vector<BundledWord> kWords = {
      {"T", kThueMorse},
      {"PF", kPaperfolding},
  };
  return kWords;
}

}  // namespace autoprove
