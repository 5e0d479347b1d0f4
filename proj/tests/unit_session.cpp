#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "autoprove/bundled_words.hpp"
#include "autoprove/errors.hpp"
#include "autoprove/format.hpp"
#include "autoprove/number_system.hpp"
#include "autoprove/session.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace autoprove;
namespace fs = std::filesystem;
using testutil::read_bytes;

namespace {

struct Fixture {
  fs::path home;
  SessionConfig cfg;
  std::ostringstream out, err;

  explicit Fixture(const std::string& tag) : home(testutil::fresh_dir(tag)) {
    cfg.home = home;
  }
  Session session() { return Session(cfg, out, err); }
  fs::path result(const std::string& f) const { return home / "Result" / f; }
  fs::path library(const std::string& f) const { return home / "Automata Library" / f; }
  fs::path words(const std::string& f) const {
    return home / "Word Automata Library" / f;
  }
  void put(const fs::path& p, const std::string& bytes) {
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
};

// Checks a step log: line i must start with 2i spaces and `prefixes[i]`,
// carry a " states: " column, and end in a millisecond count; the final
// unindented line is the total.
void check_log(const std::string& log, const std::vector<std::string>& prefixes) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start < log.size()) {
    size_t nl = log.find('\n', start);
    REQUIRE(nl != std::string::npos);  // every line is newline-terminated
    lines.push_back(log.substr(start, nl - start));
    start = nl + 1;
  }
  REQUIRE(lines.size() == prefixes.size() + 1);
  for (size_t i = 0; i < prefixes.size(); ++i) {
    const std::string want = std::string(2 * i, ' ') + prefixes[i];
    CAPTURE(lines[i]);
    REQUIRE(lines[i].size() >= want.size());
    CHECK(lines[i].substr(0, want.size()) == want);
    CHECK(lines[i].find(" states: ") != std::string::npos);
    const size_t colon = lines[i].rfind(": ");
    REQUIRE(colon != std::string::npos);
    std::string tail = lines[i].substr(colon + 2);
    REQUIRE(tail.size() > 2);
    CHECK(tail.substr(tail.size() - 2) == "ms");
    for (char c : tail.substr(0, tail.size() - 2))
      CHECK(std::isdigit(static_cast<unsigned char>(c)));
  }
  CHECK(lines.back().substr(0, 24) == "total computation time: ");
  CHECK(lines.back().substr(lines.back().size() - 2) == "ms");
}

}  // namespace

TEST_CASE("eval writes result files and stays quiet with a semicolon") {
  Fixture fx("eval_semi");
  Session s = fx.session();
  s.run_commands("eval four \"a=4\";");
  CHECK(fx.out.str().empty());
  CHECK(fx.err.str().empty());
  CHECK(fs::exists(fx.result("four.gv")));
  CHECK(fs::exists(fx.result("four.txt")));
  check_log(read_bytes(fx.result("four_log.txt")), {"a=4 has 4 states"});
  CHECK(!fs::exists(fx.library("four.txt")));  // eval does not publish

  // The result file holds the canonical automaton text.
  const std::string text = read_bytes(fx.result("four.txt"));
  CHECK(text.substr(0, 6) == "msd_2\n");
}

TEST_CASE("a colon terminator echoes the step log to the console") {
  Fixture fx("eval_colon");
  Session s = fx.session();
  s.run_commands("eval both \"a=4 & a<6\":");
  const std::string log = read_bytes(fx.result("both_log.txt"));
  check_log(log, {"a=4 has 4 states", "a<6 has", "(a=4&a<6) has"});
  CHECK(fx.out.str() == log);
  CHECK(fx.err.str().empty());
}

TEST_CASE("sentences print their verdict on the console") {
  Fixture fx("verdict");
  Session s = fx.session();
  s.run_commands("eval t \"E a a=4\"; eval f \"A a a=4\";");
  CHECK(fx.out.str() == "TRUE\nFALSE\n");
  CHECK(read_bytes(fx.result("t.txt")) == "true\n");
  CHECK(read_bytes(fx.result("f.txt")) == "false\n");
  // The verdict is console-only; the log file holds only the steps.
  const std::string log = read_bytes(fx.result("t_log.txt"));
  CHECK(log.find("TRUE") == std::string::npos);

  // With ':' the verdict follows the echoed log.
  Fixture fx2("verdict_colon");
  Session s2 = fx2.session();
  s2.run_commands("eval t \"E a a=4\":");
  const std::string log2 = read_bytes(fx2.result("t_log.txt"));
  CHECK(fx2.out.str() == log2 + "TRUE\n");
}

TEST_CASE("def publishes to the automata library and refreshes calls") {
  Fixture fx("def");
  Session s = fx.session();
  s.run_commands("def p \"a=4\"; eval c1 \"$p(4)\"; def p \"a=5\"; eval c2 \"$p(4)\";");
  CHECK(fx.out.str() == "TRUE\nFALSE\n");
  CHECK(fs::exists(fx.library("p.txt")));
  CHECK(read_bytes(fx.library("p.txt")) == read_bytes(fx.result("p.txt")));
}

TEST_CASE("reg compiles a regular expression into the automata library") {
  Fixture fx("reg");
  Session s = fx.session();
  s.run_commands("reg power2 msd_2 \"0*10*\";");
  CHECK(fx.err.str().empty());
  CHECK(read_bytes(fx.library("power2.txt")) ==
        "msd_2\n0 0\n0 -> 0\n1 -> 1\n1 1\n0 -> 1\n");
  CHECK(fs::exists(fx.result("power2.gv")));
  // reg leaves no automaton text or log in the result directory.
  CHECK(!fs::exists(fx.result("power2.txt")));
  CHECK(!fs::exists(fx.result("power2_log.txt")));

  // The stored automaton is immediately callable.
  s.run_commands("eval is8 \"$power2(8)\"; eval is6 \"$power2(6)\";");
  CHECK(fx.out.str() == "TRUE\nFALSE\n");

  // Braced alphabets compile over a bare tape.
  s.run_commands("reg anybin {1, 0, 1} \"0*\";");
  CHECK(read_bytes(fx.library("anybin.txt")).substr(0, 6) == "{0,1}\n");
}

TEST_CASE("error blocks carry the message, position, and echoed command") {
  Fixture fx("errors");
  Session s = fx.session();

  s.run_commands("eval e \"a=\";");
  CHECK(fx.err.str() == "expected an operand\n\t: char at 2\n\t: eval e \"a=\";\n");
  CHECK(!fs::exists(fx.result("e.txt")));

  fx.err.str("");
  s.run_commands("foo bar;");
  CHECK(fx.err.str() == "invalid command: foo\n\t: foo bar;\n");

  fx.err.str("");
  s.run_commands("eval 9x \"a=4\";");
  CHECK(fx.err.str() == "invalid use of eval/def command\n\t: eval 9x \"a=4\";\n");

  fx.err.str("");
  s.run_commands("def x\"a=4\";");
  CHECK(fx.err.str() == "invalid use of eval/def command\n\t: def x\"a=4\";\n");

  fx.err.str("");
  s.run_commands("eval x \"a=4\" extra;");
  CHECK(fx.err.str() == "invalid use of eval/def command\n\t: eval x \"a=4\" extra;\n");

  // Regex alphabet violations have no character position.
  fx.err.str("");
  s.run_commands("reg bad {-1,1} \"1*\";");
  CHECK(fx.err.str() ==
        "the input alphabet of an automaton generated from a regular expression must "
        "be a subset of {0,1,...,9}\n\t: reg bad {-1,1} \"1*\";\n");

  fx.err.str("");
  s.run_commands("exit now;");
  CHECK(fx.err.str() == "invalid use of exit command\n\t: exit now;\n");

  // A multi-line command echoes on one line.
  fx.err.str("");
  s.run_commands("eval m\n  \"a=\";");
  CHECK(fx.err.str() == "expected an operand\n\t: char at 2\n\t: eval m   \"a=\";\n");

  // Library and number-system misses surface at the node being compiled.
  fx.err.str("");
  s.run_commands("eval miss \"?msd_nope a=1\";");
  CHECK(fx.err.str() ==
        "number system msd_nope is not defined\n\t: char at 11\n"
        "\t: eval miss \"?msd_nope a=1\";\n");

  fx.err.str("");
  s.run_commands("eval miss \"$ghost(1)\";");
  CHECK(fx.err.str() ==
        "automaton ghost does not exist in the automata library\n\t: char at 1\n"
        "\t: eval miss \"$ghost(1)\";\n");

  fx.err.str("");
  s.run_commands("eval miss \"G[1]=@0\";");
  CHECK(fx.err.str() ==
        "word G does not exist in the word automata library\n\t: char at 4\n"
        "\t: eval miss \"G[1]=@0\";\n");
}

TEST_CASE("exit stops the command stream") {
  Fixture fx("exit");
  Session s = fx.session();
  s.run_commands("eval a \"x=1\"; exit; eval b \"x=2\";");
  CHECK(fs::exists(fx.result("a.txt")));
  CHECK(!fs::exists(fx.result("b.txt")));
}

TEST_CASE("commands may span lines and live in one string") {
  Fixture fx("scan");
  Session s = fx.session();
  s.run_commands("eval a\n \"x=1\"; eval b \"x=2\"");  // trailing command without ';'
  CHECK(fs::exists(fx.result("a.txt")));
  CHECK(fs::exists(fx.result("b.txt")));
}

TEST_CASE("interactive runs prompt and batch runs do not") {
  Fixture fx("prompt");
  Session s = fx.session();
  std::istringstream in("exit;\n");
  s.run(in, true);
  CHECK(fx.out.str() == "> ");

  Fixture fx2("noprompt");
  Session s2 = fx2.session();
  std::istringstream in2("eval a \"x=1\";\nexit;\n");
  s2.run(in2, false);
  CHECK(fx2.out.str().empty());
  CHECK(fs::exists(fx2.result("a.txt")));
}

TEST_CASE("load replays a command file") {
  Fixture fx("load");
  fx.put(fx.home / "Command Files" / "s1.txt",
         "def ten \"a+b=10\";\neval useit \"$ten(4,6)\";\n");
  Session s = fx.session();
  s.run_commands("load s1.txt;");
  CHECK(fx.err.str().empty());
  CHECK(fx.out.str() == "TRUE\n");
  CHECK(fs::exists(fx.library("ten.txt")));

  // A missing file names the full path it tried.
  fx.err.str("");
  s.run_commands("load nope.txt;");
  const std::string want_path = (fx.home / "Command Files" / "nope.txt").string();
  CHECK(fx.err.str() ==
        "cannot open command file " + want_path + "\n\t: load nope.txt;\n");

  fx.err.str("");
  s.run_commands("load two words.txt;");
  CHECK(fx.err.str() == "invalid use of load command\n\t: load two words.txt;\n");
}

TEST_CASE("a failing command aborts the rest of its file with a line number") {
  Fixture fx("load_abort");
  fx.put(fx.home / "Command Files" / "outer.txt",
         "load inner.txt;\neval after \"a=4\";\n");
  fx.put(fx.home / "Command Files" / "inner.txt",
         "\neval ok \"a=1\";\nbad command;\neval skipped \"a=2\";\n");
  Session s = fx.session();
  s.run_commands("load outer.txt;");
  CHECK(fx.err.str() ==
        "invalid command: bad\n\t: bad command;\n"
        "load inner.txt aborted at line 3\n"
        "load outer.txt aborted at line 1\n");
  CHECK(fs::exists(fx.result("ok.txt")));
  CHECK(!fs::exists(fx.result("skipped.txt")));
  CHECK(!fs::exists(fx.result("after.txt")));
}

TEST_CASE("exit inside a command file stops quietly") {
  Fixture fx("load_exit");
  fx.put(fx.home / "Command Files" / "s.txt", "eval one \"a=1\";\nexit;\neval two \"a=2\";\n");
  Session s = fx.session();
  s.run_commands("load s.txt; eval three \"a=3\";");
  CHECK(fx.err.str().empty());
  CHECK(fs::exists(fx.result("one.txt")));
  CHECK(!fs::exists(fx.result("two.txt")));
  CHECK(!fs::exists(fx.result("three.txt")));
}

TEST_CASE("bundled words materialize into the word automata library") {
  Fixture fx("bundled");
  Session s = fx.session();
  CHECK(!fs::exists(fx.words("T.txt")));
  const Automaton& t = s.word_automaton("T");
  CHECK(t.num_states() == 2);
  CHECK(fs::exists(fx.words("T.txt")));
  for (const BundledWord& b : bundled_words()) {
    if (b.name == "T") CHECK(read_bytes(fx.words("T.txt")) == b.text);
  }
  const Automaton& pf = s.word_automaton("PF");
  CHECK(pf.num_states() == 5);
  CHECK(fs::exists(fx.words("PF.txt")));

  // The files are user-editable: an existing file wins over the bundle.
  Fixture fx2("bundled_edit");
  fx2.put(fx2.home / "Word Automata Library" / "T.txt",
          "msd_2\n0 1\n0 -> 0\n1 -> 0\n");
  Session s2 = fx2.session();
  CHECK(s2.word_automaton("T").num_states() == 1);

  // Constants are not words.
  Fixture fx3("word_constant");
  fx3.put(fx3.home / "Word Automata Library" / "W.txt", "true\n");
  Session s3 = fx3.session();
  CHECK_THROWS_WITH_AS(s3.word_automaton("W"), "word W is not an automaton with output",
                       PredicateError);
}

TEST_CASE("eval can use word automata end to end") {
  Fixture fx("word_eval");
  Session s = fx.session();
  s.run_commands("eval overlap \"~E i, n n>0 & A k k<=n => T[i+k]=T[i+n+k]\";");
  CHECK(fx.out.str() == "TRUE\n");
  check_log(read_bytes(fx.result("overlap_log.txt")),
            {"n>0 has 2 states",
             "k<=n has 2 states",
             "T[(i+k)]=T[((i+n)+k)] has 12 states",
             "(k<=n=>T[(i+k)]=T[((i+n)+k)]) has 25 states",
             "(A k (k<=n=>T[(i+k)]=T[((i+n)+k)])) has 1 states",
             "(n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)]))) has 1 states",
             "(E i , n (n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)])))) has 1 states",
             "~(E i , n (n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)])))) has 1 states"});
}

TEST_CASE("stored automata come from the automata library directory") {
  Fixture fx("library");
  fx.put(fx.home / "Automata Library" / "succ.txt",
         "msd_2 msd_2\n0 0\n0 0 -> 0\n0 1 -> 1\n1 1 -> 0\n1 1\n1 0 -> 1\n");
  Session s = fx.session();
  s.run_commands("eval yes \"$succ(3,4)\"; eval no \"$succ(3,5)\";");
  CHECK(fx.out.str() == "TRUE\nFALSE\n");
}

TEST_CASE("text decoding handles byte order marks and line endings") {
  CHECK(decode_text("plain\n") == "plain\n");
  CHECK(decode_text("\xEF\xBB\xBFx=1\r\ny=2\r") == "x=1\ny=2\n");

  // UTF-16 little endian: "hi\n".
  std::string le = {'\xFF', '\xFE', 'h', '\0', 'i', '\0', '\n', '\0'};
  CHECK(decode_text(le) == "hi\n");
  // UTF-16 big endian: "hi\n".
  std::string be = {'\xFE', '\xFF', '\0', 'h', '\0', 'i', '\0', '\n'};
  CHECK(decode_text(be) == "hi\n");

  // Round trip, including a non-ASCII code point and a surrogate pair.
  const std::string text = "caf\xC3\xA9 \xF0\x9F\x8E\xB5\n";
  CHECK(decode_text(encode_utf16(text)) == text);
}

TEST_CASE("a UTF-16 command file loads transparently") {
  Fixture fx("utf16_load");
  fx.put(fx.home / "Command Files" / "u.txt", encode_utf16("eval u \"a=4\";\n"));
  Session s = fx.session();
  s.run_commands("load u.txt;");
  CHECK(fx.err.str().empty());
  CHECK(fs::exists(fx.result("u.txt")));
}

TEST_CASE("the UTF-16 output mode writes big-endian files with a BOM") {
  Fixture fx("utf16_write");
  fx.cfg.write_utf16 = true;
  Session s = fx.session();
  s.run_commands("eval t \"E a a=4\";");
  const std::string bytes = read_bytes(fx.result("t.txt"));
  REQUIRE(bytes.size() >= 2);
  CHECK(static_cast<unsigned char>(bytes[0]) == 0xFE);
  CHECK(static_cast<unsigned char>(bytes[1]) == 0xFF);
  CHECK(decode_text(bytes) == "true\n");
}

TEST_CASE("color mode wraps diagnostics in ANSI escapes") {
  Fixture fx("color");
  fx.cfg.color = true;
  Session s = fx.session();
  s.run_commands("foo;");
  CHECK(fx.err.str() == "\033[31minvalid command: foo\n\t: foo;\033[0m\n");
}

TEST_CASE("custom number systems load from the custom bases directory") {
  Fixture fx("custom");
  // Base 3 addition, written under the custom system's own name so the
  // digit alphabet is inferred from the transition table.
  NumberSystem b3 = *make_builtin_system("msd_3");
  std::string addition = write_automaton_text(b3.addition);
  std::string renamed;
  size_t p = 0;
  while (p < addition.size()) {
    size_t hit = addition.find("msd_3", p);
    if (hit == std::string::npos) {
      renamed += addition.substr(p);
      break;
    }
    renamed += addition.substr(p, hit - p) + "msd_c3";
    p = hit + 5;
  }
  fx.put(fx.home / "Custom Bases" / "msd_c3_addition.txt", renamed);

  Session s = fx.session();
  const NumberSystem& c3 = s.number_system("msd_c3");
  CHECK(c3.alphabet == std::vector<int>{0, 1, 2});
  for (long long y = 0; y <= 30; ++y)
    for (long long z = 0; z <= 30; ++z) {
      CHECK(testutil::accepts_values(c3.addition, c3, {y + z, y, z}));
      CHECK(!testutil::accepts_values(c3.addition, c3, {y + z + 1, y, z}));
    }
  for (long long a = 0; a <= 30; ++a)
    for (long long b = 0; b <= 30; ++b)
      CHECK(testutil::accepts_values(c3.less_than, c3, {a, b}) == (a < b));

  // The whole pipeline works against the custom system.
  s.run_commands("eval c3sum \"?msd_c3 E x x+x=4\";");
  CHECK(fx.out.str() == "TRUE\n");
  CHECK(fx.err.str().empty());

  // Asking for the opposite direction reverses the automata, with a warning.
  const NumberSystem& l3 = s.number_system("lsd_c3");
  CHECK(fx.err.str() ==
        "warning: number system lsd_c3 is derived by reversing the automata of msd_c3; "
        "check that the two systems differ only in reading direction\n");
  for (long long y = 0; y <= 20; ++y)
    for (long long z = 0; z <= 20; ++z)
      CHECK(testutil::accepts_values(l3.addition, l3, {y + z, y, z}));

  // The annotation shorthand reaches the same system.
  fx.out.str("");
  s.run_commands("eval c3b \"?c3 E x x+x=10\";");
  CHECK(fx.out.str() == "TRUE\n");
}

TEST_CASE("a custom system cannot be defined in terms of itself") {
  Fixture fx("custom_loop");
  fx.put(fx.home / "Custom Bases" / "msd_loop_addition.txt",
         "lsd_loop lsd_loop lsd_loop\n0 1\n0 0 0 -> 0\n");
  Session s = fx.session();
  fx.err.str("");
  s.run_commands("eval x \"?msd_loop a=1\";");
  CHECK(fx.err.str() ==
        "number system msd_loop is defined in terms of itself\n\t: char at 11\n"
        "\t: eval x \"?msd_loop a=1\";\n");
}
