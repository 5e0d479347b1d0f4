#include <filesystem>
#include <string>

#include "autoprove/automaton.hpp"
#include "autoprove/bundled_words.hpp"
#include "autoprove/errors.hpp"
#include "autoprove/evaluator.hpp"
#include "autoprove/format.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace autoprove;
using testutil::read_bytes;

namespace {

std::string golden(const std::string& name) {
  return read_bytes(std::filesystem::path(TEST_GOLDEN_DIR) / name);
}

DomainResolver resolver() { return testutil::env_resolver(testutil::shared_env()); }

}  // namespace

TEST_CASE("the successor automaton file parses and re-serializes canonically") {
  const std::string input = golden("two_inputs.txt");
  Automaton a = parse_automaton_text(input, resolver());
  REQUIRE(a.num_tapes() == 2);
  CHECK(a.tapes()[0].system == "msd_2");
  CHECK(a.tapes()[1].system == "msd_2");
  CHECK(a.num_states() == 2);
  // b = a+1 on naturals: (a,b) = (1,2) is 01,10; (3,4) is 011,100.
  CHECK(accepts(a, {{0, 1}, {1, 0}}));
  CHECK(accepts(a, {{0, 1}, {1, 0}, {1, 0}}));
  CHECK(!accepts(a, {{1, 1}}));
  CHECK(write_automaton_text(a) == golden("two_inputs.canonical.txt"));
}

TEST_CASE("word automaton files parse with braced alphabets and wildcards") {
  const std::string input = golden("PF.txt");
  Automaton pf = parse_automaton_text(input, resolver());
  REQUIRE(pf.num_tapes() == 2);
  CHECK(pf.tapes()[0].system == "");
  CHECK(pf.tapes()[0].alphabet == std::vector<int>{-1, 1});
  CHECK(pf.tapes()[1].system == "lsd_2");
  CHECK(pf.num_states() == 5);
  // State 0 on (-1,0) and (1,0) both go to 0: the wildcard expanded.
  CHECK(*pf.next(0, *pf.encode({-1, 0})) == 0);
  CHECK(*pf.next(0, *pf.encode({1, 0})) == 0);
  CHECK(*pf.next(0, *pf.encode({1, 1})) == 1);
  CHECK(*pf.next(0, *pf.encode({-1, 1})) == 2);
  CHECK(pf.output(2) == -1);
  CHECK(write_automaton_text(pf) == golden("PF.canonical.txt"));
}

TEST_CASE("bundled word texts match the committed goldens") {
  for (const BundledWord& w : bundled_words()) {
    CHECK(w.text == golden(w.name + ".txt"));
  }
}

TEST_CASE("single-word files denote the constant automata") {
  CHECK(parse_automaton_text("true", resolver()).is_true());
  CHECK(parse_automaton_text("false\n", resolver()).is_false());
  CHECK(write_automaton_text(Automaton::true_automaton()) == "true\n");
  CHECK(write_automaton_text(Automaton::false_automaton()) == "false\n");
}

TEST_CASE("parse rejects malformed files") {
  auto r = resolver();
  // Unknown number system in the header.
  CHECK_THROWS_AS(parse_automaton_text("tsd_2\n0 1\n", r), PredicateError);
  // Transition arity must match the tape count.
  CHECK_THROWS_AS(parse_automaton_text("msd_2 msd_2\n0 1\n0 -> 0\n", r), PredicateError);
  // Symbols must belong to the tape alphabet.
  CHECK_THROWS_AS(parse_automaton_text("msd_2\n0 1\n2 -> 0\n", r), PredicateError);
  // Conflicting transitions (also via wildcard overlap) are rejected.
  CHECK_THROWS_AS(parse_automaton_text("msd_2\n0 1\n0 -> 0\n0 -> 1\n1 1\n", r),
                  PredicateError);
  CHECK_THROWS_AS(parse_automaton_text("msd_2\n0 1\n* -> 0\n0 -> 1\n1 1\n", r),
                  PredicateError);
  // States must be declared densely from zero.
  CHECK_THROWS_AS(parse_automaton_text("msd_2\n1 1\n0 -> 1\n", r), PredicateError);
  // Empty files have no automaton.
  CHECK_THROWS_AS(parse_automaton_text("", r), PredicateError);
}

TEST_CASE("compiled automata round-trip through the text format") {
  testutil::TestEnv& env = testutil::shared_env();
  for (const char* pred : {"a=4", "a=b+1", "x+y=10", "?msd_fib a=b+c", "n>0"}) {
    Automaton a = compile_predicate(pred, env).automaton;
    Automaton back = parse_automaton_text(write_automaton_text(a), resolver());
    // Labels are not stored in files; restore them for comparison.
    std::vector<std::string> labels;
    for (const TapeDomain& t : a.tapes()) labels.push_back(t.label);
    back.relabel(labels);
    CHECK(language_equal(a, back));
    CHECK(write_automaton_text(back) == write_automaton_text(a));
  }
}

TEST_CASE("graphviz output marks initial and accepting states") {
  testutil::TestEnv& env = testutil::shared_env();
  Automaton four = compile_predicate("a=4", env).automaton;
  const std::string gv = write_graphviz(four, "four");
  CHECK(gv.find("digraph four") != std::string::npos);
  CHECK(gv.find("doublecircle") != std::string::npos);
  CHECK(gv.find("->") != std::string::npos);

  // Word automata label states with their outputs.
  Automaton pf = parse_automaton_text(golden("PF.txt"), resolver());
  const std::string wgv = write_graphviz(pf, "PF");
  CHECK(wgv.find("-1") != std::string::npos);

  const std::string tgv = write_graphviz(Automaton::true_automaton(), "t");
  CHECK(tgv.find("true") != std::string::npos);
}
