#include <string>
#include <vector>

#include "autoprove/automaton.hpp"
#include "autoprove/errors.hpp"
#include "autoprove/evaluator.hpp"
#include "autoprove/predicate.hpp"
#include "doctest.h"
#include "support/oracle.hpp"
#include "support/test_util.hpp"

using namespace autoprove;
using testutil::shared_env;
using testutil::TestEnv;

namespace {

Automaton compiled(const std::string& src) {
  return compile_predicate(src, shared_env()).automaton;
}

std::string compile_error(const std::string& src, TestEnv& env) {
  try {
    compile_predicate(src, env);
  } catch (const PredicateError& e) {
    return std::string(e.what()) + "@" + std::to_string(e.offset());
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("compiled automata have the expected minimal state counts") {
  CHECK(compiled("a=4").num_states() == 4);
  CHECK(compiled("a=b+1").num_states() == 2);
  CHECK(compiled("k<=n").num_states() == 2);
  CHECK(compiled("n>0").num_states() == 2);
  CHECK(compiled("T[i+k]=T[i+n+k]").num_states() == 12);
}

TEST_CASE("tapes are labeled with the free variables in sorted order") {
  Automaton a = compiled("b=a+1");
  REQUIRE(a.num_tapes() == 2);
  CHECK(a.tapes()[0].label == "a");
  CHECK(a.tapes()[1].label == "b");
  CHECK(a.tapes()[0].system == "msd_2");
  // (a, b) with b = a + 1: a=1 is 01, b=2 is 10.
  CHECK(accepts(a, {{0, 1}, {1, 0}}));
  CHECK(!accepts(a, {{1, 0}, {0, 1}}));
}

TEST_CASE("the overlap-freeness run reproduces the reference step log") {
  EvalResult r = compile_predicate("~E i, n n>0 & A k k<=n => T[i+k]=T[i+n+k]",
                                   shared_env());
  CHECK(r.automaton.is_true());
  const std::vector<std::pair<std::string, int>> want = {
      {"n>0", 2},
      {"k<=n", 2},
      {"T[(i+k)]=T[((i+n)+k)]", 12},
      {"(k<=n=>T[(i+k)]=T[((i+n)+k)])", 25},
      {"(A k (k<=n=>T[(i+k)]=T[((i+n)+k)]))", 1},
      {"(n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)])))", 1},
      {"(E i , n (n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)]))))", 1},
      {"~(E i , n (n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)]))))", 1},
  };
  REQUIRE(r.steps.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) {
    CHECK(r.steps[i].display == want[i].first);
    CHECK(r.steps[i].states == want[i].second);
    CHECK(r.steps[i].millis >= 0);
  }
  CHECK(r.total_millis >= 0);
}

TEST_CASE("word indexing compares sequence letters") {
  // t(2n) = t(n) everywhere, so the automaton accepts every valid index.
  Automaton dbl = compiled("T[2*i]=T[i]");
  REQUIRE(dbl.num_tapes() == 1);
  NumberSystem msd2 = *make_builtin_system("msd_2");
  for (long long i = 0; i <= 64; ++i) CHECK(testutil::accepts_values(dbl, msd2, {i}));

  Automaton ones = compiled("T[i]=@1");
  for (long long i = 0; i <= 64; ++i)
    CHECK(testutil::accepts_values(ones, msd2, {i}) == (testutil::thue_morse(i) == 1));

  // Consecutive equal letters exist (t is overlap-free but not square-free).
  Automaton eq = compiled("T[i]=T[i+1]");
  bool found_true = false, found_false = false;
  for (long long i = 0; i <= 32; ++i) {
    bool got = testutil::accepts_values(eq, msd2, {i});
    CHECK(got == (testutil::thue_morse(i) == testutil::thue_morse(i + 1)));
    (got ? found_true : found_false) = true;
  }
  CHECK(found_true);
  CHECK(found_false);
}

TEST_CASE("subtraction reads relationally, not as an inverse") {
  NumberSystem msd2 = *make_builtin_system("msd_2");
  // a-1 has no value at a=0, which falsifies the comparison there...
  Automaton left = compiled("0<=a-1+1");
  CHECK(!testutil::accepts_values(left, msd2, {0}));
  for (long long a = 1; a <= 32; ++a) CHECK(testutil::accepts_values(left, msd2, {a}));
  // ...while a+1-1 is defined everywhere.
  Automaton right = compiled("0<=a+1-1");
  for (long long a = 0; a <= 32; ++a) CHECK(testutil::accepts_values(right, msd2, {a}));
  CHECK(!language_equal(left, right));
}

TEST_CASE("stored automata are invoked with positional arguments") {
  TestEnv env;
  env.words = shared_env().words;
  env.stored.emplace("sum10", compile_predicate("a+b=10", env).automaton);

  Automaton direct = compile_predicate("x+y=10", env).automaton;
  Automaton called = compile_predicate("$sum10(x,y)", env).automaton;
  CHECK(language_equal(direct, called));

  // Arguments can be arithmetic; the call introduces the needed glue.
  Automaton shifted = compile_predicate("$sum10(x+1,y)", env).automaton;
  Automaton expect = compile_predicate("x+1+y=10", env).automaton;
  CHECK(language_equal(shifted, expect));

  // Constants work, too.
  Automaton fixed = compile_predicate("$sum10(4,y)", env).automaton;
  Automaton expect2 = compile_predicate("4+y=10", env).automaton;
  CHECK(language_equal(fixed, expect2));

  CHECK(compile_error("$sum10(x)", env) == "function sum10 requires 2 arguments@1");
  CHECK(compile_error("$nope(x)", env) ==
        "automaton nope does not exist in the automata library@1");
  CHECK(compile_error("T[i][j]=@1", env) == "word T requires 1 index@0");
}

TEST_CASE("quantifying repairs the padding the witness needed") {
  // In b=a+1 the witness b needs one more significant digit than a, so a
  // plain projection misses the unpadded representations of a.
  Automaton pair = compiled("b=a+1");
  Automaton raw = canonicalize(project_label(pair, "b"));
  CHECK(!accepts(raw, {{1}}));  // 1 survives only as "01"
  CHECK(accepts(raw, {{0}, {1}}));

  Automaton repaired = project_with_repair(pair, {"b"});
  CHECK(accepts(repaired, {{1}}));
  CHECK(language_equal(repaired, compiled("E b b=a+1")));
  CHECK(is_universal(repaired));
  CHECK(compiled("A a E b b=a+1").is_true());
}

TEST_CASE("quantifier edge cases") {
  CHECK(compiled("E x x=4").is_true());
  CHECK(compiled("A x x=4").is_false());
  CHECK(compiled("E x x=4 & x=5").is_false());
  CHECK(compiled("A x E y y=x+1 & y>x").is_true());
  // Quantifying every variable of a multi-tape automaton hits the constant.
  CHECK(compiled("E x, y x+y=10").is_true());
  // Binding a variable that does not occur leaves the language alone.
  CHECK(language_equal(compiled("E q a=4"), compiled("a=4")));
}

TEST_CASE("mixing reading directions under a quantifier is rejected") {
  TestEnv env;
  CHECK(compile_error("E k k=k & x=x & (?lsd_2 y=y)", env) ==
        "cannot quantify when remaining variables mix msd and lsd: variable x is in "
        "msd_2 and variable y is in lsd_2@0");
}

TEST_CASE("duplicate labels collapse to a diagonal tape") {
  Automaton never = compiled("x<x");
  REQUIRE(never.num_tapes() == 1);
  CHECK(is_empty(never));
  Automaton always = compiled("x=x");
  REQUIRE(always.num_tapes() == 1);
  CHECK(is_universal(always));
}

TEST_CASE("compiled predicates match the integer oracle on small values") {
  TestEnv& env = shared_env();
  for (const testutil::CorpusEntry& e : testutil::corpus()) {
    std::vector<std::string> systems = {"msd_2"};
    if (!e.uses_word) {
      systems.push_back("lsd_2");
      systems.push_back("msd_fib");
    }
    for (const std::string& sys : systems) {
      std::string failure = testutil::check_corpus_entry(e, sys, env, 40);
      CHECK_MESSAGE(failure.empty(), failure);
    }
  }
}

TEST_CASE("logic identities hold as language equalities") {
  const std::vector<std::string> preds = {"x<y", "x=2*y", "T[x]=T[y]", "x+y=12"};
  for (const std::string& p : preds) {
    for (const std::string& q : preds) {
      Automaton a = compiled("~(" + p + " & " + q + ")");
      Automaton b = compiled("~(" + p + ") | ~(" + q + ")");
      CHECK(language_equal(a, b));
      Automaton c = compiled("~(~(" + p + "))");
      CHECK(language_equal(c, compiled(p)));
      Automaton d = compiled("(" + p + ") => (" + q + ")");
      CHECK(language_equal(d, compiled("~(" + p + ") | (" + q + ")")));
      Automaton x = compiled("(" + p + ") ^ (" + q + ")");
      CHECK(language_equal(x, compiled("((" + p + ")|(" + q + ")) & ~((" + p +
                                       ")&(" + q + "))")));
    }
  }
}

TEST_CASE("accepted languages are closed under representation padding") {
  NumberSystem msd2 = *make_builtin_system("msd_2");
  NumberSystem fib = *make_builtin_system("msd_fib");
  for (const char* src : {"a=4", "a=b+1", "x+y=10", "E t t+t=x & t>0"}) {
    Automaton a = compiled(src);
    std::vector<long long> vals(static_cast<size_t>(a.num_tapes()));
    // Padding an accepted tuple with up to 4 extra zero columns stays accepted.
    for (long long v = 0; v <= 20; ++v) {
      for (size_t i = 0; i < vals.size(); ++i) vals[i] = (v + 3 * (long long)i) % 21;
      for (int pad = 0; pad <= 4; ++pad) {
        CHECK(testutil::accepts_values(a, msd2, vals, pad) ==
              testutil::accepts_values(a, msd2, vals, 0));
      }
    }
  }
  Automaton f = compile_predicate("?msd_fib a=b+c", shared_env()).automaton;
  for (long long b = 0; b <= 10; ++b)
    for (long long c = 0; c <= 10; ++c)
      for (int pad = 0; pad <= 3; ++pad)
        CHECK(testutil::accepts_values(f, fib, {b + c, b, c}, pad));
}

TEST_CASE("a non-automaton top-level expression is rejected") {
  CHECK(compile_error("x+y", shared_env()) ==
        "the final result of the evaluation is not of type automaton@-1");
}
