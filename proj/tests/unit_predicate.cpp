#include <memory>
#include <string>
#include <vector>

#include "autoprove/errors.hpp"
#include "autoprove/predicate.hpp"
#include "doctest.h"

using namespace autoprove;

namespace {

std::string display(const std::string& src) { return to_display(*parse_predicate(src)); }

// Parses a predicate expected to fail and returns "<message>@<offset>".
std::string parse_error(const std::string& src) {
  try {
    parse_predicate(src);
  } catch (const PredicateError& e) {
    return std::string(e.what()) + "@" + std::to_string(e.offset());
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("canonical display parenthesizes arithmetic and logic, not comparisons") {
  CHECK(display("a=b+1") == "a=(b+1)");
  CHECK(display("x-3<=2") == "(x-3)<=2");
  CHECK(display("x = 2*y") == "x=(2*y)");
  CHECK(display("x/2=y") == "(x/2)=y");
  CHECK(display("x<y&y<z") == "(x<y&y<z)");
  CHECK(display("x<y | y<x") == "(x<y|y<x)");
  CHECK(display("~(x<y)") == "~(x<y)");
  CHECK(display("~x<y") == "~(x<y)");
  CHECK(display("x=1^y=2") == "(x=1^y=2)");
  CHECK(display("x=1<=>y=2") == "(x=1<=>y=2)");
  CHECK(display("T[2*i]=T[i]") == "T[(2*i)]=T[i]");
  CHECK(display("T[i]=@1") == "T[i]=@1");
  CHECK(display("$p(x,y+1)") == "$p(x,(y+1))");
  CHECK(display("$p(x, y+1) & x=1") == "($p(x,(y+1))&x=1)");
  CHECK(display("`(x=1)") == "`(x=1)");
}

TEST_CASE("constant arithmetic folds during parsing") {
  CHECK(display("2+3=x") == "5=x");
  CHECK(display("6/4=x") == "1=x");  // integer division floors
  CHECK(display("2*3+1=x") == "7=x");
  CHECK(parse_error("2-3=x") == "constant expression evaluates to a negative number@1");
  CHECK(parse_error("x/0=y") == "division by zero@1");
}

TEST_CASE("E and A at the start of an identifier are quantifiers") {
  CHECK(display("Ei,n n>0") == "(E i , n n>0)");
  CHECK(display("E i , n n>0") == "(E i , n n>0)");
  CHECK(display("Ak k<=n => k<9") == "(A k (k<=n=>k<9))");
  // ...but are ordinary letters elsewhere in a name.
  CHECK(display("xE=1") == "xE=1");
  CHECK(free_variables(*parse_predicate("xE=yA")) ==
        std::vector<std::string>{"xE", "yA"});
}

TEST_CASE("the quantified overlap sentence renders exactly") {
  CHECK(display("E i, n n>0 & A k k<=n => T[i+k]=T[i+n+k]") ==
        "(E i , n (n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)]))))");
  CHECK(display("~E i, n n>0 & A k k<=n => T[i+k]=T[i+n+k]") ==
        "~(E i , n (n>0&(A k (k<=n=>T[(i+k)]=T[((i+n)+k)]))))");
}

TEST_CASE("free variables are collected in sorted order") {
  CHECK(free_variables(*parse_predicate("k<=n => T[i+k]=T[i+n+k]")) ==
        std::vector<std::string>{"i", "k", "n"});
  CHECK(free_variables(*parse_predicate("E i, n n>0 & A k k<=n => T[i+k]=T[i+n+k]"))
            .empty());
  CHECK(free_variables(*parse_predicate("b=a+1")) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("malformed predicates report position and category") {
  CHECK(parse_error("(x+y=0") == "unbalanced parenthesis@0");
  CHECK(parse_error("x+y)=0") == "unbalanced parenthesis@3");
  CHECK(parse_error("(~x)=0") == "operator ~ cannot be applied to the operand x of type variable@1");
  CHECK(parse_error("T[i+j]=i-1") ==
        "operator = cannot be applied to operands T[(i+j)] and (i-1) of types word and "
        "arithmetic respectively@6");
  CHECK(parse_error("T[2]=1") ==
        "operator = cannot be applied to operands T[2] and 1 of types word and number "
        "literal respectively@4");
  CHECK(parse_error("x*y=z") == "operator * requires a constant operand@1");
  CHECK(parse_error("x/y=z") == "operator / requires a constant divisor@1");
  CHECK(parse_error("x # y") == "illegal character #@2");
  CHECK(parse_error("@x=1") == "expected a number after @@0");
  CHECK(parse_error("E 1 x=1") == "expected a variable after quantifier@2");
  CHECK(parse_error("x=") == "expected an operand@2");
}

TEST_CASE("number system annotations scope to the enclosing group") {
  // The default system is msd_2.
  std::unique_ptr<Node> d = parse_predicate("a=b+1");
  CHECK(d->system == "msd_2");

  std::unique_ptr<Node> f = parse_predicate("?msd_fib a=b+1");
  CHECK(f->system == "msd_fib");

  // Bare names normalize to msd_.
  std::unique_ptr<Node> two = parse_predicate("?2 x=1 & (?msd_2 x=2)");
  CHECK(two != nullptr);  // no mixed-system complaint

  // Operands of one comparison must agree.
  CHECK(parse_error("x=(?msd_3 y)") ==
        "operator = cannot be applied to operands in two different number systems "
        "msd_2 and msd_3@1");
  // One variable cannot live in two systems.
  CHECK(parse_error("x=1 & (?msd_3 x=2)") ==
        "variable x cannot be in two different number systems msd_2 and msd_3@14");
}

TEST_CASE("alphabet constants carry signed values") {
  std::unique_ptr<Node> n = parse_predicate("PF[i]=@-1");
  const Node& rhs = *n->children[1];
  CHECK(rhs.kind == NodeKind::AlphaConst);
  CHECK(rhs.value == -1);
  CHECK(to_display(*n) == "PF[i]=@-1");
}
