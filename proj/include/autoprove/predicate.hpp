#pragma once

#include <memory>
#include <string>
#include <vector>

#include "autoprove/compare.hpp"

namespace autoprove {

enum class NodeKind {
  Number,      // natural constant (after folding)
  AlphaConst,  // output-alphabet constant @k (may be negative)
  Var,
  Arith,    // + - * /
  Compare,  // = != < > <= >=
  Not,
  Reverse,
  Logic,  // & | ^ => <=>
  Quant,  // E / A with a variable list
  Call,   // $name(args)
  Index,  // word[e1][e2]...
};

enum class ArithOp { Add, Sub, Mul, Div };
enum class LogicOp { And, Or, Xor, Implies, Iff };

struct Node {
  NodeKind kind{};
  int offset = -1;      ///< char offset into the predicate source
  long long value = 0;  ///< Number / AlphaConst payload
  std::string name;     ///< Var name, Call function name, Index word name
  ArithOp arith_op{};
  Cmp cmp{};
  LogicOp logic_op{};
  bool exists = true;              ///< Quant: E or A
  std::vector<std::string> vars;   ///< Quant bound variables
  std::string system;              ///< resolved number system (arithmetic nodes)
  std::vector<std::unique_ptr<Node>> children;
};

/// Operand category, as named in error messages.
enum class Category { NumberLiteral, Variable, Arithmetic, Word, AlphaConstant, Automaton };
Category category_of(const Node& n);
std::string category_name(Category c);

/// Tokenizes and parses a predicate, folds constant arithmetic, and
/// resolves number-system annotations onto variables, constants, and
/// arithmetic/comparison operators. Throws PredicateError carrying a char
/// offset into `source`.
std::unique_ptr<Node> parse_predicate(const std::string& source);

/// Canonical rendering: binary arithmetic always parenthesized, comparisons
/// bare, logical operators parenthesized, quantifiers as "(E x , y ...)",
/// complement/reverse prefixes on a parenthesized operand.
std::string to_display(const Node& n);

/// Free variables, byte-wise lexicographically sorted.
std::vector<std::string> free_variables(const Node& n);

}  // namespace autoprove
