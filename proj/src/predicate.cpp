#include "autoprove/predicate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "autoprove/errors.hpp"
#include "autoprove/number_system.hpp"

namespace autoprove {
namespace {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class Tok {
  Number,
  Alpha,
  Name,
  Annotation,
  Quantifier,  // E or A
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dollar,
  Plus,
  Minus,
  Star,
  Slash,
  Cmp,
  Tilde,
  Backtick,
  Amp,
  Pipe,
  Caret,
  Implies,
  Iff,
  End,
};

struct Token {
  Tok kind{};
  int offset = 0;
  long long num = 0;    // Number / Alpha
  std::string text;     // Name / Annotation
  Cmp cmp{};            // Cmp
  bool exists = true;   // Quantifier
};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = s.size();
  while (i < n) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.offset = static_cast<int>(i);
    if (is_digit(c)) {
      size_t j = i;
      while (j < n && is_digit(s[j])) ++j;
      t.kind = Tok::Number;
      t.num = std::stoll(s.substr(i, j - i));
      i = j;
    } else if (c == '@') {
      size_t j = i + 1;
      bool neg = false;
      if (j < n && s[j] == '-') {
        neg = true;
        ++j;
      }
      size_t d = j;
      while (j < n && is_digit(s[j])) ++j;
      if (j == d)
        throw PredicateError("expected a number after @", t.offset);
      t.kind = Tok::Alpha;
      t.num = std::stoll(s.substr(d, j - d));
      if (neg) t.num = -t.num;
      i = j;
    } else if (c == 'E' || c == 'A') {
      // Quantifiers are single-character tokens; a name cannot start with
      // E or A ("Ei,n" reads as "E i , n").
      t.kind = Tok::Quantifier;
      t.exists = (c == 'E');
      ++i;
    } else if (is_name_start(c)) {
      size_t j = i;
      while (j < n && is_name_char(s[j])) ++j;
      t.kind = Tok::Name;
      t.text = s.substr(i, j - i);
      i = j;
    } else if (c == '?') {
      size_t j = i + 1;
      while (j < n && is_name_char(s[j])) ++j;
      if (j == i + 1)
        throw PredicateError("expected a number system name after ?", t.offset);
      t.kind = Tok::Annotation;
      t.text = s.substr(i + 1, j - i - 1);
      i = j;
    } else {
      switch (c) {
        case '(': t.kind = Tok::LParen; ++i; break;
        case ')': t.kind = Tok::RParen; ++i; break;
        case '[': t.kind = Tok::LBracket; ++i; break;
        case ']': t.kind = Tok::RBracket; ++i; break;
        case ',': t.kind = Tok::Comma; ++i; break;
        case '$': t.kind = Tok::Dollar; ++i; break;
        case '+': t.kind = Tok::Plus; ++i; break;
        case '-': t.kind = Tok::Minus; ++i; break;
        case '*': t.kind = Tok::Star; ++i; break;
        case '/': t.kind = Tok::Slash; ++i; break;
        case '~': t.kind = Tok::Tilde; ++i; break;
        case '`': t.kind = Tok::Backtick; ++i; break;
        case '&': t.kind = Tok::Amp; ++i; break;
        case '|': t.kind = Tok::Pipe; ++i; break;
        case '^': t.kind = Tok::Caret; ++i; break;
        case '<':
          if (i + 2 < n && s[i + 1] == '=' && s[i + 2] == '>') {
            t.kind = Tok::Iff;
            i += 3;
          } else if (i + 1 < n && s[i + 1] == '=') {
            t.kind = Tok::Cmp;
            t.cmp = Cmp::Le;
            i += 2;
          } else {
            t.kind = Tok::Cmp;
            t.cmp = Cmp::Lt;
            ++i;
          }
          break;
        case '>':
          if (i + 1 < n && s[i + 1] == '=') {
            t.kind = Tok::Cmp;
            t.cmp = Cmp::Ge;
            i += 2;
          } else {
            t.kind = Tok::Cmp;
            t.cmp = Cmp::Gt;
            ++i;
          }
          break;
        case '=':
          if (i + 1 < n && s[i + 1] == '>') {
            t.kind = Tok::Implies;
            i += 2;
          } else {
            t.kind = Tok::Cmp;
            t.cmp = Cmp::Eq;
            ++i;
          }
          break;
        case '!':
          if (i + 1 < n && s[i + 1] == '=') {
            t.kind = Tok::Cmp;
            t.cmp = Cmp::Ne;
            i += 2;
          } else {
            throw PredicateError(std::string("illegal character ") + c, t.offset);
          }
          break;
        default:
          throw PredicateError(std::string("illegal character ") + c, t.offset);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.offset = static_cast<int>(n);
  out.push_back(end);
  return out;
}

std::string op_text(const Token& t) {
  switch (t.kind) {
    case Tok::Plus: return "+";
    case Tok::Minus: return "-";
    case Tok::Star: return "*";
    case Tok::Slash: return "/";
    case Tok::Cmp: return cmp_text(t.cmp);
    case Tok::Amp: return "&";
    case Tok::Pipe: return "|";
    case Tok::Caret: return "^";
    case Tok::Implies: return "=>";
    case Tok::Iff: return "<=>";
    case Tok::Tilde: return "~";
    case Tok::Backtick: return "`";
    default: return "?";
  }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

using NodePtr = std::unique_ptr<Node>;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  NodePtr parse() {
    NodePtr root = parse_expr(0);
    skip_annotations();
    const Token& t = peek();
    if (t.kind == Tok::RParen)
      throw PredicateError("unbalanced parenthesis", t.offset);
    if (t.kind == Tok::RBracket)
      throw PredicateError("unbalanced bracket", t.offset);
    if (t.kind != Tok::End)
      throw PredicateError("unexpected token", t.offset);
    return root;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  void skip_annotations() {
    while (peek().kind == Tok::Annotation) ++pos_;
  }

  static int binary_bp(const Token& t) {
    switch (t.kind) {
      case Tok::Star:
      case Tok::Slash: return 90;
      case Tok::Plus:
      case Tok::Minus: return 80;
      case Tok::Cmp: return 70;
      case Tok::Amp:
      case Tok::Pipe:
      case Tok::Caret: return 50;
      case Tok::Implies: return 40;
      case Tok::Iff: return 30;
      default: return -1;
    }
  }

  NodePtr parse_expr(int min_bp) {
    NodePtr left = parse_prefix();
    for (;;) {
      skip_annotations();
      const Token& t = peek();
      int bp = binary_bp(t);
      if (bp < min_bp) break;
      Token op = take();
      NodePtr right = parse_expr(bp + 1);  // all binary operators are left-associative
      left = make_binary(op, std::move(left), std::move(right));
    }
    return left;
  }

  NodePtr parse_prefix() {
    skip_annotations();
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Tilde:
      case Tok::Backtick: {
        Token op = take();
        NodePtr child = parse_expr(60);
        require_automaton(op, *child);
        NodePtr n = std::make_unique<Node>();
        n->kind = (op.kind == Tok::Tilde) ? NodeKind::Not : NodeKind::Reverse;
        n->offset = op.offset;
        n->children.push_back(std::move(child));
        return n;
      }
      case Tok::Quantifier: {
        Token op = take();
        NodePtr n = std::make_unique<Node>();
        n->kind = NodeKind::Quant;
        n->offset = op.offset;
        n->exists = op.exists;
        skip_annotations();
        for (;;) {
          const Token& v = peek();
          if (v.kind != Tok::Name)
            throw PredicateError("expected a variable after quantifier", v.offset);
          n->vars.push_back(take().text);
          skip_annotations();
          if (peek().kind != Tok::Comma) break;
          take();
          skip_annotations();
        }
        NodePtr body = parse_expr(20);
        require_automaton(op, *body);
        n->children.push_back(std::move(body));
        return n;
      }
      default:
        return parse_atom();
    }
  }

  NodePtr parse_atom() {
    skip_annotations();
    Token t = take();
    switch (t.kind) {
      case Tok::Number: {
        NodePtr n = std::make_unique<Node>();
        n->kind = NodeKind::Number;
        n->offset = t.offset;
        n->value = t.num;
        return n;
      }
      case Tok::Alpha: {
        NodePtr n = std::make_unique<Node>();
        n->kind = NodeKind::AlphaConst;
        n->offset = t.offset;
        n->value = t.num;
        return n;
      }
      case Tok::LParen: {
        NodePtr inner = parse_expr(0);
        skip_annotations();
        if (peek().kind != Tok::RParen)
          throw PredicateError("unbalanced parenthesis", t.offset);
        take();
        return inner;
      }
      case Tok::Dollar: {
        skip_annotations();
        const Token& nm = peek();
        if (nm.kind != Tok::Name)
          throw PredicateError("expected a function name after $", nm.offset);
        Token name = take();
        NodePtr n = std::make_unique<Node>();
        n->kind = NodeKind::Call;
        n->offset = name.offset;
        n->name = name.text;
        skip_annotations();
        const Token& lp = peek();
        if (lp.kind != Tok::LParen)
          throw PredicateError("expected ( after function name", lp.offset);
        Token open = take();
        skip_annotations();
        if (peek().kind != Tok::RParen) {
          for (;;) {
            n->children.push_back(parse_expr(0));
            skip_annotations();
            if (peek().kind != Tok::Comma) break;
            take();
          }
        }
        skip_annotations();
        if (peek().kind != Tok::RParen)
          throw PredicateError("unbalanced parenthesis", open.offset);
        take();
        return n;
      }
      case Tok::Name: {
        if (peek().kind == Tok::LBracket) {
          NodePtr n = std::make_unique<Node>();
          n->kind = NodeKind::Index;
          n->offset = t.offset;
          n->name = t.text;
          while (peek().kind == Tok::LBracket) {
            Token open = take();
            NodePtr idx = parse_expr(0);
            Category c = category_of(*idx);
            if (c == Category::Word || c == Category::AlphaConstant) {
              throw PredicateError("operator [] cannot be applied to the operand " +
                                       to_display(*idx) + " of type " + category_name(c),
                                   open.offset);
            }
            skip_annotations();
            if (peek().kind != Tok::RBracket)
              throw PredicateError("unbalanced bracket", open.offset);
            take();
            n->children.push_back(std::move(idx));
          }
          return n;
        }
        NodePtr n = std::make_unique<Node>();
        n->kind = NodeKind::Var;
        n->offset = t.offset;
        n->name = t.text;
        return n;
      }
      default:
        throw PredicateError("expected an operand", t.offset);
    }
  }

  static bool is_arith_category(Category c) {
    return c == Category::NumberLiteral || c == Category::Variable ||
           c == Category::Arithmetic;
  }

  static void require_automaton(const Token& op, const Node& operand) {
    Category c = category_of(operand);
    if (c != Category::Automaton) {
      throw PredicateError("operator " + op_text(op) + " cannot be applied to the operand " +
                               to_display(operand) + " of type " + category_name(c),
                           op.offset);
    }
  }

  NodePtr make_binary(const Token& op, NodePtr left, NodePtr right) {
    switch (op.kind) {
      case Tok::Plus:
      case Tok::Minus:
      case Tok::Star:
      case Tok::Slash:
        return make_arith(op, std::move(left), std::move(right));
      case Tok::Cmp:
        return make_compare(op, std::move(left), std::move(right));
      case Tok::Amp:
      case Tok::Pipe:
      case Tok::Caret:
      case Tok::Implies:
      case Tok::Iff: {
        require_automaton(op, *left);
        require_automaton(op, *right);
        NodePtr n = std::make_unique<Node>();
        n->kind = NodeKind::Logic;
        n->offset = op.offset;
        switch (op.kind) {
          case Tok::Amp: n->logic_op = LogicOp::And; break;
          case Tok::Pipe: n->logic_op = LogicOp::Or; break;
          case Tok::Caret: n->logic_op = LogicOp::Xor; break;
          case Tok::Implies: n->logic_op = LogicOp::Implies; break;
          default: n->logic_op = LogicOp::Iff; break;
        }
        n->children.push_back(std::move(left));
        n->children.push_back(std::move(right));
        return n;
      }
      default:
        throw std::logic_error("make_binary: not a binary operator");
    }
  }

  NodePtr make_arith(const Token& op, NodePtr left, NodePtr right) {
    for (const Node* side : {left.get(), right.get()}) {
      Category c = category_of(*side);
      if (!is_arith_category(c)) {
        throw PredicateError("operator " + op_text(op) + " cannot be applied to the operand " +
                                 to_display(*side) + " of type " + category_name(c),
                             op.offset);
      }
    }
    const bool lconst = left->kind == NodeKind::Number;
    const bool rconst = right->kind == NodeKind::Number;
    if (op.kind == Tok::Star && !lconst && !rconst) {
      throw PredicateError("operator * requires a constant operand", op.offset);
    }
    if (op.kind == Tok::Slash) {
      if (!rconst) throw PredicateError("operator / requires a constant divisor", op.offset);
      if (right->value == 0) throw PredicateError("division by zero", op.offset);
    }
    if (lconst && rconst) {
      long long v = 0;
      switch (op.kind) {
        case Tok::Plus: v = left->value + right->value; break;
        case Tok::Minus: v = left->value - right->value; break;
        case Tok::Star: v = left->value * right->value; break;
        default: v = left->value / right->value; break;
      }
      if (v < 0)
        throw PredicateError("constant expression evaluates to a negative number", op.offset);
      NodePtr n = std::make_unique<Node>();
      n->kind = NodeKind::Number;
      n->offset = left->offset;
      n->value = v;
      return n;
    }
    NodePtr n = std::make_unique<Node>();
    n->kind = NodeKind::Arith;
    n->offset = op.offset;
    switch (op.kind) {
      case Tok::Plus: n->arith_op = ArithOp::Add; break;
      case Tok::Minus: n->arith_op = ArithOp::Sub; break;
      case Tok::Star: n->arith_op = ArithOp::Mul; break;
      default: n->arith_op = ArithOp::Div; break;
    }
    n->children.push_back(std::move(left));
    n->children.push_back(std::move(right));
    return n;
  }

  NodePtr make_compare(const Token& op, NodePtr left, NodePtr right) {
    Category lc = category_of(*left);
    Category rc = category_of(*right);
    const bool larith = is_arith_category(lc);
    const bool rarith = is_arith_category(rc);
    bool ok = false;
    if (larith && rarith) ok = true;
    if (lc == Category::Word &&
        (rc == Category::Word || rc == Category::AlphaConstant))
      ok = true;
    if (lc == Category::AlphaConstant &&
        (rc == Category::Word || rc == Category::AlphaConstant))
      ok = true;
    if (!ok) {
      throw PredicateError("operator " + op_text(op) + " cannot be applied to operands " +
                               to_display(*left) + " and " + to_display(*right) + " of types " +
                               category_name(lc) + " and " + category_name(rc) + " respectively",
                           op.offset);
    }
    NodePtr n = std::make_unique<Node>();
    n->kind = NodeKind::Compare;
    n->offset = op.offset;
    n->cmp = op.cmp;
    n->children.push_back(std::move(left));
    n->children.push_back(std::move(right));
    return n;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Number-system annotation resolution
// ---------------------------------------------------------------------------

struct Scope {
  int start;  // annotation offset
  int end;    // exclusive
  std::string system;
};

// An annotation is effective from its position to the end of the innermost
// group (parenthesis or bracket) containing it, or to the end of the
// predicate if it appears outside every group.
std::vector<Scope> annotation_scopes(const std::vector<Token>& toks, int source_len) {
  std::vector<Scope> scopes;
  std::vector<std::vector<size_t>> stack;  // open group -> indices of scopes awaiting close
  stack.emplace_back();                    // top level
  for (const Token& t : toks) {
    switch (t.kind) {
      case Tok::LParen:
      case Tok::LBracket:
        stack.emplace_back();
        break;
      case Tok::RParen:
      case Tok::RBracket:
        if (stack.size() > 1) {
          for (size_t idx : stack.back()) scopes[idx].end = t.offset;
          stack.pop_back();
        }
        break;
      case Tok::Annotation: {
        Scope sc;
        sc.start = t.offset;
        sc.end = source_len;
        sc.system = normalize_system_name(t.text);
        scopes.push_back(sc);
        stack.back().push_back(scopes.size() - 1);
        break;
      }
      default:
        break;
    }
  }
  return scopes;
}

class Annotator {
 public:
  Annotator(std::vector<Scope> scopes) : scopes_(std::move(scopes)) {}

  void run(Node& n) {
    assign(n);
    check_variable_consistency(n);
  }

 private:
  std::string effective(int pos) const {
    int best = -1;
    std::string sys = "msd_2";
    for (const Scope& sc : scopes_) {
      if (sc.start <= pos && pos < sc.end && sc.start > best) {
        best = sc.start;
        sys = sc.system;
      }
    }
    return sys;
  }

  void assign(Node& n) {
    for (auto& c : n.children) assign(*c);
    switch (n.kind) {
      case NodeKind::Number:
      case NodeKind::Var:
        n.system = effective(n.offset);
        break;
      case NodeKind::Arith: {
        const std::string& l = n.children[0]->system;
        const std::string& r = n.children[1]->system;
        check_same(n, l, r, arith_text(n.arith_op));
        n.system = l;
        break;
      }
      case NodeKind::Compare: {
        // Only arithmetic comparisons carry a number system.
        Category lc = category_of(*n.children[0]);
        Category rc = category_of(*n.children[1]);
        auto arith = [](Category c) {
          return c == Category::NumberLiteral || c == Category::Variable ||
                 c == Category::Arithmetic;
        };
        if (arith(lc) && arith(rc)) {
          const std::string& l = n.children[0]->system;
          const std::string& r = n.children[1]->system;
          check_same(n, l, r, cmp_text(n.cmp));
          n.system = l;
        }
        break;
      }
      default:
        break;
    }
  }

  static void check_same(const Node& n, const std::string& l, const std::string& r,
                         const std::string& op) {
    if (l != r) {
      throw PredicateError("operator " + op +
                               " cannot be applied to operands in two different number systems " +
                               l + " and " + r,
                           n.offset);
    }
  }

  static std::string arith_text(ArithOp op) {
    switch (op) {
      case ArithOp::Add: return "+";
      case ArithOp::Sub: return "-";
      case ArithOp::Mul: return "*";
      default: return "/";
    }
  }

  void check_variable_consistency(const Node& n) {
    if (n.kind == NodeKind::Var) {
      auto it = var_system_.find(n.name);
      if (it == var_system_.end()) {
        var_system_.emplace(n.name, n.system);
      } else if (it->second != n.system) {
        throw PredicateError("variable " + n.name +
                                 " cannot be in two different number systems " + it->second +
                                 " and " + n.system,
                             n.offset);
      }
    }
    for (const auto& c : n.children) check_variable_consistency(*c);
  }

  std::vector<Scope> scopes_;
  std::map<std::string, std::string> var_system_;
};

void collect_free(const Node& n, std::set<std::string>& bound, std::set<std::string>& out) {
  if (n.kind == NodeKind::Var) {
    if (!bound.count(n.name)) out.insert(n.name);
    return;
  }
  if (n.kind == NodeKind::Quant) {
    std::vector<std::string> added;
    for (const std::string& v : n.vars) {
      if (bound.insert(v).second) added.push_back(v);
    }
    collect_free(*n.children[0], bound, out);
    for (const std::string& v : added) bound.erase(v);
    return;
  }
  for (const auto& c : n.children) collect_free(*c, bound, out);
}

std::string logic_text(LogicOp op) {
  switch (op) {
    case LogicOp::And: return "&";
    case LogicOp::Or: return "|";
    case LogicOp::Xor: return "^";
    case LogicOp::Implies: return "=>";
    default: return "<=>";
  }
}

}  // namespace

Category category_of(const Node& n) {
  switch (n.kind) {
    case NodeKind::Number: return Category::NumberLiteral;
    case NodeKind::Var: return Category::Variable;
    case NodeKind::Arith: return Category::Arithmetic;
    case NodeKind::Index: return Category::Word;
    case NodeKind::AlphaConst: return Category::AlphaConstant;
    default: return Category::Automaton;
  }
}

std::string category_name(Category c) {
  switch (c) {
    case Category::NumberLiteral: return "number literal";
    case Category::Variable: return "variable";
    case Category::Arithmetic: return "arithmetic";
    case Category::Word: return "word";
    case Category::AlphaConstant: return "alphabetic constant";
    default: return "automaton";
  }
}

std::string to_display(const Node& n) {
  switch (n.kind) {
    case NodeKind::Number:
      return std::to_string(n.value);
    case NodeKind::AlphaConst:
      return "@" + std::to_string(n.value);
    case NodeKind::Var:
      return n.name;
    case NodeKind::Arith: {
      static const char* ops[] = {"+", "-", "*", "/"};
      return "(" + to_display(*n.children[0]) + ops[static_cast<int>(n.arith_op)] +
             to_display(*n.children[1]) + ")";
    }
    case NodeKind::Compare:
      return to_display(*n.children[0]) + cmp_text(n.cmp) + to_display(*n.children[1]);
    case NodeKind::Logic:
      return "(" + to_display(*n.children[0]) + logic_text(n.logic_op) +
             to_display(*n.children[1]) + ")";
    case NodeKind::Not:
    case NodeKind::Reverse: {
      std::string body = to_display(*n.children[0]);
      if (body.empty() || body.front() != '(') body = "(" + body + ")";
      return (n.kind == NodeKind::Not ? "~" : "`") + body;
    }
    case NodeKind::Quant: {
      std::string s = "(";
      s += n.exists ? "E " : "A ";
      for (size_t i = 0; i < n.vars.size(); ++i) {
        if (i) s += " , ";
        s += n.vars[i];
      }
      s += " ";
      s += to_display(*n.children[0]);
      s += ")";
      return s;
    }
    case NodeKind::Call: {
      std::string s = "$" + n.name + "(";
      for (size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ",";
        s += to_display(*n.children[i]);
      }
      s += ")";
      return s;
    }
    case NodeKind::Index: {
      std::string s = n.name;
      for (const auto& c : n.children) s += "[" + to_display(*c) + "]";
      return s;
    }
  }
  return "";
}

std::vector<std::string> free_variables(const Node& n) {
  std::set<std::string> bound, out;
  collect_free(n, bound, out);
  return {out.begin(), out.end()};
}

std::unique_ptr<Node> parse_predicate(const std::string& source) {
  std::vector<Token> toks = tokenize(source);
  std::vector<Scope> scopes = annotation_scopes(toks, static_cast<int>(source.size()));
  Parser parser(toks);
  std::unique_ptr<Node> root = parser.parse();
  Annotator annotator(std::move(scopes));
  annotator.run(*root);
  return root;
}

}  // namespace autoprove
