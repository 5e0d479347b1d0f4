#include "autoprove/regex.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "autoprove/errors.hpp"

namespace autoprove {

const char* kRegexAlphabetMessage =
    "the input alphabet of an automaton generated from a regular expression must be a subset "
    "of {0,1,...,9}";

namespace {

using RegexPtr = std::unique_ptr<RegexNode>;

RegexPtr make(RegexNode::Kind k) {
  auto n = std::make_unique<RegexNode>();
  n->kind = k;
  return n;
}

class RegexParser {
 public:
  explicit RegexParser(const std::string& s) : s_(s) {}

  RegexPtr parse() {
    RegexPtr r = parse_union();
    if (pos_ != s_.size()) throw PredicateError("invalid regular expression", -1);
    return r;
  }

 private:
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  RegexPtr parse_union() {
    RegexPtr left = parse_concat();
    while (!done() && peek() == '|') {
      ++pos_;
      RegexPtr right = parse_concat();
      RegexPtr n = make(RegexNode::Kind::Union);
      n->children.push_back(std::move(left));
      n->children.push_back(std::move(right));
      left = std::move(n);
    }
    return left;
  }

  RegexPtr parse_concat() {
    std::vector<RegexPtr> parts;
    while (!done() && peek() != '|' && peek() != ')') {
      parts.push_back(parse_repeat());
    }
    if (parts.empty()) return make(RegexNode::Kind::Epsilon);
    if (parts.size() == 1) return std::move(parts[0]);
    RegexPtr n = make(RegexNode::Kind::Concat);
    n->children = std::move(parts);
    return n;
  }

  RegexPtr parse_repeat() {
    RegexPtr inner = parse_atom();
    while (!done() && (peek() == '*' || peek() == '+')) {
      RegexPtr n = make(peek() == '*' ? RegexNode::Kind::Star : RegexNode::Kind::Plus);
      ++pos_;
      n->children.push_back(std::move(inner));
      inner = std::move(n);
    }
    return inner;
  }

  RegexPtr parse_atom() {
    if (done()) throw PredicateError("invalid regular expression", -1);
    char c = peek();
    if (c >= '0' && c <= '9') {
      ++pos_;
      RegexPtr n = make(RegexNode::Kind::Literal);
      n->literal = c - '0';
      return n;
    }
    if (c == '.') {
      ++pos_;
      return make(RegexNode::Kind::Any);
    }
    if (c == '(') {
      ++pos_;
      RegexPtr inner = parse_union();
      if (done() || peek() != ')')
        throw PredicateError("unbalanced group in regular expression", -1);
      ++pos_;
      return inner;
    }
    if (c == '[') return parse_class();
    throw PredicateError("invalid regular expression", -1);
  }

  RegexPtr parse_class() {
    ++pos_;  // '['
    RegexPtr n = make(RegexNode::Kind::Class);
    if (!done() && peek() == '^') {
      n->complemented = true;
      ++pos_;
    }
    while (!done() && peek() != ']') {
      char c = peek();
      if (c < '0' || c > '9')
        throw PredicateError("malformed character class in regular expression", -1);
      ++pos_;
      int lo = c - '0';
      int hi = lo;
      if (!done() && peek() == '-') {
        ++pos_;
        if (done() || peek() < '0' || peek() > '9')
          throw PredicateError("malformed character class in regular expression", -1);
        hi = peek() - '0';
        ++pos_;
      }
      for (int d = lo; d <= hi; ++d) n->members.insert(d);
    }
    if (done()) throw PredicateError("malformed character class in regular expression", -1);
    ++pos_;  // ']'
    return n;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Thompson construction over alphabet codes, then subset construction.
// ---------------------------------------------------------------------------

struct Nfa {
  struct State {
    std::vector<std::pair<int, int>> sym;  // (code, dst)
    std::vector<int> eps;
  };
  std::vector<State> states;
  int add() {
    states.emplace_back();
    return static_cast<int>(states.size()) - 1;
  }
};

struct Frag {
  int start;
  int accept;
};

// Symbols the node matches, as codes into the domain alphabet. Symbols
// outside the domain simply contribute no edge (the alphabet-star
// intersection of the result).
std::vector<int> node_codes(const RegexNode& n, const TapeDomain& domain) {
  std::vector<int> codes;
  auto add_symbol = [&](int sym) {
    if (auto idx = domain.symbol_index(sym)) codes.push_back(*idx);
  };
  switch (n.kind) {
    case RegexNode::Kind::Literal:
      add_symbol(n.literal);
      break;
    case RegexNode::Kind::Any:
      for (int i = 0; i < static_cast<int>(domain.alphabet.size()); ++i) codes.push_back(i);
      break;
    case RegexNode::Kind::Class: {
      if (n.complemented) {
        for (int d = 0; d <= 9; ++d)
          if (!n.members.count(d)) add_symbol(d);
      } else {
        for (int d : n.members) add_symbol(d);
      }
      break;
    }
    default:
      throw std::logic_error("node_codes: not a symbol node");
  }
  return codes;
}

Frag build(const RegexNode& n, Nfa& nfa, const TapeDomain& domain) {
  switch (n.kind) {
    case RegexNode::Kind::Literal:
    case RegexNode::Kind::Any:
    case RegexNode::Kind::Class: {
      int s = nfa.add();
      int a = nfa.add();
      for (int code : node_codes(n, domain)) nfa.states[s].sym.push_back({code, a});
      return {s, a};
    }
    case RegexNode::Kind::Epsilon: {
      int s = nfa.add();
      return {s, s};
    }
    case RegexNode::Kind::Concat: {
      Frag cur = build(*n.children.front(), nfa, domain);
      for (size_t i = 1; i < n.children.size(); ++i) {
        Frag next = build(*n.children[i], nfa, domain);
        nfa.states[cur.accept].eps.push_back(next.start);
        cur.accept = next.accept;
      }
      return cur;
    }
    case RegexNode::Kind::Union: {
      Frag f1 = build(*n.children[0], nfa, domain);
      Frag f2 = build(*n.children[1], nfa, domain);
      int s = nfa.add();
      int a = nfa.add();
      nfa.states[s].eps.push_back(f1.start);
      nfa.states[s].eps.push_back(f2.start);
      nfa.states[f1.accept].eps.push_back(a);
      nfa.states[f2.accept].eps.push_back(a);
      return {s, a};
    }
    case RegexNode::Kind::Star: {
      Frag f = build(*n.children[0], nfa, domain);
      int s = nfa.add();
      int a = nfa.add();
      nfa.states[s].eps.push_back(f.start);
      nfa.states[s].eps.push_back(a);
      nfa.states[f.accept].eps.push_back(f.start);
      nfa.states[f.accept].eps.push_back(a);
      return {s, a};
    }
    case RegexNode::Kind::Plus: {
      Frag f = build(*n.children[0], nfa, domain);
      int a = nfa.add();
      nfa.states[f.accept].eps.push_back(f.start);
      nfa.states[f.accept].eps.push_back(a);
      return {f.start, a};
    }
  }
  throw std::logic_error("build: unreachable");
}

std::vector<int> eps_closure(const Nfa& nfa, std::vector<int> set) {
  std::vector<char> in(nfa.states.size(), 0);
  std::vector<int> stack = set;
  for (int s : set) in[s] = 1;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : nfa.states[s].eps) {
      if (!in[t]) {
        in[t] = 1;
        set.push_back(t);
        stack.push_back(t);
      }
    }
  }
  std::sort(set.begin(), set.end());
  return set;
}

}  // namespace

std::unique_ptr<RegexNode> parse_regex(const std::string& src) {
  return RegexParser(src).parse();
}

Automaton compile_regex(const RegexNode& ast, const TapeDomain& domain) {
  // Bare alphabets must be writable as single digit characters; number
  // systems keep their full digit set (symbols above 9 are reachable only
  // through `.` and complemented classes).
  if (!domain.is_number_system()) {
    for (int sym : domain.alphabet) {
      if (sym < 0 || sym > 9) throw PredicateError(kRegexAlphabetMessage, -1);
    }
  }
  Nfa nfa;
  Frag frag = build(ast, nfa, domain);

  const int num_codes = static_cast<int>(domain.alphabet.size());
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> worklist;
  std::vector<std::vector<int>> trans;  // state -> per-code dst (-1 none)
  std::vector<int> final_flags;

  auto intern = [&](std::vector<int> set) {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(ids.size());
    ids.emplace(set, id);
    worklist.push_back(set);
    trans.emplace_back(num_codes, -1);
    final_flags.push_back(
        std::binary_search(set.begin(), set.end(), frag.accept) ? 1 : 0);
    return id;
  };

  intern(eps_closure(nfa, {frag.start}));
  for (size_t w = 0; w < worklist.size(); ++w) {
    std::vector<int> set = worklist[w];
    for (int code = 0; code < num_codes; ++code) {
      std::vector<int> next;
      for (int s : set) {
        for (auto [c, dst] : nfa.states[s].sym) {
          if (c == code) next.push_back(dst);
        }
      }
      if (next.empty()) continue;
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      int dst_id = intern(eps_closure(nfa, std::move(next)));
      trans[w][code] = dst_id;
    }
  }

  Automaton a({domain}, static_cast<int>(trans.size()));
  for (size_t s = 0; s < trans.size(); ++s) {
    a.set_output(static_cast<int>(s), final_flags[s]);
    for (int code = 0; code < num_codes; ++code) {
      if (trans[s][code] >= 0) a.add_edge(static_cast<int>(s), code, trans[s][code]);
    }
  }
  return canonicalize(a);
}

Automaton regex_to_automaton(const std::string& src, const TapeDomain& domain) {
  return compile_regex(*parse_regex(src), domain);
}

}  // namespace autoprove
