#include "autoprove/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "autoprove/compare.hpp"
#include "autoprove/errors.hpp"
#include "autoprove/word_automaton.hpp"

namespace autoprove {
namespace {

using Clock = std::chrono::steady_clock;

long long elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

bool is_logged_kind(NodeKind k) {
  switch (k) {
    case NodeKind::Compare:
    case NodeKind::Logic:
    case NodeKind::Not:
    case NodeKind::Reverse:
    case NodeKind::Quant:
    case NodeKind::Call:
      return true;
    default:
      return false;
  }
}

Automaton and_product(const Automaton& a, const Automaton& b) {
  return cross_product(a, b, boolean_combiner([](bool x, bool y) { return x && y; }));
}

Automaton or_product(const Automaton& a, const Automaton& b) {
  return cross_product(a, b, boolean_combiner([](bool x, bool y) { return x || y; }));
}

/// Accepts pairs of identical words over `dom`'s alphabet (two tapes).
Automaton make_diagonal(const TapeDomain& dom, const std::string& l1, const std::string& l2) {
  TapeDomain t = dom;
  t.label.clear();
  Automaton a({t, t}, 1);
  for (int sym : dom.alphabet) a.add_edge(0, *a.encode({sym, sym}), 0);
  a.set_output(0, 1);
  a.relabel({l1, l2});
  return a;
}

Automaton relabeled(Automaton a, const std::vector<std::string>& labels) {
  a.relabel(labels);
  return a;
}

/// Single number-system tape with the given label.
TapeDomain ns_tape(const NumberSystem& ns, const std::string& label) {
  return TapeDomain{label, ns.name, ns.alphabet};
}

std::vector<std::string> percent_labels(const Automaton& a) {
  std::vector<std::string> out;
  if (!a.is_machine()) return out;
  for (const auto& t : a.tapes()) {
    if (!t.label.empty() && t.label[0] == '%') out.push_back(t.label);
  }
  return out;
}

class Compiler {
 public:
  explicit Compiler(EvalEnv& env) : env_(env) {}

  Automaton run(const Node& root) { return compile(root); }

  std::vector<StepRecord> steps_;

 private:
  // -- fresh temporaries ----------------------------------------------------

  std::string fresh() { return "%" + std::to_string(temp_counter_++); }

  // -- synthesized base relations (memoized per number system) --------------

  const NumberSystem& ns_of(const std::string& name) { return env_.number_system(name); }

  Automaton not_within_valid(const Automaton& a) {
    if (!a.is_machine()) return a.is_true() ? Automaton::false_automaton()
                                            : Automaton::true_automaton();
    Automaton c = complement_within_alphabets(a);
    for (int i = 0; i < c.num_tapes(); ++i) {
      const TapeDomain& t = c.tapes()[i];
      if (!t.is_number_system()) continue;
      const Automaton& valid = ns_of(t.system).representable;
      if (is_universal(valid)) continue;
      c = intersect_positional(c, embed_tape(valid, c.tapes(), i));
    }
    return canonicalize(c);
  }

  /// Accepts representations of zero (all-zero words within R_S).
  Automaton synth_zero(const NumberSystem& ns) {
    TapeDomain t = ns_tape(ns, "%x");
    Automaton zeros(std::vector<TapeDomain>{t}, 1);
    zeros.set_output(0, 1);
    if (auto z = t.symbol_index(0)) zeros.add_edge(0, *z, 0);
    Automaton valid = ns.representable;
    valid.relabel({"%x"});
    return and_product(zeros, valid);
  }

  /// Accepts representations of the smallest nonzero value (1 in every
  /// built-in system): nonzero u with no nonzero v < u.
  const Automaton& synth_one(const NumberSystem& ns) {
    auto it = one_cache_.find(ns.name);
    if (it != one_cache_.end()) return it->second;
    Automaton zero = synth_zero(ns);                    // over %x
    Automaton nonzero = not_within_valid(zero);         // over %x
    Automaton smaller = and_product(relabeled(nonzero, {"%v"}),
                                    relabeled(ns.less_than, {"%v", "%x"}));
    Automaton exists_smaller = project_with_repair(smaller, {"%v"});
    Automaton one = and_product(nonzero, not_within_valid(exists_smaller));
    return one_cache_.emplace(ns.name, std::move(one)).first->second;
  }

  /// Accepts representations of the constant c (single tape labeled %x).
  const Automaton& synth_constant(const NumberSystem& ns, long long c) {
    auto key = std::make_pair(ns.name, c);
    auto it = const_cache_.find(key);
    if (it != const_cache_.end()) return it->second;
    Automaton result = Automaton::false_automaton();
    if (c == 0) {
      result = synth_zero(ns);
    } else {
      Automaton prev = synth_constant(ns, c - 1);
      prev.relabel({"%p"});
      Automaton one = synth_one(ns);
      one.relabel({"%o"});
      Automaton sum = relabeled(ns.addition, {"%x", "%p", "%o"});  // %x = %p + %o
      result = project_with_repair(and_product(and_product(sum, prev), one), {"%p", "%o"});
    }
    return const_cache_.emplace(key, std::move(result)).first->second;
  }

  /// Relation a = c*b over tapes (%x=a, %y=b).
  const Automaton& synth_mul(const NumberSystem& ns, long long c) {
    auto key = std::make_pair(ns.name, c);
    auto it = mul_cache_.find(key);
    if (it != mul_cache_.end()) return it->second;
    Automaton result = Automaton::false_automaton();
    if (c == 0) {
      Automaton zero = synth_zero(ns);  // %x
      Automaton any = Automaton::universal({ns_tape(ns, "%y")});
      result = and_product(zero, any);
    } else if (c == 1) {
      result = relabeled(ns.equal, {"%x", "%y"});
    } else {
      Automaton prev = synth_mul(ns, c - 1);
      prev.relabel({"%t", "%y"});  // %t = (c-1)*%y
      Automaton sum = relabeled(ns.addition, {"%x", "%t", "%y"});  // %x = %t + %y
      result = project_with_repair(and_product(sum, prev), {"%t"});
    }
    return mul_cache_.emplace(key, std::move(result)).first->second;
  }

  /// Relation a = floor(b/c) over tapes (%x=a, %y=b); c >= 1.
  const Automaton& synth_div(const NumberSystem& ns, long long c) {
    auto key = std::make_pair(ns.name, c);
    auto it = div_cache_.find(key);
    if (it != div_cache_.end()) return it->second;
    Automaton mul = synth_mul(ns, c);
    mul.relabel({"%t", "%x"});  // %t = c * %x
    Automaton sum = relabeled(ns.addition, {"%y", "%t", "%r"});  // %y = %t + %r
    Automaton bound = and_product(relabeled(synth_constant(ns, c), {"%c"}),
                                  relabeled(ns.less_than, {"%r", "%c"}));  // %r < c
    Automaton all = and_product(and_product(mul, sum), bound);
    Automaton result = project_with_repair(all, {"%t", "%r", "%c"});
    return div_cache_.emplace(key, std::move(result)).first->second;
  }

  /// Comparison of two value tracks labeled la, lb in number system ns.
  Automaton comparison(Cmp cmp, const NumberSystem& ns, const std::string& la,
                       const std::string& lb) {
    if (la == lb) {
      switch (cmp) {
        case Cmp::Eq:
        case Cmp::Le:
        case Cmp::Ge:
          return relabeled(ns.representable, {la});
        default:
          return Automaton::empty_language({ns_tape(ns, la)});
      }
    }
    auto lt = [&](const std::string& x, const std::string& y) {
      return relabeled(ns.less_than, {x, y});
    };
    auto eq = [&]() { return relabeled(ns.equal, {la, lb}); };
    switch (cmp) {
      case Cmp::Eq: return eq();
      case Cmp::Ne: return or_product(lt(la, lb), lt(lb, la));
      case Cmp::Lt: return lt(la, lb);
      case Cmp::Gt: return lt(lb, la);
      case Cmp::Le: return or_product(lt(la, lb), eq());
      case Cmp::Ge: return or_product(lt(lb, la), eq());
    }
    throw std::logic_error("comparison: unreachable");
  }

  // -- arithmetic lowering ---------------------------------------------------

  struct ArithVal {
    std::string label;
    std::string system;
    std::vector<Automaton> rels;
  };

  /// t = l + r as a relation, duplicating labels until all three tapes are
  /// distinct (t can coincide with an addend when subtraction reuses it).
  void emit_add(std::vector<Automaton>& rels, const NumberSystem& ns, const std::string& t,
                std::string l, std::string r) {
    auto split = [&](std::string& label) {
      std::string copy = fresh();
      rels.push_back(make_diagonal(ns_tape(ns, ""), copy, label));
      label = copy;
    };
    if (l == r) split(r);
    if (t == l) split(l);
    if (t == r) split(r);
    rels.push_back(relabeled(ns.addition, {t, l, r}));
  }

  ArithVal compile_arith(const Node& n) {
    switch (n.kind) {
      case NodeKind::Var:
        return {n.name, n.system, {}};
      case NodeKind::Number: {
        const NumberSystem& ns = ns_of(n.system);
        std::string t = fresh();
        return {t, n.system, {relabeled(synth_constant(ns, n.value), {t})}};
      }
      case NodeKind::Arith: {
        const NumberSystem& ns = ns_of(n.system);
        ArithVal l = compile_arith(*n.children[0]);
        ArithVal r = compile_arith(*n.children[1]);
        std::vector<Automaton> rels = std::move(l.rels);
        for (auto& a : r.rels) rels.push_back(std::move(a));
        std::string t = fresh();
        switch (n.arith_op) {
          case ArithOp::Add:
            emit_add(rels, ns, t, l.label, r.label);
            break;
          case ArithOp::Sub:
            // t = l - r over naturals: accept only when l = r + t has a
            // solution; pairs with no natural difference are rejected.
            emit_add(rels, ns, l.label, r.label, t);
            break;
          case ArithOp::Mul: {
            const Node& cn = n.children[0]->kind == NodeKind::Number ? *n.children[0]
                                                                     : *n.children[1];
            const ArithVal& vn = n.children[0]->kind == NodeKind::Number ? r : l;
            rels.push_back(relabeled(synth_mul(ns, cn.value), {t, vn.label}));
            break;
          }
          case ArithOp::Div:
            rels.push_back(relabeled(synth_div(ns, n.children[1]->value), {t, l.label}));
            break;
        }
        return {t, n.system, std::move(rels)};
      }
      default:
        throw std::logic_error("compile_arith: not an arithmetic node");
    }
  }

  /// Conjoins base with every rel, then projects all temporary tapes.
  Automaton finish_atom(Automaton base, std::vector<Automaton>& rels, int offset) {
    for (auto& r : rels) base = and_product(base, r);
    return project_with_repair(base, percent_labels(base), offset);
  }

  // -- word (indexing) expressions -------------------------------------------

  struct WordVal {
    Automaton automaton = Automaton::false_automaton();  // tapes = index labels
    std::vector<Automaton> rels;
  };

  WordVal compile_index(const Node& n) {
    Automaton w = env_.word_automaton(n.name);
    if (w.num_tapes() != static_cast<int>(n.children.size())) {
      throw PredicateError("word " + n.name + " requires " + std::to_string(w.num_tapes()) +
                               (w.num_tapes() == 1 ? " index" : " indices"),
                           n.offset);
    }
    WordVal out;
    std::vector<std::string> labels;
    for (size_t j = 0; j < n.children.size(); ++j) {
      const TapeDomain& tape = w.tapes()[j];
      std::string label = bind_argument(*n.children[j], tape, "word", n.name,
                                        static_cast<int>(j), n.offset, out.rels);
      if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
        std::string copy = fresh();
        out.rels.push_back(make_diagonal(tape, copy, label));
        label = copy;
      }
      labels.push_back(std::move(label));
    }
    w.relabel(labels);
    out.automaton = std::move(w);
    return out;
  }

  /// Resolves one argument of a call or indexing expression to a tape label,
  /// appending defining conjuncts to rels. `tape` is the stored automaton's
  /// tape the argument binds to.
  std::string bind_argument(const Node& arg, const TapeDomain& tape, const std::string& what,
                            const std::string& name, int j, int offset,
                            std::vector<Automaton>& rels) {
    Category c = category_of(arg);
    if (c == Category::NumberLiteral || c == Category::Variable || c == Category::Arithmetic) {
      ArithVal v = compile_arith(arg);
      if (tape.is_number_system() && tape.system != v.system) {
        throw PredicateError("argument " + std::to_string(j + 1) + " of " + what + " " + name +
                                 " must be in number system " + tape.system,
                             offset);
      }
      for (auto& r : v.rels) rels.push_back(std::move(r));
      return v.label;
    }
    if (c == Category::Automaton) {
      Automaton p = compile(arg);
      if (!p.is_machine() || p.num_tapes() != 1) {
        throw PredicateError("argument " + std::to_string(j + 1) + " of " + what + " " + name +
                                 " cannot be an automaton with != 1 inputs",
                             offset);
      }
      const TapeDomain& pt = p.tapes()[0];
      if (tape.is_number_system() && pt.is_number_system() && tape.system != pt.system) {
        throw PredicateError("argument " + std::to_string(j + 1) + " of " + what + " " + name +
                                 " must be in number system " + tape.system,
                             offset);
      }
      std::string label = pt.label;
      rels.push_back(std::move(p));
      return label;
    }
    throw PredicateError("argument " + std::to_string(j + 1) + " of " + what + " " + name +
                             " cannot be of type " + category_name(c),
                         offset);
  }

  // -- node compilation -------------------------------------------------------

  const Automaton* validity_for(const TapeDomain& tape) {
    if (!tape.is_number_system()) return nullptr;
    return &ns_of(tape.system).representable;
  }

  Automaton compile_compare(const Node& n) {
    const Node& l = *n.children[0];
    const Node& r = *n.children[1];
    Category lc = category_of(l);
    Category rc = category_of(r);
    auto arith = [](Category c) {
      return c == Category::NumberLiteral || c == Category::Variable ||
             c == Category::Arithmetic;
    };
    ValidityResolver resolver = [this](const TapeDomain& t) { return validity_for(t); };

    if (arith(lc) && arith(rc)) {
      const NumberSystem& ns = ns_of(n.system);
      ArithVal lv = compile_arith(l);
      ArithVal rv = compile_arith(r);
      Automaton base = comparison(n.cmp, ns, lv.label, rv.label);
      std::vector<Automaton> rels = std::move(lv.rels);
      for (auto& a : rv.rels) rels.push_back(std::move(a));
      return finish_atom(std::move(base), rels, n.offset);
    }
    if (lc == Category::AlphaConstant && rc == Category::AlphaConstant) {
      return cmp_eval(n.cmp, l.value, r.value) ? Automaton::true_automaton()
                                               : Automaton::false_automaton();
    }
    if (lc == Category::Word && rc == Category::AlphaConstant) {
      WordVal wv = compile_index(l);
      Automaton base = compare_word_constant(wv.automaton, n.cmp, static_cast<int>(r.value),
                                             resolver);
      return finish_atom(std::move(base), wv.rels, n.offset);
    }
    if (lc == Category::AlphaConstant && rc == Category::Word) {
      WordVal wv = compile_index(r);
      Automaton base = compare_word_constant(wv.automaton, cmp_swapped(n.cmp),
                                             static_cast<int>(l.value), resolver);
      return finish_atom(std::move(base), wv.rels, n.offset);
    }
    // word vs word
    WordVal lv = compile_index(l);
    WordVal rv = compile_index(r);
    Automaton base = compare_word_outputs(lv.automaton, rv.automaton, n.cmp, resolver);
    std::vector<Automaton> rels = std::move(lv.rels);
    for (auto& a : rv.rels) rels.push_back(std::move(a));
    return finish_atom(std::move(base), rels, n.offset);
  }

  Automaton compile_call(const Node& n) {
    Automaton a = env_.stored_automaton(n.name);
    if (a.is_machine() && !a.is_deterministic()) a = canonicalize(a);
    int arity = a.is_machine() ? a.num_tapes() : 0;
    if (arity != static_cast<int>(n.children.size())) {
      throw PredicateError("function " + n.name + " requires " + std::to_string(arity) +
                               (arity == 1 ? " argument" : " arguments"),
                           n.offset);
    }
    std::vector<Automaton> rels;
    std::vector<std::string> labels;
    for (size_t j = 0; j < n.children.size(); ++j) {
      const TapeDomain& tape = a.tapes()[static_cast<int>(j)];
      std::string label = bind_argument(*n.children[j], tape, "function", n.name,
                                        static_cast<int>(j), n.offset, rels);
      if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
        std::string copy = fresh();
        rels.push_back(make_diagonal(tape, copy, label));
        label = copy;
      }
      labels.push_back(std::move(label));
    }
    if (a.is_machine()) a.relabel(labels);
    return finish_atom(std::move(a), rels, n.offset);
  }

  Automaton compile_quant(const Node& n) {
    Automaton body = compile(*n.children[0]);
    std::vector<std::string> labels;
    for (const std::string& v : n.vars) {
      if (body.is_machine() && body.tape_index_of(v) >= 0) labels.push_back(v);
    }
    if (n.exists) return project_with_repair(body, labels, n.offset);
    return not_within_valid(project_with_repair(not_within_valid(body), labels, n.offset));
  }

  Automaton dispatch(const Node& n) {
    switch (n.kind) {
      case NodeKind::Compare:
        return compile_compare(n);
      case NodeKind::Logic: {
        Automaton l = compile(*n.children[0]);
        Automaton r = compile(*n.children[1]);
        switch (n.logic_op) {
          case LogicOp::And:
            return and_product(l, r);
          case LogicOp::Or:
            return or_product(l, r);
          case LogicOp::Xor:
            return cross_product(l, r,
                                 boolean_combiner([](bool x, bool y) { return x != y; }));
          case LogicOp::Implies:
            return cross_product(l, r,
                                 boolean_combiner([](bool x, bool y) { return !x || y; }));
          case LogicOp::Iff:
            return cross_product(l, r,
                                 boolean_combiner([](bool x, bool y) { return x == y; }));
        }
        throw std::logic_error("logic: unreachable");
      }
      case NodeKind::Not:
        return not_within_valid(compile(*n.children[0]));
      case NodeKind::Reverse:
        return reverse(compile(*n.children[0]));
      case NodeKind::Quant:
        return compile_quant(n);
      case NodeKind::Call:
        return compile_call(n);
      default:
        throw std::logic_error("dispatch: node is not of automaton type");
    }
  }

  Automaton compile(const Node& n) {
    auto t0 = Clock::now();
    long long attributed_before = attributed_ms_;
    Automaton result = Automaton::false_automaton();
    try {
      result = dispatch(n);
    } catch (PredicateError& e) {
      if (e.offset() < 0) throw PredicateError(e.what(), n.offset);
      throw;
    }
    if (is_logged_kind(n.kind)) {
      long long wall = elapsed_ms(t0);
      long long descendants = attributed_ms_ - attributed_before;
      long long own = wall - descendants;
      if (own < 0) own = 0;
      steps_.push_back(
          {to_display(n), result.is_machine() ? result.num_states() : 1, own});
      attributed_ms_ = attributed_before + wall;
    }
    return result;
  }

  EvalEnv& env_;
  int temp_counter_ = 0;
  long long attributed_ms_ = 0;
  std::map<std::string, Automaton> one_cache_;
  std::map<std::pair<std::string, long long>, Automaton> const_cache_;
  std::map<std::pair<std::string, long long>, Automaton> mul_cache_;
  std::map<std::pair<std::string, long long>, Automaton> div_cache_;
};

}  // namespace

Automaton project_with_repair(const Automaton& a, const std::vector<std::string>& labels,
                              int offset) {
  if (!a.is_machine() || labels.empty()) return a;

  std::vector<int> indices;
  for (const std::string& l : labels) {
    int idx = a.tape_index_of(l);
    if (idx >= 0) indices.push_back(idx);
  }
  if (indices.empty()) return a;
  if (static_cast<int>(indices.size()) == a.num_tapes())
    return is_empty(a) ? Automaton::false_automaton() : Automaton::true_automaton();

  std::sort(indices.rbegin(), indices.rend());
  Automaton p = a;
  for (int idx : indices) p = project_tape(p, idx);

  // Direction of the padding repair, from the remaining number-system tapes.
  bool has_msd = false, has_lsd = false;
  const TapeDomain* msd_tape = nullptr;
  const TapeDomain* lsd_tape = nullptr;
  for (const auto& t : p.tapes()) {
    if (!t.is_number_system()) continue;
    if (t.msd()) {
      has_msd = true;
      if (!msd_tape) msd_tape = &t;
    } else {
      has_lsd = true;
      if (!lsd_tape) lsd_tape = &t;
    }
  }
  if (has_msd && has_lsd) {
    throw PredicateError("cannot quantify when remaining variables mix msd and lsd: variable " +
                             msd_tape->label + " is in " + msd_tape->system + " and variable " +
                             lsd_tape->label + " is in " + lsd_tape->system,
                         offset);
  }

  std::optional<int> zero_code = p.encode(std::vector<int>(p.num_tapes(), 0));

  if (zero_code && (has_msd || has_lsd)) {
    if (has_msd) {
      // Close the initial set under leading zeros.
      std::vector<char> in(p.num_states(), 0);
      std::vector<int> stack = p.initial_states();
      for (int q : stack) in[q] = 1;
      while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (const auto& e : p.edges(q)) {
          if (e.code == *zero_code && !in[e.dst]) {
            in[e.dst] = 1;
            stack.push_back(e.dst);
          }
        }
      }
      std::vector<int> initial;
      for (int q = 0; q < p.num_states(); ++q)
        if (in[q]) initial.push_back(q);
      p.set_initial(std::move(initial));
    } else {
      // Make final every state that reaches a final state through trailing
      // zeros.
      std::vector<std::vector<int>> zero_preds(p.num_states());
      for (int q = 0; q < p.num_states(); ++q) {
        for (const auto& e : p.edges(q))
          if (e.code == *zero_code) zero_preds[e.dst].push_back(q);
      }
      std::vector<char> fin(p.num_states(), 0);
      std::vector<int> stack;
      for (int q = 0; q < p.num_states(); ++q) {
        if (p.is_final(q)) {
          fin[q] = 1;
          stack.push_back(q);
        }
      }
      while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int pr : zero_preds[q]) {
          if (!fin[pr]) {
            fin[pr] = 1;
            stack.push_back(pr);
          }
        }
      }
      for (int q = 0; q < p.num_states(); ++q)
        if (fin[q]) p.set_output(q, 1);
    }
  }

  return canonicalize(p);
}

EvalResult compile_ast(const Node& root, EvalEnv& env) {
  auto t0 = Clock::now();
  Compiler compiler(env);
  EvalResult result;
  result.automaton = compiler.run(root);
  result.steps = std::move(compiler.steps_);
  result.total_millis = elapsed_ms(t0);
  return result;
}

EvalResult compile_predicate(const std::string& source, EvalEnv& env) {
  std::unique_ptr<Node> root = parse_predicate(source);
  if (category_of(*root) != Category::Automaton)
    throw PredicateError("the final result of the evaluation is not of type automaton", -1);
  return compile_ast(*root, env);
}

}  // namespace autoprove
