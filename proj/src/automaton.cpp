#include "autoprove/automaton.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <stdexcept>

#include "autoprove/errors.hpp"

namespace autoprove {

const std::string kAlphabetConflictMessage =
    "in computing cross product of two automata, variables with the same label must have the "
    "same alphabet";

std::optional<int> TapeDomain::symbol_index(int symbol) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), symbol);
  if (it == alphabet.end() || *it != symbol) return std::nullopt;
  return static_cast<int>(it - alphabet.begin());
}

Automaton::Automaton(std::vector<TapeDomain> tapes, int num_states)
    : tapes_(std::move(tapes)), initial_{0}, outputs_(num_states, 0), edges_(num_states) {
  if (num_states < 1) throw std::logic_error("automaton needs at least one state");
  for (const auto& t : tapes_) {
    if (t.alphabet.empty()) throw std::logic_error("tape alphabet must be non-empty");
    if (!std::is_sorted(t.alphabet.begin(), t.alphabet.end()))
      throw std::logic_error("tape alphabet must be sorted");
  }
}

Automaton Automaton::true_automaton() {
  Automaton a;
  a.kind_ = Kind::True;
  return a;
}

Automaton Automaton::false_automaton() {
  Automaton a;
  a.kind_ = Kind::False;
  return a;
}

Automaton Automaton::universal(std::vector<TapeDomain> tapes) {
  Automaton a(std::move(tapes), 1);
  a.set_output(0, 1);
  for (int c = 0; c < a.alphabet_size(); ++c) a.add_edge(0, c, 0);
  return a;
}

Automaton Automaton::empty_language(std::vector<TapeDomain> tapes) {
  return Automaton(std::move(tapes), 1);
}

void Automaton::set_initial(std::vector<int> initial) {
  std::sort(initial.begin(), initial.end());
  initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
  initial_ = std::move(initial);
}

void Automaton::add_edge(int src, int code, int dst) {
  auto& es = edges_[src];
  Edge e{code, dst};
  auto it = std::lower_bound(es.begin(), es.end(), e);
  if (it != es.end() && *it == e) return;  // duplicate
  es.insert(it, e);
}

void Automaton::add_edge(int src, const std::vector<int>& tuple, int dst) {
  auto code = encode(tuple);
  if (!code) throw std::invalid_argument("symbol tuple outside tape alphabets");
  add_edge(src, *code, dst);
}

std::optional<int> Automaton::next(int state, int code) const {
  const auto& es = edges_[state];
  auto it = std::lower_bound(es.begin(), es.end(), Edge{code, -1},
                             [](const Edge& a, const Edge& b) { return a.code < b.code; });
  if (it == es.end() || it->code != code) return std::nullopt;
  return it->dst;
}

int Automaton::alphabet_size() const {
  int n = 1;
  for (const auto& t : tapes_) n *= static_cast<int>(t.alphabet.size());
  return n;
}

std::optional<int> Automaton::encode(const std::vector<int>& tuple) const {
  if (tuple.size() != tapes_.size()) throw std::invalid_argument("symbol tuple arity mismatch");
  int code = 0;
  for (size_t i = 0; i < tapes_.size(); ++i) {
    auto idx = tapes_[i].symbol_index(tuple[i]);
    if (!idx) return std::nullopt;
    code = code * static_cast<int>(tapes_[i].alphabet.size()) + *idx;
  }
  return code;
}

std::vector<int> Automaton::decode(int code) const {
  std::vector<int> tuple(tapes_.size());
  for (size_t i = tapes_.size(); i-- > 0;) {
    int size = static_cast<int>(tapes_[i].alphabet.size());
    tuple[i] = tapes_[i].alphabet[code % size];
    code /= size;
  }
  return tuple;
}

bool Automaton::is_deterministic() const {
  if (kind_ != Kind::Machine) return true;
  if (initial_.size() != 1) return false;
  for (const auto& es : edges_) {
    for (size_t i = 1; i < es.size(); ++i)
      if (es[i].code == es[i - 1].code) return false;
  }
  return true;
}

bool Automaton::is_total() const {
  if (kind_ != Kind::Machine) return true;
  int codes = alphabet_size();
  for (const auto& es : edges_) {
    int distinct = 0;
    int prev = -1;
    for (const auto& e : es) {
      if (e.code != prev) ++distinct;
      prev = e.code;
    }
    if (distinct != codes) return false;
  }
  return true;
}

int Automaton::tape_index_of(const std::string& label) const {
  for (size_t i = 0; i < tapes_.size(); ++i)
    if (tapes_[i].label == label) return static_cast<int>(i);
  return -1;
}

bool Automaton::all_tapes_labeled() const {
  for (const auto& t : tapes_)
    if (t.label.empty()) return false;
  return true;
}

void Automaton::permute_tapes(const std::vector<int>& order) {
  // order[i] = index of the old tape that becomes new tape i.
  std::vector<TapeDomain> new_tapes(tapes_.size());
  for (size_t i = 0; i < order.size(); ++i) new_tapes[i] = tapes_[order[i]];

  // Remap every stored code into the permuted digit order.
  int codes = alphabet_size();
  std::vector<int> remap(codes);
  for (int c = 0; c < codes; ++c) {
    std::vector<int> tuple = decode(c);
    int nc = 0;
    for (size_t i = 0; i < order.size(); ++i) {
      const TapeDomain& t = tapes_[order[i]];
      nc = nc * static_cast<int>(t.alphabet.size()) + *t.symbol_index(tuple[order[i]]);
    }
    remap[c] = nc;
  }
  for (auto& es : edges_) {
    for (auto& e : es) e.code = remap[e.code];
    std::sort(es.begin(), es.end());
  }
  tapes_ = std::move(new_tapes);
}

void Automaton::relabel(const std::vector<std::string>& labels) {
  if (kind_ != Kind::Machine) return;
  if (labels.size() != tapes_.size()) throw std::logic_error("relabel arity mismatch");
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw std::logic_error("tape label must be non-empty");
    tapes_[i].label = labels[i];
  }
  std::vector<int> order(tapes_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return tapes_[a].label < tapes_[b].label; });
  for (size_t i = 1; i < order.size(); ++i)
    if (tapes_[order[i - 1]].label == tapes_[order[i]].label)
      throw std::logic_error("duplicate tape label");
  permute_tapes(order);
}

void Automaton::clear_labels() {
  for (auto& t : tapes_) t.label.clear();
}

bool accepts(const Automaton& a, const std::vector<std::vector<int>>& word) {
  if (a.is_true()) return true;
  if (a.is_false()) return false;
  std::vector<int> frontier = a.initial_states();
  for (const auto& tuple : word) {
    auto code = a.encode(tuple);
    if (!code) throw std::invalid_argument("input symbol outside tape alphabets");
    std::vector<int> next;
    for (int q : frontier) {
      for (const auto& e : a.edges(q)) {
        if (e.code == *code) next.push_back(e.dst);
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  for (int q : frontier)
    if (a.is_final(q)) return true;
  return false;
}

int run_with_output(const Automaton& a, const std::vector<std::vector<int>>& word) {
  if (!a.is_machine() || !a.is_deterministic())
    throw std::logic_error("run_with_output requires a deterministic machine");
  int q = a.initial_states()[0];
  for (const auto& tuple : word) {
    auto code = a.encode(tuple);
    if (!code) throw std::domain_error("input symbol outside tape alphabets");
    auto nxt = a.next(q, *code);
    if (!nxt) throw std::domain_error("input not in automaton domain");
    q = *nxt;
  }
  return a.output(q);
}

Automaton totalize(const Automaton& a, int* sink_index) {
  if (sink_index) *sink_index = -1;
  if (!a.is_machine()) return a;
  if (a.is_total()) return a;
  Automaton r(a.tapes(), a.num_states() + 1);
  r.set_initial(a.initial_states());
  int sink = a.num_states();
  if (sink_index) *sink_index = sink;
  int codes = a.alphabet_size();
  for (int q = 0; q < a.num_states(); ++q) {
    r.set_output(q, a.output(q));
    for (const auto& e : a.edges(q)) r.add_edge(q, e.code, e.dst);
    for (int c = 0; c < codes; ++c)
      if (!a.next(q, c)) r.add_edge(q, c, sink);
  }
  for (int c = 0; c < codes; ++c) r.add_edge(sink, c, sink);
  return r;
}

Automaton determinize(const Automaton& a) {
  if (!a.is_machine()) return a;
  if (a.is_deterministic()) return a;
  if (a.initial_states().empty()) return Automaton::empty_language(a.tapes());

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> subset) {
    auto [it, fresh] = ids.emplace(std::move(subset), static_cast<int>(subsets.size()));
    if (fresh) subsets.push_back(it->first);
    return it->second;
  };
  intern(a.initial_states());

  std::vector<std::vector<Automaton::Edge>> edges;
  std::vector<int> outputs;
  for (size_t s = 0; s < subsets.size(); ++s) {
    std::vector<int> subset = subsets[s];
    int out = 0;
    std::map<int, std::vector<int>> succ;
    for (int q : subset) {
      if (a.is_final(q)) out = 1;
      for (const auto& e : a.edges(q)) succ[e.code].push_back(e.dst);
    }
    outputs.push_back(out);
    edges.emplace_back();
    for (auto& [code, dsts] : succ) {
      std::sort(dsts.begin(), dsts.end());
      dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
      edges[s].push_back({code, intern(std::move(dsts))});
    }
  }

  Automaton r(a.tapes(), static_cast<int>(subsets.size()));
  for (size_t s = 0; s < subsets.size(); ++s) {
    r.set_output(static_cast<int>(s), outputs[s]);
    for (const auto& e : edges[s]) r.add_edge(static_cast<int>(s), e.code, e.dst);
  }
  return r;
}

namespace {

std::vector<char> forward_reachable(const Automaton& a) {
  std::vector<char> seen(a.num_states(), 0);
  std::queue<int> bfs;
  for (int q : a.initial_states()) {
    if (!seen[q]) {
      seen[q] = 1;
      bfs.push(q);
    }
  }
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (const auto& e : a.edges(q)) {
      if (!seen[e.dst]) {
        seen[e.dst] = 1;
        bfs.push(e.dst);
      }
    }
  }
  return seen;
}

std::vector<char> coaccessible(const Automaton& a) {
  std::vector<std::vector<int>> rev(a.num_states());
  for (int q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q)) rev[e.dst].push_back(q);
  std::vector<char> seen(a.num_states(), 0);
  std::queue<int> bfs;
  for (int q = 0; q < a.num_states(); ++q) {
    if (a.is_final(q)) {
      seen[q] = 1;
      bfs.push(q);
    }
  }
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (int p : rev[q]) {
      if (!seen[p]) {
        seen[p] = 1;
        bfs.push(p);
      }
    }
  }
  return seen;
}

}  // namespace

Automaton minimize(const Automaton& a) {
  if (!a.is_machine()) return a;
  if (!a.is_deterministic()) throw std::logic_error("minimize requires deterministic input");

  // Trim: keep states on a path from the initial state to some final state.
  std::vector<char> reach = forward_reachable(a);
  std::vector<char> coacc = coaccessible(a);
  std::vector<int> live_id(a.num_states(), -1);
  std::vector<int> live;
  for (int q = 0; q < a.num_states(); ++q) {
    if (reach[q] && coacc[q]) {
      live_id[q] = static_cast<int>(live.size());
      live.push_back(q);
    }
  }
  if (live.empty() || live_id[a.initial_states()[0]] < 0)
    return Automaton::empty_language(a.tapes());

  int n = static_cast<int>(live.size());
  // Partition refinement. Classes start from the output value; a missing
  // transition is the (implicit) dead class -1.
  std::vector<int> cls(n);
  {
    std::map<int, int> by_output;
    for (int i = 0; i < n; ++i) {
      auto [it, fresh] = by_output.emplace(a.output(live[i]), static_cast<int>(by_output.size()));
      cls[i] = it->second;
    }
  }
  for (;;) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next_cls(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> sig;
      sig.push_back(cls[i]);
      for (const auto& e : a.edges(live[i])) {
        if (live_id[e.dst] < 0) continue;  // edge into a dead region
        sig.push_back(e.code);
        sig.push_back(cls[live_id[e.dst]]);
      }
      auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      next_cls[i] = it->second;
    }
    bool stable = sig_ids.size() ==
                  static_cast<size_t>(1 + *std::max_element(cls.begin(), cls.end()));
    cls = std::move(next_cls);
    if (stable) break;
  }

  int num_classes = 1 + *std::max_element(cls.begin(), cls.end());
  // Canonical breadth-first renumbering from the initial class, following
  // edges in ascending code order.
  std::vector<int> order(num_classes, -1);
  std::vector<int> rep(num_classes, -1);
  for (int i = 0; i < n; ++i)
    if (rep[cls[i]] < 0) rep[cls[i]] = live[i];
  int next_id = 0;
  std::queue<int> bfs;
  int init_cls = cls[live_id[a.initial_states()[0]]];
  order[init_cls] = next_id++;
  bfs.push(init_cls);
  while (!bfs.empty()) {
    int c = bfs.front();
    bfs.pop();
    for (const auto& e : a.edges(rep[c])) {
      if (live_id[e.dst] < 0) continue;
      int dc = cls[live_id[e.dst]];
      if (order[dc] < 0) {
        order[dc] = next_id++;
        bfs.push(dc);
      }
    }
  }

  Automaton r(a.tapes(), next_id);
  for (int c = 0; c < num_classes; ++c) {
    if (order[c] < 0) continue;  // class unreachable in the quotient
    r.set_output(order[c], a.output(rep[c]));
    for (const auto& e : a.edges(rep[c])) {
      if (live_id[e.dst] < 0) continue;
      r.add_edge(order[c], e.code, order[cls[live_id[e.dst]]]);
    }
  }
  return r;
}

Automaton canonicalize(const Automaton& a) { return minimize(determinize(a)); }

OutputCombiner boolean_combiner(bool (*f)(bool, bool)) {
  return [f](std::optional<int> x, std::optional<int> y) {
    return f(x && *x != 0, y && *y != 0) ? 1 : 0;
  };
}

namespace {

Automaton apply_constant_side(bool constant_value, bool constant_on_left, const Automaton& m,
                              const OutputCombiner& combine) {
  std::optional<int> cv = constant_value ? 1 : 0;
  auto apply = [&](std::optional<int> out) {
    return constant_on_left ? combine(cv, out) : combine(out, cv);
  };
  bool fdead = apply(std::nullopt) != 0;
  bool f0 = apply(0) != 0;
  bool f1 = apply(1) != 0;
  if (fdead == f0 && f0 == f1)
    return f0 ? Automaton::true_automaton() : Automaton::false_automaton();
  int sink = -1;
  Automaton t = totalize(m, &sink);
  for (int q = 0; q < t.num_states(); ++q) {
    std::optional<int> out = (q == sink) ? std::nullopt : std::optional<int>(m.output(q));
    t.set_output(q, apply(out));
  }
  return minimize(t);
}

}  // namespace

Automaton cross_product(const Automaton& a, const Automaton& b, const OutputCombiner& combine) {
  if (!a.is_machine() && !b.is_machine()) {
    int out = combine(a.is_true() ? 1 : 0, b.is_true() ? 1 : 0);
    return out != 0 ? Automaton::true_automaton() : Automaton::false_automaton();
  }
  if (!a.is_machine()) return apply_constant_side(a.is_true(), true, b, combine);
  if (!b.is_machine()) return apply_constant_side(b.is_true(), false, a, combine);
  if (!a.all_tapes_labeled() || !b.all_tapes_labeled())
    throw std::logic_error("cross product requires labeled tapes");
  if (!a.is_deterministic() || !b.is_deterministic())
    throw std::logic_error("cross product requires deterministic operands");

  // Merge tape lists by label (both are sorted by label).
  std::vector<TapeDomain> tapes;
  std::vector<int> a_of;  // for each merged tape, index in a or -1
  std::vector<int> b_of;
  {
    size_t i = 0, j = 0;
    while (i < a.tapes().size() || j < b.tapes().size()) {
      if (j == b.tapes().size() ||
          (i < a.tapes().size() && a.tapes()[i].label < b.tapes()[j].label)) {
        tapes.push_back(a.tapes()[i]);
        a_of.push_back(static_cast<int>(i++));
        b_of.push_back(-1);
      } else if (i == a.tapes().size() || b.tapes()[j].label < a.tapes()[i].label) {
        tapes.push_back(b.tapes()[j]);
        a_of.push_back(-1);
        b_of.push_back(static_cast<int>(j++));
      } else {
        if (!a.tapes()[i].same_alphabet(b.tapes()[j]))
          throw PredicateError(kAlphabetConflictMessage);
        TapeDomain merged = a.tapes()[i];
        if (!merged.is_number_system() && b.tapes()[j].is_number_system())
          merged.system = b.tapes()[j].system;
        tapes.push_back(merged);
        a_of.push_back(static_cast<int>(i++));
        b_of.push_back(static_cast<int>(j++));
      }
    }
  }

  int sink_a = -1, sink_b = -1;
  Automaton ta = totalize(a, &sink_a);
  Automaton tb = totalize(b, &sink_b);

  // Precompute, for every merged code, the codes seen by each factor.
  Automaton shell(tapes, 1);
  int codes = shell.alphabet_size();
  std::vector<int> code_a(codes), code_b(codes);
  for (int c = 0; c < codes; ++c) {
    std::vector<int> tuple = shell.decode(c);
    std::vector<int> tup_a(ta.num_tapes()), tup_b(tb.num_tapes());
    for (size_t k = 0; k < tapes.size(); ++k) {
      if (a_of[k] >= 0) tup_a[a_of[k]] = tuple[k];
      if (b_of[k] >= 0) tup_b[b_of[k]] = tuple[k];
    }
    code_a[c] = *ta.encode(tup_a);
    code_b[c] = *tb.encode(tup_b);
  }

  std::map<std::pair<int, int>, int> ids;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](int qa, int qb) {
    auto [it, fresh] = ids.emplace(std::make_pair(qa, qb), static_cast<int>(pairs.size()));
    if (fresh) pairs.emplace_back(qa, qb);
    return it->second;
  };
  intern(ta.initial_states()[0], tb.initial_states()[0]);

  std::vector<int> outputs;
  std::vector<std::vector<Automaton::Edge>> edges;
  for (size_t s = 0; s < pairs.size(); ++s) {
    auto [qa, qb] = pairs[s];
    std::optional<int> oa = (qa == sink_a) ? std::nullopt : std::optional<int>(ta.output(qa));
    std::optional<int> ob = (qb == sink_b) ? std::nullopt : std::optional<int>(tb.output(qb));
    outputs.push_back(combine(oa, ob));
    edges.emplace_back();
    for (int c = 0; c < codes; ++c) {
      int da = *ta.next(qa, code_a[c]);
      int db = *tb.next(qb, code_b[c]);
      edges[s].push_back({c, intern(da, db)});
    }
  }

  Automaton r(tapes, static_cast<int>(pairs.size()));
  for (size_t s = 0; s < pairs.size(); ++s) {
    r.set_output(static_cast<int>(s), outputs[s]);
    for (const auto& e : edges[s]) r.add_edge(static_cast<int>(s), e.code, e.dst);
  }
  return minimize(r);
}

Automaton project_tape(const Automaton& a, int tape_index) {
  if (!a.is_machine()) throw std::logic_error("cannot project a constant automaton");
  if (tape_index < 0 || tape_index >= a.num_tapes())
    throw std::logic_error("projection tape out of range");
  if (a.num_tapes() == 1)
    return is_empty(a) ? Automaton::false_automaton() : Automaton::true_automaton();

  std::vector<TapeDomain> tapes;
  for (int i = 0; i < a.num_tapes(); ++i)
    if (i != tape_index) tapes.push_back(a.tapes()[i]);

  Automaton r(tapes, a.num_states());
  r.set_initial(a.initial_states());
  for (int q = 0; q < a.num_states(); ++q) {
    r.set_output(q, a.output(q));
    for (const auto& e : a.edges(q)) {
      std::vector<int> tuple = a.decode(e.code);
      tuple.erase(tuple.begin() + tape_index);
      r.add_edge(q, *r.encode(tuple), e.dst);
    }
  }
  return r;
}

Automaton project_label(const Automaton& a, const std::string& label) {
  int idx = a.tape_index_of(label);
  if (idx < 0) throw std::logic_error("no tape labeled " + label);
  return project_tape(a, idx);
}

Automaton reverse(const Automaton& a) {
  if (!a.is_machine()) return a;
  Automaton r(a.tapes(), a.num_states());
  std::vector<int> initial;
  for (int q = 0; q < a.num_states(); ++q) {
    if (a.is_final(q)) initial.push_back(q);
    for (const auto& e : a.edges(q)) r.add_edge(e.dst, e.code, q);
  }
  r.set_initial(std::move(initial));
  for (int q = 0; q < a.num_states(); ++q) r.set_output(q, 0);
  for (int q : a.initial_states()) r.set_output(q, 1);
  if (r.initial_states().empty()) return Automaton::empty_language(a.tapes());
  return canonicalize(r);
}

bool is_empty(const Automaton& a) {
  if (a.is_true()) return false;
  if (a.is_false()) return true;
  std::vector<char> reach = forward_reachable(a);
  for (int q = 0; q < a.num_states(); ++q)
    if (reach[q] && a.is_final(q)) return false;
  return true;
}

Automaton complement_within_alphabets(const Automaton& a) {
  if (a.is_true()) return Automaton::false_automaton();
  if (a.is_false()) return Automaton::true_automaton();
  if (!a.is_deterministic()) throw std::logic_error("complement requires deterministic input");
  Automaton t = totalize(a);
  for (int q = 0; q < t.num_states(); ++q) t.set_output(q, t.is_final(q) ? 0 : 1);
  return minimize(t);
}

bool is_universal(const Automaton& a) {
  if (!a.is_machine()) return a.is_true();
  return is_empty(complement_within_alphabets(a));
}

bool language_equal(const Automaton& a, const Automaton& b) {
  if (!a.is_machine() || !b.is_machine()) return a.kind() == b.kind();
  if (a.num_tapes() != b.num_tapes()) return false;
  for (int i = 0; i < a.num_tapes(); ++i)
    if (!a.tapes()[i].same_alphabet(b.tapes()[i])) return false;

  auto normalized = [](const Automaton& m) {
    Automaton c = m;
    for (int q = 0; q < c.num_states(); ++q) c.set_output(q, c.is_final(q) ? 1 : 0);
    return canonicalize(c);
  };
  Automaton ca = normalized(a);
  Automaton cb = normalized(b);
  if (ca.num_states() != cb.num_states()) return false;
  if (ca.outputs() != cb.outputs()) return false;
  for (int q = 0; q < ca.num_states(); ++q)
    if (ca.edges(q) != cb.edges(q)) return false;
  return true;
}

Automaton embed_tape(const Automaton& single, const std::vector<TapeDomain>& tapes,
                     int tape_index) {
  if (!single.is_machine() || single.num_tapes() != 1)
    throw std::logic_error("embed_tape requires a single-tape machine");
  if (!single.tapes()[0].same_alphabet(tapes[tape_index]))
    throw std::logic_error("embed_tape alphabet mismatch");

  Automaton r(tapes, single.num_states());
  r.set_initial(single.initial_states());
  int codes = r.alphabet_size();
  for (int q = 0; q < single.num_states(); ++q) {
    r.set_output(q, single.output(q));
    for (int c = 0; c < codes; ++c) {
      std::vector<int> tuple = r.decode(c);
      auto nxt = single.next(q, *single.tapes()[0].symbol_index(tuple[tape_index]));
      if (nxt) r.add_edge(q, c, *nxt);
    }
  }
  return r;
}

Automaton intersect_positional(const Automaton& a, const Automaton& b) {
  if (!a.is_machine() || !b.is_machine())
    throw std::logic_error("positional intersection requires machines");
  if (a.num_tapes() != b.num_tapes())
    throw std::logic_error("positional intersection arity mismatch");
  std::vector<std::string> labels;
  for (int i = 0; i < a.num_tapes(); ++i) {
    std::string l = "t";
    l += static_cast<char>('0' + i / 10);
    l += static_cast<char>('0' + i % 10);
    labels.push_back(l);
  }
  Automaton la = a;
  Automaton lb = b;
  la.relabel(labels);
  lb.relabel(labels);
  Automaton r = cross_product(la, lb, boolean_combiner([](bool x, bool y) { return x && y; }));
  for (int i = 0; i < r.num_tapes(); ++i) r.tapes()[i] = a.tapes()[i];
  return r;
}

}  // namespace autoprove
