#include "autoprove/number_system.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <stdexcept>

#include "autoprove/errors.hpp"

namespace autoprove {

namespace {

TapeDomain ns_tape(const std::string& name, const std::vector<int>& alphabet) {
  TapeDomain t;
  t.system = name;
  t.alphabet = alphabet;
  return t;
}

/// Restricts every tape of `a` to words accepted by the single-tape
/// automaton `validity`.
Automaton restrict_tapes(Automaton a, const Automaton& validity) {
  for (int i = 0; i < a.num_tapes(); ++i)
    a = intersect_positional(a, embed_tape(validity, a.tapes(), i));
  return minimize(a);
}

/// One-state automaton accepting pairs of identical words.
Automaton diagonal(const TapeDomain& tape) {
  Automaton d({tape, tape}, 1);
  d.set_output(0, 1);
  for (int sym : tape.alphabet) d.add_edge(0, std::vector<int>{sym, sym}, 0);
  return d;
}

/// Digit-order comparison of equally long digit strings: accepts (x, y) when
/// x precedes y in the order decided by the most significant differing
/// digit. For msd systems that is the first difference; for lsd systems the
/// last one.
Automaton digit_order_less_than(const TapeDomain& tape, bool msd) {
  if (msd) {
    // 0 = equal so far, 1 = decided less.
    Automaton lt({tape, tape}, 2);
    lt.set_output(0, 0);
    lt.set_output(1, 1);
    for (int a : tape.alphabet)
      for (int b : tape.alphabet) {
        if (a == b) lt.add_edge(0, std::vector<int>{a, b}, 0);
        if (a < b) lt.add_edge(0, std::vector<int>{a, b}, 1);
        lt.add_edge(1, std::vector<int>{a, b}, 1);
      }
    return minimize(lt);
  }
  // Verdict so far: 0 = equal, 1 = less, 2 = greater; a later difference
  // overrides an earlier one.
  Automaton lt({tape, tape}, 3);
  lt.set_output(0, 0);
  lt.set_output(1, 1);
  lt.set_output(2, 0);
  for (int s = 0; s < 3; ++s)
    for (int a : tape.alphabet)
      for (int b : tape.alphabet) {
        int dst = a == b ? s : (a < b ? 1 : 2);
        lt.add_edge(s, std::vector<int>{a, b}, dst);
      }
  return minimize(lt);
}

/// Rebuilds `a` with every tape widened to `alphabet` (a superset of each
/// tape's own alphabet), re-encoding the transitions.
Automaton widen_alphabets(const Automaton& a, const std::vector<int>& alphabet) {
  std::vector<TapeDomain> tapes = a.tapes();
  bool changed = false;
  for (auto& t : tapes) {
    if (t.alphabet != alphabet) {
      t.alphabet = alphabet;
      changed = true;
    }
  }
  if (!changed) return a;
  Automaton out(tapes, a.num_states());
  out.set_initial(a.initial_states());
  for (int q = 0; q < a.num_states(); ++q) {
    out.set_output(q, a.output(q));
    for (const auto& e : a.edges(q)) out.add_edge(q, a.decode(e.code), e.dst);
  }
  return out;
}

}  // namespace

TapeDomain NumberSystem::tape() const { return ns_tape(name, alphabet); }

NumberSystem make_base_k(int k, bool msd) {
  if (k < 2) throw std::invalid_argument("number system base must be at least 2");
  NumberSystem s;
  s.name = (msd ? "msd_" : "lsd_") + std::to_string(k);
  s.alphabet.resize(k);
  std::iota(s.alphabet.begin(), s.alphabet.end(), 0);
  TapeDomain t = ns_tape(s.name, s.alphabet);

  s.representable = minimize(Automaton::universal({t}));

  // Addition x = y + z over tapes (x, y, z). Reading most significant digit
  // first, the state is the running value of x - y - z over the prefixes
  // read so far; it can only return to zero from {0, 1}. Reading least
  // significant digit first, the state is the classic carry.
  Automaton add({t, t, t}, 2);
  add.set_output(0, 1);
  add.set_output(1, 0);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      for (int z = 0; z < k; ++z)
        for (int st = 0; st < 2; ++st) {
          if (msd) {
            int nxt = k * st + x - y - z;
            if (nxt == 0 || nxt == 1) add.add_edge(st, std::vector<int>{x, y, z}, nxt);
          } else {
            int carry_out = y + z + st - x;
            if (carry_out == 0 || carry_out == k)
              add.add_edge(st, std::vector<int>{x, y, z}, carry_out / k);
          }
        }
  s.addition = minimize(add);

  s.less_than = digit_order_less_than(t, msd);
  s.equal = minimize(diagonal(t));
  return s;
}

NumberSystem make_fibonacci(bool msd) {
  NumberSystem s;
  s.name = "msd_fib";
  s.alphabet = {0, 1};
  TapeDomain t = ns_tape(s.name, s.alphabet);

  // Valid representations: no two adjacent ones.
  Automaton repr({t}, 2);
  repr.set_output(0, 1);
  repr.set_output(1, 1);
  repr.add_edge(0, std::vector<int>{0}, 0);
  repr.add_edge(0, std::vector<int>{1}, 1);
  repr.add_edge(1, std::vector<int>{0}, 0);
  s.representable = minimize(repr);

  // Addition x = y + z over tapes (x, y, z), most significant digit first.
  // The state (a, b) says the digits read so far contribute a*W1 + b*W2 to
  // x - y - z, where W1 and W2 are the position weights of the next two
  // digits. Consuming a digit triple with difference d = x - y - z and
  // rebasing with W1 = W1' + W2' gives (a, b) -> (a + b + d, a + d). After
  // the last digit the residual weights are 1 and 0, so the sum is exact
  // iff a = 0. Coefficients that overflow a generous bound can never
  // return to zero and their transitions are dropped.
  constexpr int kBound = 64;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int a, int b) {
    auto [it, fresh] = index.emplace(std::make_pair(a, b), static_cast<int>(states.size()));
    if (fresh) states.emplace_back(a, b);
    return it->second;
  };
  intern(0, 0);
  struct RawEdge {
    int src, x, y, z, dst;
  };
  std::vector<RawEdge> raw;
  for (size_t i = 0; i < states.size(); ++i) {
    auto [a, b] = states[i];
    for (int x = 0; x <= 1; ++x)
      for (int y = 0; y <= 1; ++y)
        for (int z = 0; z <= 1; ++z) {
          int d = x - y - z;
          int a2 = a + b + d;
          int b2 = a + d;
          if (std::abs(a2) > kBound || std::abs(b2) > kBound) continue;
          raw.push_back({static_cast<int>(i), x, y, z, intern(a2, b2)});
        }
  }
  Automaton add({t, t, t}, static_cast<int>(states.size()));
  for (size_t i = 0; i < states.size(); ++i) add.set_output(static_cast<int>(i), states[i].first == 0 ? 1 : 0);
  for (const auto& e : raw) add.add_edge(e.src, std::vector<int>{e.x, e.y, e.z}, e.dst);
  s.addition = restrict_tapes(minimize(add), s.representable);

  s.less_than =
      restrict_tapes(digit_order_less_than(t, /*msd=*/true), s.representable);
  s.equal = restrict_tapes(diagonal(t), s.representable);

  if (!msd) return reverse_system(s, "lsd_fib");
  return s;
}

NumberSystem reverse_system(const NumberSystem& s, const std::string& new_name) {
  auto rev = [&](const Automaton& a) {
    Automaton out = reverse(a);
    for (auto& t : out.tapes())
      if (t.is_number_system()) t.system = new_name;
    return out;
  };
  NumberSystem r;
  r.name = new_name;
  r.alphabet = s.alphabet;
  r.addition = rev(s.addition);
  r.less_than = rev(s.less_than);
  r.equal = rev(s.equal);
  r.representable = rev(s.representable);
  return r;
}

std::optional<NumberSystem> make_builtin_system(const std::string& name) {
  std::string body = name;
  bool msd = true;
  if (name.rfind("msd_", 0) == 0) {
    body = name.substr(4);
  } else if (name.rfind("lsd_", 0) == 0) {
    msd = false;
    body = name.substr(4);
  }
  if (body == "fib") return make_fibonacci(msd);
  if (!body.empty() &&
      std::all_of(body.begin(), body.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    long k = std::stol(body);
    if (k >= 2 && k <= 1000) return make_base_k(static_cast<int>(k), msd);
  }
  return std::nullopt;
}

std::string normalize_system_name(const std::string& name) {
  if (name.rfind("msd_", 0) == 0 || name.rfind("lsd_", 0) == 0) return name;
  return "msd_" + name;
}

NumberSystem assemble_custom_system(const std::string& name, Automaton addition,
                                    std::optional<Automaton> less_than,
                                    std::optional<Automaton> representable) {
  if (addition.num_tapes() != 3)
    throw PredicateError("the addition automaton of number system " + name +
                         " must have 3 inputs");
  if (less_than && less_than->num_tapes() != 2)
    throw PredicateError("the comparison automaton of number system " + name +
                         " must have 2 inputs");
  if (representable && representable->num_tapes() != 1)
    throw PredicateError("the representation automaton of number system " + name +
                         " must have 1 input");

  NumberSystem s;
  s.name = name;
  std::vector<int> alpha;
  auto collect = [&alpha](const Automaton& a) {
    for (const auto& t : a.tapes())
      alpha.insert(alpha.end(), t.alphabet.begin(), t.alphabet.end());
  };
  collect(addition);
  if (less_than) collect(*less_than);
  if (representable) collect(*representable);
  std::sort(alpha.begin(), alpha.end());
  alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
  s.alphabet = alpha;

  auto adopt = [&](Automaton a) {
    a = widen_alphabets(a, s.alphabet);
    for (auto& t : a.tapes()) {
      t.system = s.name;
      t.label.clear();
    }
    return canonicalize(a);
  };

  TapeDomain t = ns_tape(s.name, s.alphabet);
  s.representable =
      representable ? adopt(std::move(*representable)) : minimize(Automaton::universal({t}));
  s.addition = adopt(std::move(addition));
  s.less_than = less_than
                    ? adopt(std::move(*less_than))
                    : restrict_tapes(digit_order_less_than(t, s.msd()), s.representable);
  s.equal = restrict_tapes(diagonal(t), s.representable);
  return s;
}

long long base_k_value(int k, const std::vector<int>& msd_digits) {
  long long v = 0;
  for (int d : msd_digits) v = v * k + d;
  return v;
}

std::vector<int> base_k_digits(int k, long long value) {
  std::vector<int> out;
  while (value > 0) {
    out.push_back(static_cast<int>(value % k));
    value /= k;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {
// Position weights 1, 2, 3, 5, 8, ... (least significant first).
const std::vector<long long>& fib_weights() {
  static const std::vector<long long> w = [] {
    std::vector<long long> f = {1, 2};
    while (f.back() < (1LL << 62)) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    return f;
  }();
  return w;
}
}  // namespace

long long fibonacci_value(const std::vector<int>& msd_digits) {
  const auto& F = fib_weights();
  long long v = 0;
  size_t n = msd_digits.size();
  for (size_t i = 0; i < n; ++i) v += msd_digits[i] * F[n - 1 - i];
  return v;
}

std::vector<int> fibonacci_digits(long long value) {
  if (value <= 0) return {};
  const auto& F = fib_weights();
  size_t top = 0;
  while (top + 1 < F.size() && F[top + 1] <= value) ++top;
  std::vector<int> out;
  for (size_t i = top + 1; i-- > 0;) {
    if (F[i] <= value) {
      out.push_back(1);
      value -= F[i];
    } else {
      out.push_back(0);
    }
  }
  return out;
}

}  // namespace autoprove
