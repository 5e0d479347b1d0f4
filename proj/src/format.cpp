#include "autoprove/format.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "autoprove/errors.hpp"

namespace autoprove {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_int(const std::string& tok, int& out) {
  if (tok.empty()) return false;
  size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) return false;
  for (size_t j = i; j < tok.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(tok[j]))) return false;
  out = std::stoi(tok);
  return true;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct RawTransition {
  int line;
  int state;
  std::vector<std::optional<int>> symbols;  // nullopt = wildcard
  int target;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw PredicateError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Automaton parse_automaton_text(const std::string& text, const DomainResolver& resolve) {
  std::vector<std::pair<int, std::string>> lines;  // (line number, trimmed content)
  {
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      std::string t = trim(line);
      if (!t.empty()) lines.emplace_back(no, t);
    }
  }
  if (lines.empty()) throw PredicateError("automaton file is empty");

  if (lines.size() == 1 && (lines[0].second == "true" || lines[0].second == "false"))
    return lines[0].second == "true" ? Automaton::true_automaton() : Automaton::false_automaton();

  // Header: braced alphabets and/or number system names.
  std::vector<TapeDomain> tapes;
  std::vector<std::string> deferred;  // non-empty = alphabet to infer, keyed by this name
  {
    const auto& [line_no, header] = lines[0];
    size_t i = 0;
    while (i < header.size()) {
      if (std::isspace(static_cast<unsigned char>(header[i]))) {
        ++i;
        continue;
      }
      if (header[i] == '{') {
        size_t close = header.find('}', i);
        if (close == std::string::npos) fail(line_no, "unterminated alphabet brace");
        std::string body = header.substr(i + 1, close - i - 1);
        TapeDomain tape;
        std::string item;
        std::istringstream items(body);
        while (std::getline(items, item, ',')) {
          int sym;
          if (!parse_int(trim(item), sym)) fail(line_no, "bad alphabet symbol '" + item + "'");
          tape.alphabet.push_back(sym);
        }
        if (tape.alphabet.empty()) fail(line_no, "empty alphabet");
        std::sort(tape.alphabet.begin(), tape.alphabet.end());
        tape.alphabet.erase(std::unique(tape.alphabet.begin(), tape.alphabet.end()),
                            tape.alphabet.end());
        tapes.push_back(std::move(tape));
        deferred.emplace_back();
        i = close + 1;
      } else {
        size_t end = i;
        while (end < header.size() && !std::isspace(static_cast<unsigned char>(header[end])))
          ++end;
        std::string name = header.substr(i, end - i);
        auto tape = resolve(name);
        if (tape) {
          tape->label.clear();
          tapes.push_back(std::move(*tape));
          deferred.emplace_back();
        } else {
          TapeDomain t;
          t.system = name;
          tapes.push_back(std::move(t));
          deferred.push_back(name);
        }
        i = end;
      }
    }
  }
  if (tapes.empty()) fail(lines[0].first, "automaton header declares no tapes");
  int arity = static_cast<int>(tapes.size());

  std::vector<int> outputs;
  std::vector<RawTransition> transitions;
  int current_state = -1;
  for (size_t li = 1; li < lines.size(); ++li) {
    const auto& [line_no, content] = lines[li];
    std::vector<std::string> toks = split_ws(content);
    auto arrow = std::find(toks.begin(), toks.end(), "->");
    if (arrow == toks.end()) {
      // State line: "<state> <output>".
      int q, out;
      if (toks.size() != 2 || !parse_int(toks[0], q) || !parse_int(toks[1], out))
        fail(line_no, "expected a state line or a transition");
      if (q != static_cast<int>(outputs.size()))
        fail(line_no, "states must be declared densely from 0");
      outputs.push_back(out);
      current_state = q;
    } else {
      if (current_state < 0) fail(line_no, "transition before any state declaration");
      if (arrow - toks.begin() != arity)
        fail(line_no, "transition needs one symbol per tape");
      if (toks.end() - arrow != 2) fail(line_no, "expected one target state after ->");
      RawTransition t;
      t.line = line_no;
      t.state = current_state;
      for (int k = 0; k < arity; ++k) {
        if (toks[k] == "*") {
          t.symbols.emplace_back(std::nullopt);
        } else {
          int sym;
          if (!parse_int(toks[k], sym)) fail(line_no, "bad symbol '" + toks[k] + "'");
          t.symbols.emplace_back(sym);
        }
      }
      if (!parse_int(*(arrow + 1), t.target)) fail(line_no, "bad target state");
      transitions.push_back(std::move(t));
    }
  }
  if (outputs.empty()) fail(lines[0].first, "automaton declares no states");

  // Infer deferred alphabets from the literal symbols used on those tapes
  // (tapes naming the same deferred system share one alphabet).
  {
    std::map<std::string, std::vector<int>> inferred;
    for (const auto& t : transitions) {
      for (int k = 0; k < arity; ++k) {
        if (!deferred[k].empty() && t.symbols[k])
          inferred[deferred[k]].push_back(*t.symbols[k]);
      }
    }
    for (int k = 0; k < arity; ++k) {
      if (deferred[k].empty()) continue;
      auto it = inferred.find(deferred[k]);
      if (it == inferred.end() || it->second.empty())
        throw PredicateError("cannot infer the alphabet of number system " + deferred[k]);
      std::vector<int> alpha = it->second;
      std::sort(alpha.begin(), alpha.end());
      alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
      tapes[k].alphabet = std::move(alpha);
    }
  }

  Automaton a(tapes, static_cast<int>(outputs.size()));
  for (size_t q = 0; q < outputs.size(); ++q) a.set_output(static_cast<int>(q), outputs[q]);

  // Expand wildcards and install transitions, rejecting conflicts.
  std::map<std::pair<int, int>, int> installed;  // (state, code) -> target
  for (const auto& t : transitions) {
    if (t.target < 0 || t.target >= a.num_states())
      fail(t.line, "transition target " + std::to_string(t.target) + " is not a state");
    std::vector<int> tuple(arity);
    auto expand = [&](auto&& self, int k) -> void {
      if (k == arity) {
        int code = *a.encode(tuple);
        auto [it, fresh] = installed.emplace(std::make_pair(t.state, code), t.target);
        if (!fresh && it->second != t.target)
          fail(t.line, "conflicting transitions out of state " + std::to_string(t.state));
        return;
      }
      if (t.symbols[k]) {
        if (!tapes[k].symbol_index(*t.symbols[k]))
          fail(t.line, "symbol " + std::to_string(*t.symbols[k]) + " is not in the tape alphabet");
        tuple[k] = *t.symbols[k];
        self(self, k + 1);
      } else {
        for (int sym : tapes[k].alphabet) {
          tuple[k] = sym;
          self(self, k + 1);
        }
      }
    };
    expand(expand, 0);
  }
  for (const auto& [key, target] : installed) a.add_edge(key.first, key.second, target);
  return a;
}

std::string write_automaton_text(const Automaton& a) {
  if (a.is_true()) return "true\n";
  if (a.is_false()) return "false\n";
  if (!a.is_deterministic() || a.initial_states() != std::vector<int>{0})
    throw std::logic_error("can only serialize deterministic automata rooted at state 0");

  std::ostringstream out;
  for (int i = 0; i < a.num_tapes(); ++i) {
    if (i) out << ' ';
    const TapeDomain& t = a.tapes()[i];
    if (t.is_number_system()) {
      out << t.system;
    } else {
      out << '{';
      for (size_t j = 0; j < t.alphabet.size(); ++j) {
        if (j) out << ',';
        out << t.alphabet[j];
      }
      out << '}';
    }
  }
  out << '\n';
  for (int q = 0; q < a.num_states(); ++q) {
    out << q << ' ' << a.output(q) << '\n';
    for (const auto& e : a.edges(q)) {
      std::vector<int> tuple = a.decode(e.code);
      for (int sym : tuple) out << sym << ' ';
      out << "-> " << e.dst << '\n';
    }
  }
  return out.str();
}

std::string write_graphviz(const Automaton& a, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  out << "rankdir = LR;\n";
  if (!a.is_machine()) {
    const char* shape = a.is_true() ? "doublecircle" : "circle";
    const char* label = a.is_true() ? "true" : "false";
    out << "node [shape = " << shape << ", label = \"" << label << "\"]; 0;\n";
    out << "}\n";
    return out.str();
  }

  bool word_style = false;
  for (int q = 0; q < a.num_states(); ++q)
    if (a.output(q) != 0 && a.output(q) != 1) word_style = true;

  out << "node [shape = point]; qi;\n";
  for (int q = 0; q < a.num_states(); ++q) {
    const char* shape = (!word_style && a.is_final(q)) ? "doublecircle" : "circle";
    out << q << " [shape = " << shape << ", label = \"" << q;
    if (word_style) out << '/' << a.output(q);
    out << "\"];\n";
  }
  for (int q : a.initial_states()) out << "qi -> " << q << ";\n";
  for (int q = 0; q < a.num_states(); ++q) {
    std::map<int, std::vector<int>> by_dst;  // dst -> codes
    for (const auto& e : a.edges(q)) by_dst[e.dst].push_back(e.code);
    for (const auto& [dst, codes] : by_dst) {
      out << q << " -> " << dst << " [label = \"";
      for (size_t i = 0; i < codes.size(); ++i) {
        if (i) out << ", ";
        std::vector<int> tuple = a.decode(codes[i]);
        if (tuple.size() == 1) {
          out << tuple[0];
        } else {
          out << '(';
          for (size_t j = 0; j < tuple.size(); ++j) {
            if (j) out << ',';
            out << tuple[j];
          }
          out << ')';
        }
      }
      out << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace autoprove
