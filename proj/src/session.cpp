#include "autoprove/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "autoprove/bundled_words.hpp"
#include "autoprove/errors.hpp"
#include "autoprove/format.hpp"
#include "autoprove/regex.hpp"

namespace autoprove {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// One console line for the error echo: newlines inside a multi-line command
// collapse to spaces.
std::string one_line(const std::string& s) {
  std::string out = trim(s);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

// Index of the first ';' or ':' outside quotation marks, at or after `from`.
size_t find_command_end(const std::string& text, size_t from) {
  bool quoted = false;
  for (size_t i = from; i < text.size(); ++i) {
    char c = text[i];
    if (c == '"') {
      quoted = !quoted;
    } else if (!quoted && (c == ';' || c == ':')) {
      return i;
    }
  }
  return std::string::npos;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

struct LoadingGuard {
  std::set<std::string>& active;
  std::string name;
  LoadingGuard(std::set<std::string>& a, std::string n) : active(a), name(std::move(n)) {
    active.insert(name);
  }
  ~LoadingGuard() { active.erase(name); }
};

}  // namespace

std::string decode_text(const std::string& bytes) {
  auto byte = [&](size_t i) { return static_cast<unsigned char>(bytes[i]); };
  std::string text;
  if (bytes.size() >= 2 &&
      ((byte(0) == 0xFF && byte(1) == 0xFE) || (byte(0) == 0xFE && byte(1) == 0xFF))) {
    const bool little_endian = byte(0) == 0xFF;
    std::vector<unsigned> units;
    units.reserve(bytes.size() / 2);
    for (size_t i = 2; i + 1 < bytes.size(); i += 2) {
      units.push_back(little_endian ? byte(i) | (byte(i + 1) << 8)
                                    : (byte(i) << 8) | byte(i + 1));
    }
    for (size_t i = 0; i < units.size(); ++i) {
      unsigned cp = units[i];
      if (cp >= 0xD800 && cp < 0xDC00 && i + 1 < units.size() && units[i + 1] >= 0xDC00 &&
          units[i + 1] < 0xE000) {
        cp = 0x10000 + ((cp - 0xD800) << 10) + (units[i + 1] - 0xDC00);
        ++i;
      }
      append_utf8(text, cp);
    }
  } else if (bytes.size() >= 3 && byte(0) == 0xEF && byte(1) == 0xBB && byte(2) == 0xBF) {
    text = bytes.substr(3);
  } else {
    text = bytes;
  }
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out += '\n';
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::string encode_utf16(const std::string& utf8) {
  std::string out;
  out.reserve(2 + 2 * utf8.size());
  auto unit = [&](unsigned u) {
    out += static_cast<char>((u >> 8) & 0xFF);
    out += static_cast<char>(u & 0xFF);
  };
  unit(0xFEFF);
  size_t i = 0;
  while (i < utf8.size()) {
    unsigned char c = static_cast<unsigned char>(utf8[i]);
    unsigned cp = 0;
    size_t n = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6) {
      cp = c & 0x1F;
      n = 2;
    } else if ((c >> 4) == 0xE) {
      cp = c & 0x0F;
      n = 3;
    } else {
      cp = c & 0x07;
      n = 4;
    }
    for (size_t k = 1; k < n && i + k < utf8.size(); ++k) {
      cp = (cp << 6) | (static_cast<unsigned char>(utf8[i + k]) & 0x3F);
    }
    i += n;
    if (cp >= 0x10000) {
      cp -= 0x10000;
      unit(0xD800 | (cp >> 10));
      unit(0xDC00 | (cp & 0x3FF));
    } else {
      unit(cp);
    }
  }
  return out;
}

Session::Session(SessionConfig config, std::ostream& out, std::ostream& err)
    : cfg_(std::move(config)), out_(out), err_(err) {}

std::filesystem::path Session::sub(const std::string& dir_name) const {
  return cfg_.home / dir_name;
}

std::string Session::read_file(const std::filesystem::path& path) const {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PredicateError("cannot open file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return decode_text(ss.str());
}

void Session::write_file(const std::filesystem::path& path, const std::string& utf8) const {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const std::string payload = cfg_.write_utf16 ? encode_utf16(utf8) : utf8;
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write file " + tmp.string());
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    f.flush();
    if (!f) throw std::runtime_error("cannot write file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void Session::report(const std::string& message, int offset, const std::string& echo) {
  std::string block = message;
  if (offset >= 0) block += "\n\t: char at " + std::to_string(offset);
  block += "\n\t: " + echo;
  if (cfg_.color) {
    err_ << "\033[31m" << block << "\033[0m\n";
  } else {
    err_ << block << "\n";
  }
  err_.flush();
}

void Session::warn(const std::string& message) {
  if (cfg_.color) {
    err_ << "\033[33mwarning: " << message << "\033[0m\n";
  } else {
    err_ << "warning: " << message << "\n";
  }
  err_.flush();
}

const NumberSystem& Session::number_system(const std::string& raw_name) {
  const std::string name = normalize_system_name(raw_name);
  auto it = systems_.find(name);
  if (it != systems_.end()) return it->second;
  std::optional<NumberSystem> ns = make_builtin_system(name);
  if (!ns) ns = load_custom_system(name);
  if (!ns) throw PredicateError("number system " + name + " is not defined");
  return systems_.emplace(name, std::move(*ns)).first->second;
}

std::optional<NumberSystem> Session::load_custom_system(const std::string& name) {
  if (loading_systems_.count(name)) {
    throw PredicateError("number system " + name + " is defined in terms of itself");
  }
  LoadingGuard guard(loading_systems_, name);
  const std::filesystem::path base = sub(cfg_.custom_bases_dir);
  auto file = [&](const std::string& stem) { return base / (stem + ".txt"); };
  std::error_code ec;

  if (std::filesystem::exists(file(name + "_addition"), ec)) {
    // A tape declared with the system's own name defers its alphabet to the
    // digits that actually occur in the transition table.
    DomainResolver resolve = [&](const std::string& sys) -> std::optional<TapeDomain> {
      if (normalize_system_name(sys) == name) return std::nullopt;
      return number_system(sys).tape();
    };
    Automaton addition = parse_automaton_text(read_file(file(name + "_addition")), resolve);
    std::optional<Automaton> less_than;
    std::optional<Automaton> representable;
    if (std::filesystem::exists(file(name + "_less_than"), ec)) {
      less_than = parse_automaton_text(read_file(file(name + "_less_than")), resolve);
    }
    if (std::filesystem::exists(file(name), ec)) {
      representable = parse_automaton_text(read_file(file(name)), resolve);
    }
    return assemble_custom_system(name, std::move(addition), std::move(less_than),
                                  std::move(representable));
  }

  // Only the opposite reading direction is defined: reverse its automata.
  const std::string opposite =
      (name.rfind("msd_", 0) == 0 ? "lsd_" : "msd_") + name.substr(4);
  if (std::filesystem::exists(file(opposite + "_addition"), ec)) {
    const NumberSystem& other = number_system(opposite);
    warn("number system " + name + " is derived by reversing the automata of " + opposite +
         "; check that the two systems differ only in reading direction");
    return reverse_system(other, name);
  }
  return std::nullopt;
}

const Automaton& Session::stored_automaton(const std::string& name) {
  auto it = stored_.find(name);
  if (it != stored_.end()) return it->second;
  const std::filesystem::path path = sub(cfg_.automata_dir) / (name + ".txt");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw PredicateError("automaton " + name + " does not exist in the automata library");
  }
  DomainResolver resolve = [&](const std::string& sys) -> std::optional<TapeDomain> {
    return number_system(sys).tape();
  };
  Automaton a = parse_automaton_text(read_file(path), resolve);
  return stored_.emplace(name, std::move(a)).first->second;
}

const Automaton& Session::word_automaton(const std::string& name) {
  auto it = words_.find(name);
  if (it != words_.end()) return it->second;
  const std::filesystem::path path = sub(cfg_.word_automata_dir) / (name + ".txt");
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    for (const BundledWord& b : bundled_words()) {
      if (b.name == name) {
        write_file(path, b.text);
        break;
      }
    }
  }
  if (!std::filesystem::exists(path, ec)) {
    throw PredicateError("word " + name + " does not exist in the word automata library");
  }
  DomainResolver resolve = [&](const std::string& sys) -> std::optional<TapeDomain> {
    return number_system(sys).tape();
  };
  Automaton w = parse_automaton_text(read_file(path), resolve);
  if (!w.is_machine()) {
    throw PredicateError("word " + name + " is not an automaton with output");
  }
  return words_.emplace(name, std::move(w)).first->second;
}

void Session::run(std::istream& in, bool interactive) {
  std::string buffer;
  std::string line;
  while (true) {
    if (interactive) {
      out_ << "> ";
      out_.flush();
    }
    if (!std::getline(in, line)) break;
    buffer += line;
    buffer += '\n';
    size_t end;
    while ((end = find_command_end(buffer, 0)) != std::string::npos) {
      std::string raw = trim(buffer.substr(0, end + 1));
      buffer.erase(0, end + 1);
      if (execute(raw) == Status::kExit) return;
    }
  }
}

void Session::run_commands(const std::string& text) {
  size_t pos = 0;
  size_t end;
  while ((end = find_command_end(text, pos)) != std::string::npos) {
    std::string raw = trim(text.substr(pos, end - pos + 1));
    pos = end + 1;
    if (execute(raw) == Status::kExit) return;
  }
  const std::string rest = trim(text.substr(pos));
  if (!rest.empty()) execute(rest + ";");
}

Session::Status Session::run_script(const std::string& text, const std::string& file_name) {
  size_t pos = 0;
  size_t end;
  while ((end = find_command_end(text, pos)) != std::string::npos) {
    const std::string piece = text.substr(pos, end - pos + 1);
    // Line number of the command's first non-blank character.
    size_t first = 0;
    while (first < piece.size() && is_space(piece[first])) ++first;
    int line = 1;
    for (size_t i = 0; i < pos + first && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    pos = end + 1;
    const Status st = execute(trim(piece));
    if (st == Status::kExit) return st;
    if (st == Status::kError) {
      if (cfg_.color) {
        err_ << "\033[31mload " << file_name << " aborted at line " << line << "\033[0m\n";
      } else {
        err_ << "load " << file_name << " aborted at line " << line << "\n";
      }
      err_.flush();
      return st;
    }
  }
  return Status::kOk;
}

Session::Status Session::execute(const std::string& raw) {
  if (raw.empty()) return Status::kOk;
  const char terminator = raw.back();
  const std::string body = trim(raw.substr(0, raw.size() - 1));
  if (body.empty()) return Status::kOk;
  const std::string echo = one_line(raw);

  size_t i = 0;
  while (i < body.size() && !is_space(body[i]) && body[i] != '"') ++i;
  const std::string verb = body.substr(0, i);
  const std::string rest = body.substr(i);

  if (verb == "exit") {
    if (trim(rest).empty()) return Status::kExit;
    report("invalid use of exit command", -1, echo);
    return Status::kError;
  }
  if (verb == "eval" || verb == "def") return exec_eval_def(verb == "def", rest, terminator, echo);
  if (verb == "reg") return exec_reg(rest, echo);
  if (verb == "load") return exec_load(rest, echo);
  report("invalid command: " + verb, -1, echo);
  return Status::kError;
}

Session::Status Session::exec_eval_def(bool def_cmd, const std::string& rest, char terminator,
                                       const std::string& echo) {
  auto invalid = [&] {
    report("invalid use of eval/def command", -1, echo);
    return Status::kError;
  };
  size_t i = 0;
  if (i >= rest.size() || !is_space(rest[i])) return invalid();
  while (i < rest.size() && is_space(rest[i])) ++i;
  if (i >= rest.size() || !std::isalpha(static_cast<unsigned char>(rest[i]))) return invalid();
  const size_t name_start = i;
  while (i < rest.size() &&
         (std::isalnum(static_cast<unsigned char>(rest[i])) || rest[i] == '_')) {
    ++i;
  }
  const std::string name = rest.substr(name_start, i - name_start);
  if (i >= rest.size() || !is_space(rest[i])) return invalid();
  while (i < rest.size() && is_space(rest[i])) ++i;
  if (i >= rest.size() || rest[i] != '"') return invalid();
  const size_t open = i + 1;
  const size_t close = rest.find('"', open);
  if (close == std::string::npos) return invalid();
  const std::string predicate = rest.substr(open, close - open);
  if (!trim(rest.substr(close + 1)).empty()) return invalid();

  EvalResult result;
  try {
    result = compile_predicate(predicate, *this);
  } catch (const PredicateError& e) {
    report(e.what(), e.offset(), echo);
    return Status::kError;
  }

  std::string log;
  for (size_t k = 0; k < result.steps.size(); ++k) {
    log += std::string(2 * k, ' ');
    log += result.steps[k].display + " has " + std::to_string(result.steps[k].states) +
           " states: " + std::to_string(result.steps[k].millis) + "ms\n";
  }
  log += "total computation time: " + std::to_string(result.total_millis) + "ms\n";

  if (terminator == ':') out_ << log;
  if (!result.automaton.is_machine()) {
    out_ << (result.automaton.is_true() ? "TRUE" : "FALSE") << "\n";
  }
  out_.flush();

  const std::string text = write_automaton_text(result.automaton);
  const std::filesystem::path result_dir = sub(cfg_.result_dir);
  write_file(result_dir / (name + ".gv"), write_graphviz(result.automaton, name));
  write_file(result_dir / (name + ".txt"), text);
  write_file(result_dir / (name + "_log.txt"), log);
  if (def_cmd) {
    write_file(sub(cfg_.automata_dir) / (name + ".txt"), text);
    stored_.erase(name);  // reload from the fresh file on next use
  }
  return Status::kOk;
}

Session::Status Session::exec_reg(const std::string& rest, const std::string& echo) {
  auto invalid = [&] {
    report("invalid use of reg command", -1, echo);
    return Status::kError;
  };
  size_t i = 0;
  if (i >= rest.size() || !is_space(rest[i])) return invalid();
  while (i < rest.size() && is_space(rest[i])) ++i;
  if (i >= rest.size() || !std::isalpha(static_cast<unsigned char>(rest[i]))) return invalid();
  const size_t name_start = i;
  while (i < rest.size() &&
         (std::isalnum(static_cast<unsigned char>(rest[i])) || rest[i] == '_')) {
    ++i;
  }
  const std::string name = rest.substr(name_start, i - name_start);
  if (i >= rest.size() || !is_space(rest[i])) return invalid();
  while (i < rest.size() && is_space(rest[i])) ++i;

  TapeDomain domain;
  if (i < rest.size() && rest[i] == '{') {
    const size_t closing = rest.find('}', i);
    if (closing == std::string::npos) return invalid();
    std::string inner = rest.substr(i + 1, closing - i - 1);
    i = closing + 1;
    std::vector<int> alphabet;
    size_t start = 0;
    while (start <= inner.size()) {
      size_t comma = inner.find(',', start);
      std::string item =
          trim(comma == std::string::npos ? inner.substr(start) : inner.substr(start, comma - start));
      if (item.empty()) return invalid();
      size_t p = item[0] == '-' ? 1 : 0;
      if (p >= item.size()) return invalid();
      for (size_t k = p; k < item.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(item[k]))) return invalid();
      }
      alphabet.push_back(std::stoi(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    if (alphabet.empty()) return invalid();
    domain = TapeDomain{"", "", std::move(alphabet)};
  } else {
    const size_t sys_start = i;
    while (i < rest.size() && !is_space(rest[i]) && rest[i] != '"') ++i;
    const std::string sys = rest.substr(sys_start, i - sys_start);
    if (sys.empty()) return invalid();
    try {
      domain = number_system(sys).tape();
    } catch (const PredicateError& e) {
      report(e.what(), e.offset(), echo);
      return Status::kError;
    }
  }

  if (i >= rest.size() || !is_space(rest[i])) return invalid();
  while (i < rest.size() && is_space(rest[i])) ++i;
  if (i >= rest.size() || rest[i] != '"') return invalid();
  const size_t open = i + 1;
  const size_t close = rest.find('"', open);
  if (close == std::string::npos) return invalid();
  const std::string expression = rest.substr(open, close - open);
  if (!trim(rest.substr(close + 1)).empty()) return invalid();

  Automaton a = Automaton::false_automaton();
  try {
    a = regex_to_automaton(expression, domain);
  } catch (const PredicateError& e) {
    report(e.what(), e.offset(), echo);
    return Status::kError;
  }

  write_file(sub(cfg_.result_dir) / (name + ".gv"), write_graphviz(a, name));
  write_file(sub(cfg_.automata_dir) / (name + ".txt"), write_automaton_text(a));
  stored_.erase(name);
  return Status::kOk;
}

Session::Status Session::exec_load(const std::string& rest, const std::string& echo) {
  const std::string file_name = trim(rest);
  if (file_name.empty() ||
      file_name.find_first_of(" \t\n\"") != std::string::npos) {
    report("invalid use of load command", -1, echo);
    return Status::kError;
  }
  const std::filesystem::path path = sub(cfg_.command_files_dir) / file_name;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    report("cannot open command file " + path.string(), -1, echo);
    return Status::kError;
  }
  return run_script(read_file(path), file_name);
}

}  // namespace autoprove
