#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "autoprove/evaluator.hpp"
#include "autoprove/number_system.hpp"

namespace autoprove {

/// Where a session keeps its files and how it talks to the console.
struct SessionConfig {
  std::filesystem::path home = ".";  ///< parent of the library directories
  std::string result_dir = "Result";
  std::string automata_dir = "Automata Library";
  std::string word_automata_dir = "Word Automata Library";
  std::string custom_bases_dir = "Custom Bases";
  std::string command_files_dir = "Command Files";
  bool write_utf16 = false;  ///< write text files as UTF-16 instead of UTF-8
  bool color = false;        ///< ANSI-color errors and warnings
};

/// Decodes a text file's bytes: UTF-16 (either endianness, detected by BOM)
/// is converted to UTF-8, a UTF-8 BOM is stripped, and line endings are
/// normalized to '\n'. Plain text passes through unchanged.
std::string decode_text(const std::string& bytes);

/// Encodes UTF-8 text as UTF-16 (big endian, with BOM).
std::string encode_utf16(const std::string& utf8);

/// The command processor: reads `exit` / `eval` / `def` / `reg` / `load`
/// commands, evaluates predicates, and maintains the library directories.
/// It also resolves names for the evaluator: number systems come from the
/// built-ins or from definition files in the custom-bases directory, stored
/// automata from the automata library, and words from the word automata
/// library (with the bundled words materialized on first use).
class Session : public EvalEnv {
 public:
  Session(SessionConfig config, std::ostream& out, std::ostream& err);

  const NumberSystem& number_system(const std::string& name) override;
  const Automaton& stored_automaton(const std::string& name) override;
  const Automaton& word_automaton(const std::string& name) override;

  /// Reads commands from `in` until `exit` or end of input. When
  /// `interactive`, a prompt is printed before each input line.
  void run(std::istream& in, bool interactive);

  /// Executes the commands in `text` as if they were typed; text after the
  /// last terminator is run as a command of its own, as if ';' followed.
  void run_commands(const std::string& text);

 private:
  enum class Status { kOk, kError, kExit };

  Status execute(const std::string& raw);
  Status exec_eval_def(bool def_cmd, const std::string& rest, char terminator,
                       const std::string& echo);
  Status exec_reg(const std::string& rest, const std::string& echo);
  Status exec_load(const std::string& rest, const std::string& echo);
  /// Runs a command file's content; the first failing command aborts the
  /// rest of the file.
  Status run_script(const std::string& text, const std::string& file_name);

  void report(const std::string& message, int offset, const std::string& echo);
  void warn(const std::string& message);

  std::filesystem::path sub(const std::string& dir_name) const;
  std::string read_file(const std::filesystem::path& path) const;
  void write_file(const std::filesystem::path& path, const std::string& utf8) const;

  std::optional<NumberSystem> load_custom_system(const std::string& name);

  SessionConfig cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::map<std::string, NumberSystem> systems_;
  std::map<std::string, Automaton> stored_;
  std::map<std::string, Automaton> words_;
  std::set<std::string> loading_systems_;  // guards recursive definitions
};

}  // namespace autoprove
