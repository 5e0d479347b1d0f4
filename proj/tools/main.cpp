#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <utility>

#include <unistd.h>

#include "CLI11.hpp"
#include "autoprove/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Prove first-order statements about automatic sequences"};
  std::string home;
  std::string command;
  bool utf16 = false;
  bool no_color = false;
  app.add_option("--home", home,
                 "Directory holding the library folders (default: $AUTOPROVE_HOME or the "
                 "working directory)");
  app.add_flag("--utf16", utf16, "Write text files in UTF-16 instead of UTF-8");
  app.add_flag("--no-color", no_color, "Disable colored console output");
  app.add_option("-c,--command", command, "Run the given command(s), then exit");
  CLI11_PARSE(app, argc, argv);

  autoprove::SessionConfig cfg;
  if (!home.empty()) {
    cfg.home = home;
  } else if (const char* env = std::getenv("AUTOPROVE_HOME"); env != nullptr && *env != '\0') {
    cfg.home = env;
  }
  cfg.write_utf16 = utf16;
  cfg.color = !no_color && isatty(fileno(stderr)) != 0;

  autoprove::Session session(std::move(cfg), std::cout, std::cerr);
  try {
    if (app.count("--command") > 0) {
      session.run_commands(command);
    } else {
      session.run(std::cin, isatty(fileno(stdin)) != 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
