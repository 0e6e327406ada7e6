#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "uqg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  bool has_matrix = false;
  for (const auto& a : args) has_matrix = has_matrix || a == "--matrix" || a.rfind("--matrix=", 0) == 0;
  std::string input;
  if (!has_matrix && !isatty(STDIN_FILENO) && !args.empty() && args.front() != "fusion") {
    input.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }

  const auto result = uqg::cli::run(args, input);
  std::cout << result.stdout_text;
  return result.exit_code;
}
