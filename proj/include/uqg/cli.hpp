#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "uqg/linalg.hpp"

namespace uqg::cli {

struct RunResult {
  int exit_code = 0;
  std::string stdout_text;  // one JSON report plus trailing newline
};

/// Dispatches `args` (without the program name). `stdin_text` is consulted
/// only when a command needs a matrix and no --matrix path was given.
RunResult run(const std::vector<std::string>& args, const std::string& stdin_text = {});

/// {"n": N, "data": [[[re, im], ...], ...]}. Also accepts a report whose
/// payload carries such a document under "matrix". Throws InvalidInput.
ComplexMatrix parse_matrix_document(const nlohmann::json& doc);
nlohmann::ordered_json matrix_document(const ComplexMatrix& m);

/// Rounds to 12 significant digits; -0 becomes 0.
double round12(double v);

}  // namespace uqg::cli
