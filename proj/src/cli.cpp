#include "uqg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "uqg/au_classifier.hpp"
#include "uqg/bu_classifier.hpp"
#include "uqg/decomposer.hpp"
#include "uqg/fusion.hpp"

namespace uqg::cli {

using ojson = nlohmann::ordered_json;

double round12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

namespace {

ojson number_pair(Complex c) { return ojson::array({round12(c.real()), round12(c.imag())}); }

ojson reals(const std::vector<double>& v) {
  ojson out = ojson::array();
  for (double x : v) out.push_back(round12(x));
  return out;
}

ojson matrix_rows(const ComplexMatrix& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.size(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(number_pair(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson big_number(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

}  // namespace

ojson matrix_document(const ComplexMatrix& m) {
  ojson doc;
  doc["n"] = m.size();
  doc["data"] = matrix_rows(m);
  return doc;
}

ComplexMatrix parse_matrix_document(const nlohmann::json& input) {
  const nlohmann::json* doc = &input;
  if (doc->is_object() && doc->contains("payload") && (*doc)["payload"].is_object() &&
      (*doc)["payload"].contains("matrix")) {
    doc = &(*doc)["payload"]["matrix"];
  }
  if (!doc->is_object() || !doc->contains("n") || !doc->contains("data")) invalid("matrix document needs \"n\" and \"data\"");
  const auto& jn = (*doc)["n"];
  if (!jn.is_number_integer() || jn.get<long long>() < 1) invalid("\"n\" must be a positive integer");
  const auto n = jn.get<long long>();
  if (n > 4096) invalid("\"n\" is unreasonably large");
  const auto& data = (*doc)["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != n) invalid("\"data\" must have n rows");
  Mat m(n, n);
  for (long long i = 0; i < n; ++i) {
    const auto& row = data[i];
    if (!row.is_array() || static_cast<long long>(row.size()) != n) invalid("matrix must be square: row " + std::to_string(i));
    for (long long j = 0; j < n; ++j) {
      const auto& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        invalid("entries must be [re, im] number pairs");
      const double re = e[0].get<double>();
      const double im = e[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) invalid("entries must be finite");
      m(i, j) = Complex(re, im);
    }
  }
  return ComplexMatrix(std::move(m));
}

namespace {

struct Options {
  std::string command;
  std::string family;
  std::vector<std::string> matrices;
  double tol = 1e-9;
  int n = 0;
  int max_len = -1;
  std::uint64_t seed = 0;
  std::string partition;
  std::string x;
  std::string y;
};

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    invalid("malformed JSON in " + what + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot read matrix file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<ComplexMatrix> load_matrices(const Options& opt, const std::string& stdin_text, std::size_t count) {
  std::vector<ComplexMatrix> out;
  if (!opt.matrices.empty()) {
    if (opt.matrices.size() != count) invalid("expected " + std::to_string(count) + " --matrix argument(s)");
    for (const auto& path : opt.matrices) out.push_back(parse_matrix_document(parse_json(read_file(path), path)));
    return out;
  }
  if (stdin_text.find_first_not_of(" \t\r\n") == std::string::npos) invalid("no matrix given (use --matrix or stdin)");
  const auto doc = parse_json(stdin_text, "stdin");
  if (count == 1) {
    out.push_back(parse_matrix_document(doc));
    return out;
  }
  const nlohmann::json* list = &doc;
  if (doc.is_object() && doc.contains("matrices")) list = &doc["matrices"];
  if (!list->is_array() || list->size() != count) invalid("stdin must hold an array of " + std::to_string(count) + " matrix documents");
  for (const auto& d : *list) out.push_back(parse_matrix_document(d));
  return out;
}

std::optional<Partition> load_partition(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto doc = parse_json(text, "--partition");
  if (!doc.is_array()) invalid("--partition must be a JSON array of index arrays");
  Partition p;
  for (const auto& blk : doc) {
    if (!blk.is_array() || blk.empty()) invalid("--partition blocks must be non-empty index arrays");
    std::vector<int> idx;
    for (const auto& i : blk) {
      if (!i.is_number_integer()) invalid("--partition indices must be integers");
      idx.push_back(i.get<int>());
    }
    p.push_back(std::move(idx));
  }
  return p;
}

ojson bu_payload(const BuDescriptor& d) {
  ojson p;
  p["n"] = d.n;
  p["c"] = d.c;
  p["mu"] = reals(d.mu.mu);
  p["u_part"] = matrix_rows(d.u_part);
  return p;
}

struct Outcome {
  std::string status = "ok";
  ojson payload;
  std::vector<std::string> diagnostics;
};

Outcome execute(const Options& opt, const std::string& stdin_text) {
  const Tolerance tol = Tolerance::from_eq(opt.tol);
  const BuSearchOptions search{opt.seed};
  Outcome out;
  const bool au = opt.family == "au";

  if (opt.command == "classify") {
    const auto q = load_matrices(opt, stdin_text, 1).front();
    if (au) {
      out.payload["invariant"] = reals(au_invariant(q, tol).spectrum);
    } else {
      out.payload = bu_payload(bu_descriptor(q, tol));
    }
  } else if (opt.command == "canon") {
    const auto q = load_matrices(opt, stdin_text, 1).front();
    if (au) {
      const auto inv = au_invariant(q, tol);
      out.payload["invariant"] = reals(inv.spectrum);
      out.payload["matrix"] = matrix_document(ComplexMatrix::diagonal(std::span<const double>(inv.spectrum)));
    } else {
      const auto d = bu_descriptor(q, tol);
      out.payload = bu_payload(d);
      out.payload["matrix"] = matrix_document(d.representative());
    }
  } else if (opt.command == "isomorphic") {
    const auto qs = load_matrices(opt, stdin_text, 2);
    if (au) {
      out.payload["isomorphic"] = au_isomorphic(qs[0], qs[1], tol);
    } else {
      const auto cmp = bu_isomorphic(qs[0], qs[1], tol, search);
      out.payload["verdict"] = std::string(verdict_name(cmp.verdict));
      out.payload["reason"] = cmp.reason;
      if (cmp.witness) {
        ojson w;
        w["s"] = matrix_rows(cmp.witness->s);
        w["z"] = number_pair(cmp.witness->z);
        w["residual"] = round12(cmp.witness->residual);
        out.payload["witness"] = std::move(w);
      }
      if (cmp.verdict == Verdict::undecided) out.status = "undecided";
    }
  } else if (opt.command == "decompose") {
    const auto q = load_matrices(opt, stdin_text, 1).front();
    const auto expr = au ? decompose_au(q, tol) : decompose_bu(q, tol, load_partition(opt.partition));
    ojson atoms = ojson::array();
    for (const auto& a : expr.atoms) atoms.push_back(atom_label(a));
    out.payload["atoms"] = std::move(atoms);
  } else if (opt.command == "fusion") {
    if (opt.family == "dims") {
      if (opt.max_len < 0) invalid("fusion dims needs --max-len");
      ojson f = ojson::array();
      for (const auto& v : min_dim_sequence(opt.n, opt.max_len)) f.push_back(big_number(v));
      out.payload["f"] = std::move(f);
    } else if (opt.family == "product") {
      const auto x = FreeWord::parse(opt.x);
      const auto y = FreeWord::parse(opt.y);
      ojson terms = ojson::array();
      const auto product = fuse(x, y);
      for (const auto& [w, count] : product)
        for (int k = 0; k < count; ++k) terms.push_back(w.to_string());
      out.payload["terms"] = std::move(terms);
      if (opt.n != 0) {
        DimensionTable table(opt.n);
        BigInt rhs = 0;
        for (const auto& [w, count] : product) rhs += count * table.dim(w);
        out.payload["lhs"] = big_number(table.dim(x) * table.dim(y));
        out.payload["rhs"] = big_number(rhs);
      }
    } else {
      if (opt.max_len < 0) invalid("fusion verify needs --max-len");
      const auto r = verify_fusion_dims(opt.n, opt.max_len);
      out.payload["formula_ok"] = r.formula_ok;
      out.payload["minimality_ok"] = r.minimality_ok;
      out.payload["swap_ok"] = r.swap_ok;
      out.payload["pairs_checked"] = r.pairs_checked;
      out.payload["words_checked"] = r.words_checked;
      out.payload["counterexamples"] = r.counterexamples;
    }
  }
  return out;
}

std::string render(const std::string& command, const Outcome& o) {
  ojson report;
  report["command"] = command;
  report["status"] = o.status;
  report["payload"] = o.payload;
  report["diagnostics"] = o.diagnostics;
  return report.dump() + "\n";
}

int exit_code_for(const std::string& status) {
  if (status == "ok") return 0;
  if (status == "error") return 1;
  return 2;
}

Outcome failure(const std::string& status, std::string_view code, const std::string& message,
                std::vector<std::string> diagnostics = {}) {
  Outcome o;
  o.status = status;
  o.payload["code"] = std::string(code);
  o.payload["message"] = message;
  o.diagnostics = std::move(diagnostics);
  return o;
}

}  // namespace

RunResult run(const std::vector<std::string>& args, const std::string& stdin_text) {
  Options opt;
  CLI::App app{"Classification and free-product decomposition of A_u(Q) and B_u(Q)", "uqg"};
  app.require_subcommand(1, 1);

  auto add_matrix_options = [&](CLI::App* sub) {
    sub->add_option("--matrix", opt.matrices, "matrix document path (repeat for two)");
    sub->add_option("--tol", opt.tol, "relative equality tolerance");
    sub->add_option("--seed", opt.seed, "seed for the degenerate B_u search");
  };
  for (const char* name : {"classify", "isomorphic", "decompose", "canon"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("family", opt.family)->required()->check(CLI::IsMember({"au", "bu"}));
    add_matrix_options(sub);
    if (std::string(name) == "decompose") sub->add_option("--partition", opt.partition, "explicit B_u blocks as JSON");
    sub->callback([&opt, name] { opt.command = name; });
  }
  auto* fusion = app.add_subcommand("fusion");
  fusion->add_option("action", opt.family)->required()->check(CLI::IsMember({"dims", "product", "verify"}));
  fusion->add_option("--n", opt.n, "fundamental dimension");
  fusion->add_option("--max-len", opt.max_len, "maximal word length");
  fusion->add_option("--x", opt.x, "left word over {a, b}");
  fusion->add_option("--y", opt.y, "right word over {a, b}");
  fusion->add_option("--tol", opt.tol);
  fusion->callback([&opt] { opt.command = "fusion"; });

  std::vector<std::string> argv_store{"uqg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  std::string label;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    return {0, app.help()};
  } catch (const CLI::ParseError& e) {
    label = args.empty() ? "" : args.front();
    return {1, render(label, failure("error", "usage", e.what()))};
  }
  label = opt.command + " " + opt.family;

  Outcome outcome;
  try {
    outcome = execute(opt, stdin_text);
  } catch (const Error& e) {
    std::string status = "error";
    if (e.code() == ErrorCode::UnsupportedInput || e.code() == ErrorCode::AmbiguousClustering) status = "unsupported";
    if (e.code() == ErrorCode::Undecidable) status = "undecided";
    outcome = failure(status, code_name(e.code()), e.what(), e.diagnostics());
  } catch (const std::exception& e) {
    outcome = failure("error", "internal", e.what());
  }
  return {exit_code_for(outcome.status), render(label, outcome)};
}

}  // namespace uqg::cli
