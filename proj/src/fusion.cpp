#include "uqg/fusion.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>
#include <utility>

#include <omp.h>

#include "uqg/error.hpp"

namespace uqg {

FreeWord FreeWord::parse(std::string_view text) {
  std::vector<Letter> letters;
  if (text == "e") return FreeWord();
  for (char ch : text) {
    switch (ch) {
      case 'a': letters.push_back(Letter::alpha); break;
      case 'b': letters.push_back(Letter::beta); break;
      default: throw Error(ErrorCode::InvalidInput, "word letters must be 'a' or 'b' (or \"e\" for the unit)");
    }
  }
  return FreeWord(std::move(letters));
}

FreeWord FreeWord::from_bits(std::size_t length, unsigned long long bits) {
  std::vector<Letter> letters(length);
  for (std::size_t i = 0; i < length; ++i) letters[i] = ((bits >> i) & 1ULL) ? Letter::beta : Letter::alpha;
  return FreeWord(std::move(letters));
}

FreeWord FreeWord::alternating(std::size_t k) {
  std::vector<Letter> letters(k);
  for (std::size_t i = 0; i < k; ++i) letters[i] = i % 2 == 0 ? Letter::alpha : Letter::beta;
  return FreeWord(std::move(letters));
}

FreeWord FreeWord::operator*(const FreeWord& other) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return FreeWord(std::move(out));
}

FreeWord FreeWord::prefix(std::size_t len) const {
  return FreeWord(std::vector<Letter>(letters_.begin(), letters_.begin() + len));
}

FreeWord FreeWord::suffix(std::size_t len) const {
  return FreeWord(std::vector<Letter>(letters_.end() - len, letters_.end()));
}

FreeWord FreeWord::swapped() const {
  std::vector<Letter> out(letters_);
  for (auto& l : out) l = bar(l);
  return FreeWord(std::move(out));
}

std::string FreeWord::to_string() const {
  if (letters_.empty()) return "e";
  std::string s;
  s.reserve(letters_.size());
  for (auto l : letters_) s.push_back(l == Letter::alpha ? 'a' : 'b');
  return s;
}

std::size_t FreeWordHash::operator()(const FreeWord& w) const noexcept {
  // FNV-1a over letters, length folded in so "a" and "aa..." differ.
  std::size_t h = 1469598103934665603ULL ^ w.length();
  for (auto l : w.letters()) {
    h ^= static_cast<std::size_t>(l) + 1;
    h *= 1099511628211ULL;
  }
  return h;
}

FreeWord involute(const FreeWord& x) {
  std::vector<Letter> out(x.letters().rbegin(), x.letters().rend());
  for (auto& l : out) l = bar(l);
  return FreeWord(std::move(out));
}

WordMultiset fuse(const FreeWord& x, const FreeWord& y) {
  WordMultiset out;
  const auto& xs = x.letters();
  const auto& ys = y.letters();
  // g = last `len` letters of x; involute(g) must be the first `len` letters of y.
  for (std::size_t len = 0; len <= std::min(xs.size(), ys.size()); ++len) {
    bool match = true;
    for (std::size_t i = 0; i < len && match; ++i) match = ys[i] == bar(xs[xs.size() - 1 - i]);
    if (!match) break;  // a longer g extends a shorter one, so no later g matches either
    std::vector<Letter> ab(xs.begin(), xs.end() - len);
    ab.insert(ab.end(), ys.begin() + len, ys.end());
    ++out[FreeWord(std::move(ab))];
  }
  return out;
}

DimensionTable::DimensionTable(int n) : n_(n) {
  if (n < 2) throw Error(ErrorCode::BadN, "fundamental dimension n must be >= 2");
  memo_.emplace(FreeWord(), BigInt(1));
}

const BigInt& DimensionTable::dim(const FreeWord& w) {
  if (auto it = memo_.find(w); it != memo_.end()) return it->second;
  // d(x g) = n d(x) - [x ends in bar(g)] d(x minus its last letter)
  const auto& ls = w.letters();
  const std::size_t len = ls.size();
  BigInt value = BigInt(n_) * dim(w.prefix(len - 1));
  if (len >= 2 && ls[len - 2] == bar(ls[len - 1])) value -= dim(w.prefix(len - 2));
  return memo_.emplace(w, std::move(value)).first->second;
}

const BigInt& DimensionTable::lookup(const FreeWord& w) const { return memo_.at(w); }

void DimensionTable::warm(std::size_t max_len) {
  for (std::size_t len = 0; len <= max_len; ++len)
    for (unsigned long long bits = 0; bits < (1ULL << len); ++bits) dim(FreeWord::from_bits(len, bits));
}

BigInt dim_word(const FreeWord& x, DimensionTable& table) { return table.dim(x); }

std::vector<BigInt> min_dim_sequence(int n, int k) {
  if (n < 2) throw Error(ErrorCode::BadN, "fundamental dimension n must be >= 2");
  if (k < 0) throw Error(ErrorCode::InvalidInput, "sequence length must be >= 0");
  std::vector<BigInt> f;
  f.reserve(k + 1);
  f.emplace_back(1);
  if (k >= 1) f.emplace_back(n);
  for (int i = 1; i < k; ++i) f.push_back(BigInt(n) * f[i] - f[i - 1]);
  return f;
}

std::vector<FreeWord> words_up_to(std::size_t max_len) {
  std::vector<FreeWord> out;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (unsigned long long bits = 0; bits < (1ULL << len); ++bits) out.push_back(FreeWord::from_bits(len, bits));
  return out;
}

namespace {

constexpr std::size_t kMaxCounterexamples = 64;

void check_args(int n, int max_len) {
  if (n < 2) throw Error(ErrorCode::BadN, "fundamental dimension n must be >= 2");
  if (max_len < 1 || max_len > 24) throw Error(ErrorCode::InvalidInput, "max_len must be in [1, 24]");
}

std::string formula_violation(const FreeWord& x, const FreeWord& y, const BigInt& lhs, const BigInt& rhs) {
  std::ostringstream s;
  s << "formula: d(" << x.to_string() << ") d(" << y.to_string() << ") = " << lhs << " != " << rhs;
  return s.str();
}

BigInt fusion_sum(const FreeWord& x, const FreeWord& y, const DimensionTable& table) {
  BigInt sum = 0;
  for (const auto& [w, count] : fuse(x, y)) sum += count * table.lookup(w);
  return sum;
}

// Minimality and swap checks are per word and cheap; shared by both kernels.
void check_words(const std::vector<FreeWord>& words, const DimensionTable& table, FusionReport& report) {
  const BigInt n = table.n();
  for (const auto& x : words) {
    const BigInt& d = table.lookup(x);
    if ((x.length() == 1 && d != n) || (x.length() >= 2 && d <= n)) {
      report.minimality_ok = false;
      if (report.counterexamples.size() < kMaxCounterexamples)
        report.counterexamples.push_back("minimality: d(" + x.to_string() + ") = " + d.str());
    }
    if (table.lookup(x.swapped()) != d) {
      report.swap_ok = false;
      if (report.counterexamples.size() < kMaxCounterexamples)
        report.counterexamples.push_back("swap: d(" + x.to_string() + ") != d(" + x.swapped().to_string() + ")");
    }
  }
  report.words_checked = words.size();
}

}  // namespace

FusionReport verify_fusion_dims_serial(int n, int max_len) {
  check_args(n, max_len);
  DimensionTable table(n);
  const auto words = words_up_to(max_len);
  FusionReport report;
  for (const auto& x : words) {
    for (const auto& y : words) {
      const BigInt lhs = table.dim(x) * table.dim(y);
      BigInt rhs = 0;
      for (const auto& [w, count] : fuse(x, y)) rhs += count * table.dim(w);
      ++report.pairs_checked;
      if (lhs != rhs) {
        report.formula_ok = false;
        if (report.counterexamples.size() < kMaxCounterexamples)
          report.counterexamples.push_back(formula_violation(x, y, lhs, rhs));
      }
    }
  }
  for (const auto& x : words) table.dim(x.swapped());
  check_words(words, table, report);
  return report;
}

FusionReport verify_fusion_dims(int n, int max_len) {
  check_args(n, max_len);
  DimensionTable table(n);
  table.warm(2 * static_cast<std::size_t>(max_len));
  const auto words = words_up_to(max_len);
  const auto count = static_cast<long>(words.size());

  // (x index, y index, message); merged and sorted so the report is schedule-independent.
  using Violation = std::tuple<long, long, std::string>;
  std::vector<std::vector<Violation>> per_thread(omp_get_max_threads());
  std::size_t pairs = 0;

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : pairs)
  for (long i = 0; i < count; ++i) {
    auto& sink = per_thread[omp_get_thread_num()];
    const BigInt& dx = table.lookup(words[i]);
    for (long j = 0; j < count; ++j) {
      const BigInt lhs = dx * table.lookup(words[j]);
      const BigInt rhs = fusion_sum(words[i], words[j], table);
      ++pairs;
      if (lhs != rhs) sink.emplace_back(i, j, formula_violation(words[i], words[j], lhs, rhs));
    }
  }

  std::vector<Violation> all;
  for (auto& v : per_thread) std::move(v.begin(), v.end(), std::back_inserter(all));
  std::sort(all.begin(), all.end());

  FusionReport report;
  report.pairs_checked = pairs;
  report.formula_ok = all.empty();
  for (std::size_t k = 0; k < all.size() && k < kMaxCounterexamples; ++k)
    report.counterexamples.push_back(std::get<2>(all[k]));
  check_words(words, table, report);
  return report;
}

}  // namespace uqg
