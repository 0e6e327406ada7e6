#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace uqg {

using BigInt = boost::multiprecision::cpp_int;

enum class Letter : unsigned char { alpha = 0, beta = 1 };

constexpr Letter bar(Letter l) { return l == Letter::alpha ? Letter::beta : Letter::alpha; }

/// Element of the free monoid on {alpha, beta}; the empty word is the unit e.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  /// "a"/"b" letters, "e" or "" for the unit. Throws InvalidInput otherwise.
  static FreeWord parse(std::string_view text);
  /// Word of the given length whose i-th letter is bit i of `bits` (0 = alpha).
  static FreeWord from_bits(std::size_t length, unsigned long long bits);
  /// alpha beta alpha beta ... of length k
  static FreeWord alternating(std::size_t k);

  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const std::vector<Letter>& letters() const noexcept { return letters_; }

  FreeWord operator*(const FreeWord& other) const;
  FreeWord prefix(std::size_t len) const;
  FreeWord suffix(std::size_t len) const;
  /// Exchange alpha and beta letterwise without reversing.
  FreeWord swapped() const;

  std::string to_string() const;

  auto operator<=>(const FreeWord&) const = default;
  bool operator==(const FreeWord&) const = default;

 private:
  std::vector<Letter> letters_;
};

struct FreeWordHash {
  std::size_t operator()(const FreeWord& w) const noexcept;
};

/// Anti-multiplicative involution: reverse and swap letters.
FreeWord involute(const FreeWord& x);

/// Multiset of words, keyed by word with multiplicities.
using WordMultiset = std::map<FreeWord, int>;

/// Terms a*b over all factorizations x = a g, y = involute(g) b.
WordMultiset fuse(const FreeWord& x, const FreeWord& y);

/// Memoized dimension function for fundamental dimension n.
/// Not synchronized: share across threads only through `lookup` after warm-up.
class DimensionTable {
 public:
  explicit DimensionTable(int n);

  int n() const noexcept { return n_; }
  const BigInt& dim(const FreeWord& w);
  /// Read-only access to an already memoized word; throws std::out_of_range.
  const BigInt& lookup(const FreeWord& w) const;
  /// Memoize every word of length <= max_len.
  void warm(std::size_t max_len);
  std::size_t size() const noexcept { return memo_.size(); }

 private:
  int n_;
  std::unordered_map<FreeWord, BigInt, FreeWordHash> memo_;
};

BigInt dim_word(const FreeWord& x, DimensionTable& table);

/// f(0..k) with f(0) = 1, f(1) = n, f(k+1) = n f(k) - f(k-1).
std::vector<BigInt> min_dim_sequence(int n, int k);

struct FusionReport {
  bool formula_ok = true;
  bool minimality_ok = true;
  bool swap_ok = true;
  std::size_t pairs_checked = 0;
  std::size_t words_checked = 0;
  std::vector<std::string> counterexamples;

  bool all_ok() const { return formula_ok && minimality_ok && swap_ok; }
  bool operator==(const FusionReport&) const = default;
};

/// All words of length <= max_len in shortlex order.
std::vector<FreeWord> words_up_to(std::size_t max_len);

/// Reference implementation: one thread, straightforward loops.
FusionReport verify_fusion_dims_serial(int n, int max_len);

/// OpenMP kernel over word pairs; output is identical to the serial one.
FusionReport verify_fusion_dims(int n, int max_len);

}  // namespace uqg
