// Random generators and independent oracles shared by the unit and acceptance suites.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "uqg/fusion.hpp"
#include "uqg/linalg.hpp"

namespace uqg::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Complex random_phase(std::mt19937_64& rng) {
  return std::polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

inline Mat random_unitary(int n, std::mt19937_64& rng) { return haar_unitary(n, rng); }

inline Mat random_diagonal_unitary(int n, std::mt19937_64& rng) {
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = random_phase(rng);
  return d;
}

/// W1 diag(sigma) W2 with sigma log-uniform in [lo, hi].
inline Mat random_invertible(int n, std::mt19937_64& rng, double lo = 0.4, double hi = 2.5) {
  Eigen::VectorXcd s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(uniform(rng, std::log(lo), std::log(hi)));
  return random_unitary(n, rng) * s.asDiagonal() * random_unitary(n, rng);
}

inline Mat random_positive(int n, std::mt19937_64& rng, double spread = 1.5) {
  const Mat v = random_unitary(n, rng);
  Eigen::VectorXcd d(n);
  for (int i = 0; i < n; ++i) d(i) = std::exp(uniform(rng, -spread, spread));
  return v * d.asDiagonal() * v.adjoint();
}

/// [[0, T], [c conj(T)^-1, 0]], exactly Q conj(Q) = c I.
inline Mat block_bu(const Mat& t, double c) {
  const auto m = t.rows();
  Mat q = Mat::Zero(2 * m, 2 * m);
  q.block(0, m, m, m) = t;
  q.block(m, 0, m, m) = c * t.conjugate().inverse();
  return q;
}

/// Random parameter with Q conj(Q) = c I. For c = +1, V conj(V)^-1 works for
/// every n; for c = -1 (n even) the symplectic J is inserted.
inline Mat random_bu(int n, int c, std::mt19937_64& rng) {
  const Mat v = random_invertible(n, rng);
  if (c > 0) return v * v.conjugate().inverse();
  Mat j = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; i += 2) {
    j(i, i + 1) = 1.0;
    j(i + 1, i) = -1.0;
  }
  return v * j * v.conjugate().inverse();
}

/// 2x2 Hermitian eigenvalues by the quadratic formula, descending.
inline std::vector<double> eig2_hermitian(double a, Complex b, double d) {
  const double mean = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mean + rad, mean - rad};
}

/// Brute-force fusion: every split x = a g, compare involute(g) literally
/// against the prefix of y.
inline std::vector<FreeWord> fuse_oracle(const FreeWord& x, const FreeWord& y) {
  std::vector<FreeWord> out;
  const auto& xs = x.letters();
  for (std::size_t cut = 0; cut <= xs.size(); ++cut) {
    std::vector<Letter> g(xs.begin() + cut, xs.end());
    std::vector<Letter> gbar(g.rbegin(), g.rend());
    for (auto& l : gbar) l = l == Letter::alpha ? Letter::beta : Letter::alpha;
    const auto& ys = y.letters();
    if (gbar.size() > ys.size() || !std::equal(gbar.begin(), gbar.end(), ys.begin())) continue;
    std::vector<Letter> ab(xs.begin(), xs.begin() + cut);
    ab.insert(ab.end(), ys.begin() + gbar.size(), ys.end());
    out.emplace_back(std::move(ab));
  }
  return out;
}

/// f(k) by the three-term recursion in plain BigInt arithmetic.
inline BigInt f_oracle(int n, std::size_t k) {
  BigInt prev = 1;
  BigInt cur = n;
  if (k == 0) return prev;
  for (std::size_t i = 1; i < k; ++i) {
    BigInt next = BigInt(n) * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Dimension via the splitting identity: cut the word at every repeated
/// letter and multiply f over the alternating runs.
inline BigInt dim_oracle(int n, const FreeWord& w) {
  const auto& ls = w.letters();
  BigInt d = 1;
  std::size_t run = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i > 0 && ls[i] == ls[i - 1]) {
      d *= f_oracle(n, run);
      run = 0;
    }
    ++run;
  }
  return d * f_oracle(n, run);
}

}  // namespace uqg::testing
