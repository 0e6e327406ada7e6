#include "uqg/au_classifier.hpp"

#include <algorithm>
#include <cmath>

#include "uqg/normal_forms.hpp"

namespace uqg {

int compare_spectra(const std::vector<double>& a, const std::vector<double>& b, const Tolerance& tol) {
  const std::size_t len = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < len; ++i) {
    if (std::abs(a[i] - b[i]) > tol.eq * std::max(std::abs(a[i]), std::abs(b[i]))) return a[i] < b[i] ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

std::vector<double> reverse_inverse(const std::vector<double>& s) {
  std::vector<double> out(s.rbegin(), s.rend());
  for (double& v : out) v = 1.0 / v;
  return out;
}

AuInvariant au_invariant(const ComplexMatrix& q, const Tolerance& tol) {
  const auto norm = normalize_au(q, tol);
  auto s = eigvals_hermitian(norm.qn, tol);
  auto dual = reverse_inverse(s);
  AuInvariant inv;
  inv.n = q.size();
  inv.spectrum = compare_spectra(dual, s, tol) < 0 ? std::move(dual) : std::move(s);
  return inv;
}

bool same_class(const AuInvariant& a, const AuInvariant& b, const Tolerance& tol) {
  return a.n == b.n && compare_spectra(a.spectrum, b.spectrum, tol) == 0;
}

bool au_isomorphic(const ComplexMatrix& q1, const ComplexMatrix& q2, const Tolerance& tol) {
  const auto a = au_invariant(q1, tol);
  const auto b = au_invariant(q2, tol);
  return same_class(a, b, tol);
}

FClassPair class_f_matrices(const ComplexMatrix& q, const Tolerance& tol) {
  const auto norm = normalize_au(q, tol);
  FClassPair f;
  f.f_u = eigvals_hermitian(norm.qn, tol);
  f.f_ubar = reverse_inverse(f.f_u);
  return f;
}

}  // namespace uqg
