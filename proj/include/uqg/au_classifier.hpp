#pragma once

#include <vector>

#include "uqg/linalg.hpp"

namespace uqg {

/// Canonical isomorphism invariant of A_u(Q) for positive Q.
///
/// The spectrum of the trace-balanced parameter, descending, or the reversed
/// elementwise inverse of it, whichever is lexicographically smaller.
struct AuInvariant {
  int n = 0;
  std::vector<double> spectrum;
};

/// F-matrix eigenvalues for the classes of u and its conjugate.
struct FClassPair {
  std::vector<double> f_u;
  std::vector<double> f_ubar;
};

/// Lexicographic comparison where entries within tol.eq (relative) count as equal.
/// Returns <0, 0, >0.
int compare_spectra(const std::vector<double>& a, const std::vector<double>& b, const Tolerance& tol);

/// reverse(1 / s)
std::vector<double> reverse_inverse(const std::vector<double>& s);

AuInvariant au_invariant(const ComplexMatrix& q, const Tolerance& tol = {});
bool au_isomorphic(const ComplexMatrix& q1, const ComplexMatrix& q2, const Tolerance& tol = {});
bool same_class(const AuInvariant& a, const AuInvariant& b, const Tolerance& tol = {});
FClassPair class_f_matrices(const ComplexMatrix& q, const Tolerance& tol = {});

}  // namespace uqg
