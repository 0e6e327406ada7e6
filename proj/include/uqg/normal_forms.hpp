#pragma once

#include <vector>

#include "uqg/linalg.hpp"

namespace uqg {

/// Positive parameter rescaled so that Tr(Qn) = Tr(Qn^-1).
struct AuNormalization {
  double c = 1.0;
  ComplexMatrix qn;
};

/// Parameter with Q conj(Q) = lambda I rescaled to Qn conj(Qn) = sign I.
struct BuNormalization {
  double r = 1.0;
  int c = 1;  // +1 or -1
  ComplexMatrix qn;
};

/// The >= 1 half of the paired spectrum (mu, 1/mu) of |Qn|.
struct MuSignature {
  int n = 0;
  int k = 0;               // floor(n / 2)
  std::vector<double> mu;  // descending, each >= 1

  /// diag(mu_1..mu_k, [1], 1/mu_k..1/mu_1)
  std::vector<double> canonical_diagonal() const;
};

AuNormalization normalize_au(const ComplexMatrix& q, const Tolerance& tol = {});

/// Real lambda with Q conj(Q) = lambda I, or throws NotScalarQQbar.
double qqbar_scalar(const ComplexMatrix& q, const Tolerance& tol = {});

BuNormalization normalize_bu(const ComplexMatrix& q, const Tolerance& tol = {});

/// Accepts any parameter with real scalar Q conj(Q); normalizes internally.
MuSignature mu_signature(const ComplexMatrix& q, const Tolerance& tol = {});

}  // namespace uqg
