#include "uqg/normal_forms.hpp"

#include <cmath>
#include <string>

namespace uqg {

std::vector<double> MuSignature::canonical_diagonal() const {
  std::vector<double> d;
  d.reserve(n);
  for (double m : mu) d.push_back(m);
  if (n % 2 == 1) d.push_back(1.0);
  for (auto it = mu.rbegin(); it != mu.rend(); ++it) d.push_back(1.0 / *it);
  return d;
}

AuNormalization normalize_au(const ComplexMatrix& q, const Tolerance& tol) {
  if (!predicates(q, tol).is_positive) throw Error(ErrorCode::NotPositive, "A_u parameter must be positive definite");
  const auto spectrum = eigvals_hermitian(q, tol);
  double tr = 0.0;
  double tr_inv = 0.0;
  for (double s : spectrum) {
    tr += s;
    tr_inv += 1.0 / s;
  }
  const double c = std::sqrt(tr_inv / tr);
  Mat qn = c * q.mat();
  qn = 0.5 * (qn + qn.adjoint()).eval();
  return {c, ComplexMatrix(std::move(qn))};
}

double qqbar_scalar(const ComplexMatrix& q, const Tolerance& tol) {
  require_invertible(q, tol);
  const Mat m = q.mat() * q.mat().conjugate();
  const auto n = m.rows();
  const double lambda = m.diagonal().real().mean();
  const double scale = q.mat().squaredNorm();
  if ((m - lambda * Mat::Identity(n, n)).norm() > tol.eq * scale) {
    throw Error(ErrorCode::NotScalarQQbar, "Q conj(Q) is not a real scalar matrix");
  }
  if (std::abs(lambda) <= tol.singular * scale) {
    throw Error(ErrorCode::NotScalarQQbar, "Q conj(Q) vanishes");
  }
  return lambda;
}

BuNormalization normalize_bu(const ComplexMatrix& q, const Tolerance& tol) {
  const double lambda = qqbar_scalar(q, tol);
  if (q.size() % 2 == 1 && lambda < 0.0) {
    throw Error(ErrorCode::OddNegative, "Q conj(Q) = lambda I with lambda < 0 is impossible for odd n");
  }
  const double r = 1.0 / std::sqrt(std::abs(lambda));
  return {r, lambda > 0.0 ? 1 : -1, ComplexMatrix(Mat(r * q.mat()))};
}

MuSignature mu_signature(const ComplexMatrix& q, const Tolerance& tol) {
  const auto norm = normalize_bu(q, tol);
  const int n = norm.qn.size();
  // Spectrum of |Qn| = singular values of Qn, descending.
  Eigen::JacobiSVD<Mat> svd(norm.qn.mat());
  const Eigen::VectorXd s = svd.singularValues();
  const double pair_tol = tol.eq * n * (s(0) / s(n - 1));

  MuSignature sig;
  sig.n = n;
  sig.k = n / 2;
  for (int i = 0; i < sig.k; ++i) {
    const double hi = s(i);
    const double lo = s(n - 1 - i);
    if (std::abs(hi * lo - 1.0) > pair_tol) {
      throw Error(ErrorCode::PairingViolation,
                  "spectrum of |Q| does not pair as (mu, 1/mu) at index " + std::to_string(i));
    }
    double m = std::sqrt(hi / lo);
    if (std::abs(m - 1.0) <= tol.eq) m = 1.0;
    sig.mu.push_back(m);
  }
  if (n % 2 == 1 && std::abs(s(sig.k) - 1.0) > pair_tol) {
    throw Error(ErrorCode::PairingViolation, "middle singular value of odd-size |Q| is not 1");
  }
  return sig;
}

}  // namespace uqg
