#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uqg/error.hpp"

namespace uqg {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Tolerance policy threaded through every numerical decision.
///
/// `eq` is a relative tolerance for scalar and matrix equality, `cluster` an
/// angular tolerance (radians) for grouping phases, `singular` the relative
/// floor below which the smallest singular value counts as zero.
struct Tolerance {
  double eq = 1e-9;
  double cluster = 1e-7;
  double singular = 1e-12;

  /// Throws InvalidTolerance unless all fields are positive and eq < 1e-2.
  void validate() const;

  /// The single-knob form: cluster = 100 * eq, singular = 1e-3 * eq.
  static Tolerance from_eq(double eq);
};

/// Dense square complex matrix with finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(Mat m);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(int n);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  static ComplexMatrix diagonal(std::span<const double> d);

  int size() const noexcept { return static_cast<int>(m_.rows()); }
  const Mat& mat() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double norm() const { return m_.norm(); }
  ComplexMatrix adjoint() const { return ComplexMatrix(Mat(m_.adjoint())); }
  ComplexMatrix conjugate() const { return ComplexMatrix(Mat(m_.conjugate())); }
  ComplexMatrix transpose() const { return ComplexMatrix(Mat(m_.transpose())); }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    return ComplexMatrix(Mat(a.m_ * b.m_));
  }
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a) { return ComplexMatrix(Mat(s * a.m_)); }

 private:
  Mat m_;
};

/// Relative Frobenius distance test: ||a - b|| <= rel * scale.
bool approx_equal(const Mat& a, const Mat& b, double rel, double scale);

struct HermitianEigen {
  std::vector<double> values;  // descending
  Mat vectors;                 // columns match `values`
};

/// Descending spectrum (with multiplicity) of a Hermitian matrix.
/// Values within tol.eq of each other (relative to the spectral radius) are
/// replaced by their group mean so that ties are deterministic.
std::vector<double> eigvals_hermitian(const ComplexMatrix& q, const Tolerance& tol = {});

/// Full eigendecomposition, descending. Each eigenvector's entry of largest
/// modulus (first index on ties) is rotated to be real and positive.
HermitianEigen eigh(const ComplexMatrix& q, const Tolerance& tol = {});

struct Polar {
  ComplexMatrix unitary;   // U
  ComplexMatrix positive;  // P = sqrt(Q* Q)
};

/// Right polar decomposition Q = U * sqrt(Q* Q). Throws Singular.
Polar polar_decompose(const ComplexMatrix& q, const Tolerance& tol = {});

struct Predicates {
  bool is_hermitian = false;
  bool is_normal = false;
  bool is_unitary = false;
  bool is_positive = false;
  std::optional<Complex> scalar_of_identity;
};

Predicates predicates(const ComplexMatrix& q, const Tolerance& tol = {});

/// sigma_min / sigma_max > tol.singular.
bool is_invertible(const ComplexMatrix& q, const Tolerance& tol = {});
void require_invertible(const ComplexMatrix& q, const Tolerance& tol = {});

/// Haar-distributed n x n unitary (QR of a complex Gaussian with phase fix).
Mat haar_unitary(int n, std::mt19937_64& rng);

/// exp(i H) for Hermitian H, computed spectrally so the result is unitary.
Mat unitary_exp(const Mat& hermitian);

}  // namespace uqg
