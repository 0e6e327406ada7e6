#include "uqg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace uqg {

void Tolerance::validate() const {
  if (!(eq > 0.0) || !(cluster > 0.0) || !(singular > 0.0) || !(eq < 1e-2) || !std::isfinite(eq) ||
      !std::isfinite(cluster) || !std::isfinite(singular)) {
    throw Error(ErrorCode::InvalidTolerance, "tolerances must be positive with eq < 1e-2");
  }
}

Tolerance Tolerance::from_eq(double eq) {
  Tolerance t{eq, 100.0 * eq, 1e-3 * eq};
  t.validate();
  return t;
}

ComplexMatrix::ComplexMatrix(Mat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw Error(ErrorCode::InvalidInput, "matrix must be square and non-empty");
  }
  if (!m_.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "matrix entries must be finite");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::InvalidInput, "matrix must be square");
    }
    Eigen::Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  *this = ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::identity(int n) { return ComplexMatrix(Mat(Mat::Identity(n, n))); }

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  std::vector<Complex> c(d.begin(), d.end());
  return diagonal(std::span<const Complex>(c));
}

bool approx_equal(const Mat& a, const Mat& b, double rel, double scale) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() <= rel * scale;
}

namespace {

void require_hermitian(const ComplexMatrix& q, const Tolerance& tol) {
  const Mat& m = q.mat();
  if ((m - m.adjoint()).norm() > tol.eq * m.norm()) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
  }
}

// Replace runs of near-equal descending values by their mean.
void group_ties(std::vector<double>& values, double abs_tol) {
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    while (end < values.size() && values[end - 1] - values[end] <= abs_tol) ++end;
    if (end - start > 1) {
      const double mean = std::accumulate(values.begin() + start, values.begin() + end, 0.0) / (end - start);
      std::fill(values.begin() + start, values.begin() + end, mean);
    }
    start = end;
  }
}

}  // namespace

HermitianEigen eigh(const ComplexMatrix& q, const Tolerance& tol) {
  require_hermitian(q, tol);
  const Mat h = 0.5 * (q.mat() + q.mat().adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  const auto n = h.rows();

  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(n - 1 - k);
    Eigen::VectorXcd v = solver.eigenvectors().col(n - 1 - k);
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > best * (1.0 + 1e-12)) {
        best = std::abs(v(i));
        pivot = i;
      }
    }
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    out.vectors.col(k) = v;
  }

  const double scale = std::max(std::abs(out.values.front()), std::abs(out.values.back()));
  group_ties(out.values, tol.eq * scale);

  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(out.values.data(), n);
  const Mat recon = out.vectors * d.cast<Complex>().asDiagonal() * out.vectors.adjoint();
  if ((recon - q.mat()).norm() > tol.eq * std::max(q.norm(), 1e-300) * std::sqrt(static_cast<double>(n))) {
    throw Error(ErrorCode::NotHermitian, "spectral reconstruction residual exceeds tolerance");
  }
  return out;
}

std::vector<double> eigvals_hermitian(const ComplexMatrix& q, const Tolerance& tol) { return eigh(q, tol).values; }

bool is_invertible(const ComplexMatrix& q, const Tolerance& tol) {
  Eigen::JacobiSVD<Mat> svd(q.mat());
  const auto& s = svd.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) > tol.singular * s(0);
}

void require_invertible(const ComplexMatrix& q, const Tolerance& tol) {
  if (!is_invertible(q, tol)) throw Error(ErrorCode::Singular, "matrix is singular within tolerance");
}

Polar polar_decompose(const ComplexMatrix& q, const Tolerance& tol) {
  Eigen::JacobiSVD<Mat> svd(q.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(s.size() - 1) <= tol.singular * s(0)) {
    throw Error(ErrorCode::Singular, "matrix is singular within tolerance");
  }
  // Q = W S V*  =>  U = W V*, P = V S V*.
  const Mat& w = svd.matrixU();
  const Mat& v = svd.matrixV();
  Mat u = w * v.adjoint();
  Mat p = v * s.cast<Complex>().asDiagonal() * v.adjoint();
  p = 0.5 * (p + p.adjoint()).eval();
  return {ComplexMatrix(std::move(u)), ComplexMatrix(std::move(p))};
}

Predicates predicates(const ComplexMatrix& q, const Tolerance& tol) {
  const Mat& m = q.mat();
  const auto n = m.rows();
  const double norm = m.norm();
  Predicates p;
  p.is_hermitian = (m - m.adjoint()).norm() <= tol.eq * norm;
  p.is_normal = (m * m.adjoint() - m.adjoint() * m).norm() <= tol.eq * norm * norm;
  p.is_unitary = (m.adjoint() * m - Mat::Identity(n, n)).norm() <= tol.eq * std::sqrt(static_cast<double>(n));
  if (p.is_hermitian) {
    const Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    const double radius = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    p.is_positive = radius > 0.0 && ev(0) > tol.singular * radius;
  }
  const Complex lambda = m.trace() / static_cast<double>(n);
  if ((m - lambda * Mat::Identity(n, n)).norm() <= tol.eq * norm) p.scalar_of_identity = lambda;
  return p;
}

Mat haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Mat g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

Mat unitary_exp(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (hermitian + hermitian.adjoint()));
  const Eigen::VectorXcd phases = (solver.eigenvalues().cast<Complex>() * Complex(0.0, 1.0)).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace uqg
