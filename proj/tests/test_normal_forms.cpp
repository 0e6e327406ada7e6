#include "doctest.h"

#include "support.hpp"
#include "uqg/error.hpp"
#include "uqg/normal_forms.hpp"

using namespace uqg;
using namespace uqg::testing;

namespace {

constexpr Complex I{0.0, 1.0};

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidInput;
}

double trace_balance_gap(const Mat& qn) {
  const Mat h = qn * qn.adjoint();
  return std::abs(h.trace().real() - h.inverse().trace().real());
}

}  // namespace

TEST_CASE("normalize_au closed forms") {
  {
    const auto r = normalize_au(ComplexMatrix::diagonal(std::vector<double>{4, 1}));
    CHECK(r.c == doctest::Approx(std::sqrt(1.25 / 5.0)).epsilon(1e-14));
    CHECK(approx_equal(r.qn.mat(), ComplexMatrix::diagonal(std::vector<double>{2, 0.5}).mat(), 1e-14, 1));
  }
  {
    const auto r = normalize_au(ComplexMatrix::identity(4));
    CHECK(r.c == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    const auto r = normalize_au(ComplexMatrix::diagonal(std::vector<double>{2, 1}));
    CHECK(r.c == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(r.qn(0, 0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.qn(1, 1).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  }
  CHECK(code_of([] { normalize_au(ComplexMatrix::diagonal(std::vector<double>{1, -1})); }) == ErrorCode::NotPositive);
  CHECK(code_of([] { normalize_au(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}}); }) == ErrorCode::NotPositive);
}

TEST_CASE("normalize_au is idempotent and balances traces") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(rng, 1, 6);
    const ComplexMatrix q(Mat(uniform(rng, 0.1, 10.0) * random_positive(n, rng)));
    const auto r = normalize_au(q);
    CHECK(std::abs(r.qn.mat().trace().real() - r.qn.mat().inverse().trace().real()) <= 1e-10 * n);
    CHECK(std::abs(normalize_au(r.qn).c - 1.0) <= 1e-10);
  }
}

TEST_CASE("normalize_bu examples") {
  {
    const auto r = normalize_bu(ComplexMatrix{{0.0, 2.0}, {0.5, 0.0}});
    CHECK(r.r == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.c == 1);
  }
  {
    const ComplexMatrix q{{0.0, 6.0 * I}, {1.5 * I, 0.0}};
    CHECK(qqbar_scalar(q) == doctest::Approx(9.0).epsilon(1e-14));
    const auto r = normalize_bu(q);
    CHECK(r.r == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r.c == 1);
  }
  {
    const auto r = normalize_bu(ComplexMatrix{{0.0, -2.0}, {0.5, 0.0}});
    CHECK(r.r == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.c == -1);
  }
  CHECK(code_of([] { normalize_bu(ComplexMatrix::diagonal(std::vector<double>{2, 1, 0.5})); }) ==
        ErrorCode::NotScalarQQbar);
  CHECK(code_of([] { normalize_bu(ComplexMatrix::diagonal(std::vector<double>{1, 0})); }) == ErrorCode::Singular);
  // diag(i, i, i) has Q conj(Q) = I.
  CHECK(qqbar_scalar(ComplexMatrix::diagonal(std::vector<Complex>{I, I, I})) == doctest::Approx(1.0));
}

TEST_CASE("normalize_bu round trip on the block construction") {
  std::mt19937_64 rng(22);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const int m = uniform_int(rng, 1, 3);
    const double c = (t % 2 == 0) ? 1.0 : -1.0;
    const double lambda_scale = uniform(rng, 0.2, 5.0);
    const Mat q = std::sqrt(lambda_scale) * block_bu(random_invertible(m, rng), c);
    const auto r = normalize_bu(ComplexMatrix(q));
    const int n = 2 * m;
    const bool ok = std::abs(r.r * r.r * lambda_scale - 1.0) <= 1e-9 && r.c == static_cast<int>(c) &&
                    trace_balance_gap(r.qn.mat()) <= 1e-8 * n;
    failures += ok ? 0 : 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("odd generator never yields c = -1") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 * uniform_int(rng, 0, 2) + 1;
    const auto r = normalize_bu(ComplexMatrix(random_bu(n, +1, rng)));
    CHECK(r.c == 1);
  }
}

TEST_CASE("mu_signature examples") {
  {
    const auto s = mu_signature(ComplexMatrix::identity(2));
    CHECK(s.k == 1);
    REQUIRE(s.mu.size() == 1);
    CHECK(s.mu[0] == 1.0);
  }
  {
    const auto s = mu_signature(ComplexMatrix{{0.0, 2.0}, {0.5, 0.0}});
    CHECK(s.n == 2);
    CHECK(s.k == 1);
    CHECK(s.mu[0] == doctest::Approx(2.0).epsilon(1e-12));
    const auto d = s.canonical_diagonal();
    CHECK(d == std::vector<double>{s.mu[0], 1.0 / s.mu[0]});
  }
  CHECK(code_of([] { mu_signature(ComplexMatrix::diagonal(std::vector<double>{2, 1, 0.5})); }) ==
        ErrorCode::NotScalarQQbar);
  const auto odd = mu_signature(ComplexMatrix::identity(3));
  CHECK(odd.k == 1);
  CHECK(odd.canonical_diagonal().size() == 3);
}

TEST_CASE("congruence transports mu and the polar unitary") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(rng, 1, 6);
    const int c = (n % 2 == 0 && t % 2 == 1) ? -1 : 1;
    const auto qn = normalize_bu(ComplexMatrix(random_bu(n, c, rng))).qn;
    const Mat s = random_unitary(n, rng);
    const Complex z = random_phase(rng);
    const ComplexMatrix q2(Mat(z * s.transpose() * qn.mat() * s));

    const auto m1 = mu_signature(qn);
    const auto m2 = mu_signature(q2);
    REQUIRE(m1.mu.size() == m2.mu.size());
    for (std::size_t i = 0; i < m1.mu.size(); ++i) CHECK(std::abs(m1.mu[i] - m2.mu[i]) <= 1e-8);

    const Mat u1 = polar_decompose(qn).unitary.mat();
    const Mat u2 = polar_decompose(q2).unitary.mat();
    CHECK((u2 - z * s.transpose() * u1 * s).norm() <= 1e-8);
  }
}

TEST_CASE("mu_signature is scale invariant") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 100; ++t) {
    const int n = uniform_int(rng, 2, 6);
    const Mat q = random_bu(n, 1, rng);
    const auto base = mu_signature(normalize_bu(ComplexMatrix(q)).qn);
    for (double r : {0.01, 0.5, 3.0, 250.0}) {
      const auto scaled = mu_signature(normalize_bu(ComplexMatrix(Mat(r * q))).qn);
      REQUIRE(scaled.mu.size() == base.mu.size());
      for (std::size_t i = 0; i < base.mu.size(); ++i) CHECK(std::abs(scaled.mu[i] - base.mu[i]) <= 1e-8 * base.mu[0]);
    }
  }
}
