#include "doctest.h"

#include <algorithm>
#include <numbers>

#include "support.hpp"
#include "uqg/decomposer.hpp"
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

std::vector<std::string> labels(const GroupExpression& e) {
  std::vector<std::string> out;
  for (const auto& a : e.atoms) out.push_back(atom_label(a));
  std::sort(out.begin(), out.end());
  return out;
}

Mat block_diag(const std::vector<Mat>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Mat out = Mat::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.rows()) = b;
    at += b.rows();
  }
  return out;
}

const Mat kT1 = ComplexMatrix{{0.0, 1.0}, {-1.0, 0.0}}.mat();

// Normal matrix with well separated angle clusters; cluster sizes in 1..3.
Mat random_clustered_normal(std::mt19937_64& rng, int& n_out) {
  const int clusters = uniform_int(rng, 1, 3);
  const double base = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> eig;
  for (int c = 0; c < clusters; ++c) {
    const double theta = base + c * 2.0 * std::numbers::pi / clusters;
    const int m = uniform_int(rng, 1, 3);
    for (int k = 0; k < m; ++k) eig.push_back(std::polar(std::exp(uniform(rng, -1.0, 1.0)), theta));
  }
  const int n = static_cast<int>(eig.size());
  n_out = n;
  const Mat v = random_unitary(n, rng);
  Eigen::VectorXcd d(n);
  for (int i = 0; i < n; ++i) d(i) = eig[i];
  return v * d.asDiagonal() * v.adjoint();
}

}  // namespace

TEST_CASE("decompose_au examples") {
  {
    const auto e = decompose_au(ComplexMatrix::diagonal(std::vector<Complex>{2.0 * I, 0.5 * I, 1.0}));
    CHECK(labels(e) == std::vector<std::string>{"A_u(diag(2,0.5))", "C(T)"});
    GroupExpression want{{AuAtom{au_invariant(ComplexMatrix::diagonal(std::vector<double>{2, 0.5}))}, CircleAtom{}}};
    CHECK(expression_equal(e, want));
  }
  CHECK(labels(decompose_au(ComplexMatrix{{1.0, 1.0}, {0.0, 1.0}})) == std::vector<std::string>{"C(T)"});
  CHECK(labels(decompose_au(ComplexMatrix::diagonal(std::vector<Complex>{1.0, I}))) ==
        std::vector<std::string>{"C(T)", "C(T)"});
  CHECK(labels(decompose_au(ComplexMatrix::identity(1))) == std::vector<std::string>{"C(T)"});
  CHECK(labels(decompose_au(ComplexMatrix::diagonal(std::vector<double>{4, 1}))) ==
        std::vector<std::string>{"A_u(diag(2,0.5))"});
}

TEST_CASE("decompose_au error paths") {
  CHECK(code_of([] { decompose_au(ComplexMatrix::diagonal(std::vector<double>{1, 0})); }) == ErrorCode::Singular);
  CHECK(code_of([] { decompose_au(ComplexMatrix{{1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}}); }) ==
        ErrorCode::UnsupportedInput);
  // Two angles 5 * cluster apart: neither clearly merged nor clearly separate.
  const double gap = 5.0 * Tolerance{}.cluster;
  CHECK(code_of([&] {
          decompose_au(ComplexMatrix::diagonal(std::vector<Complex>{1.0, std::polar(1.0, gap)}));
        }) == ErrorCode::AmbiguousClustering);
}

TEST_CASE("decompose_bu examples") {
  {
    const auto e = decompose_bu(ComplexMatrix(block_diag({kT1, Mat::Identity(2, 2)})));
    REQUIRE(e.atoms.size() == 2);
    CHECK(e.total_size() == 4);
    GroupExpression want{{BuAtom{bu_descriptor(ComplexMatrix(kT1))}, BuAtom{bu_descriptor(ComplexMatrix::identity(2))}}};
    CHECK(expression_equal(e, want));
  }
  {
    const ComplexMatrix q{{0.0, 0.0, 2.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.5 * I, 0.0, 0.0, 0.0}, {0.0, I, 0.0, 0.0}};
    const auto e = decompose_bu(q);
    CHECK(labels(e) == std::vector<std::string>{"A_u(diag(2,0.5))"});
    CHECK(e.total_size() == 2);
    GroupExpression want{{AuAtom{au_invariant(ComplexMatrix::diagonal(std::vector<double>{4, 1}))}}};
    CHECK(expression_equal(e, want));
  }
  CHECK(labels(decompose_bu(ComplexMatrix::identity(1))) == std::vector<std::string>{"C*(Z2)"});
  CHECK(labels(decompose_bu(ComplexMatrix::identity(3))) == std::vector<std::string>{"B_u(n=3,c=1,mu=(1))"});
}

TEST_CASE("decompose_bu with an explicit partition") {
  const Mat q = block_diag({kT1, Mat::Identity(2, 2)});
  const auto e = decompose_bu(ComplexMatrix(q), {}, Partition{{0, 1}, {2, 3}});
  CHECK(e.atoms.size() == 2);
  CHECK(code_of([&] { decompose_bu(ComplexMatrix(q), {}, Partition{{0, 2}, {1, 3}}); }) ==
        ErrorCode::UnsupportedInput);
  CHECK(code_of([&] { decompose_bu(ComplexMatrix(q), {}, Partition{{0, 1}, {2}}); }) == ErrorCode::InvalidInput);
  CHECK(code_of([&] { decompose_bu(ComplexMatrix(q), {}, Partition{{0, 1}, {1, 2, 3}}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("decompose_bu distinctness guard and unsupported inputs") {
  // Scalar Q conj(Q) stays a single B_u atom; distinct lambdas split.
  CHECK(decompose_bu(ComplexMatrix(block_diag({Mat::Identity(2, 2), Mat::Identity(1, 1)}))).atoms.size() == 1);
  CHECK(decompose_bu(ComplexMatrix(block_diag({Mat::Identity(2, 2), 2.0 * Mat::Identity(1, 1)}))).atoms.size() == 2);
  // T1 and -T1 share lambda = -1: the split is refused.
  CHECK(code_of([&] { decompose_bu(ComplexMatrix(block_diag({kT1, -1.0 * kT1, Mat::Identity(2, 2) * 3.0})), {},
                                   Partition{{0, 1}, {2, 3}, {4, 5}}); }) == ErrorCode::UnsupportedInput);
  CHECK(code_of([] { decompose_bu(ComplexMatrix{{1.0, 1.0}, {0.0, 2.0}}); }) == ErrorCode::UnsupportedInput);
  CHECK(code_of([] { decompose_bu(ComplexMatrix::diagonal(std::vector<double>{1, 0})); }) == ErrorCode::Singular);
}

TEST_CASE("expression_equal examples") {
  const Tolerance tol;
  GroupExpression a{{AuAtom{au_invariant(ComplexMatrix::diagonal(std::vector<double>{4, 1}))}}};
  GroupExpression b{{AuAtom{au_invariant(ComplexMatrix::diagonal(std::vector<double>{2, 0.5}))}}};
  CHECK(expression_equal(a, b, tol));

  const Atom t1 = BuAtom{bu_descriptor(ComplexMatrix(kT1))};
  const Atom i2 = BuAtom{bu_descriptor(ComplexMatrix::identity(2))};
  CHECK(expression_equal(GroupExpression{{t1, i2}}, GroupExpression{{i2, t1}}, tol));
  CHECK_FALSE(expression_equal(GroupExpression{{CircleAtom{}}}, GroupExpression{{Z2Atom{}}}, tol));
  CHECK_FALSE(expression_equal(GroupExpression{{CircleAtom{}}}, GroupExpression{{CircleAtom{}, CircleAtom{}}}, tol));
  CHECK_FALSE(expression_equal(GroupExpression{{t1, t1}}, GroupExpression{{t1, i2}}, tol));
}

TEST_CASE("expression_equal propagates undecided comparisons") {
  std::mt19937_64 rng(51);
  const Mat s = random_unitary(3, rng);
  const Atom a = BuAtom{bu_descriptor(ComplexMatrix::identity(3))};
  const Atom b = BuAtom{bu_descriptor(ComplexMatrix(Mat(s.transpose() * s)))};
  BuSearchOptions starved;
  starved.restarts = 1;
  starved.max_iterations = 0;
  CHECK(code_of([&] { expression_equal(GroupExpression{{a}}, GroupExpression{{b}}, {}, starved); }) ==
        ErrorCode::Undecidable);
  CHECK(expression_equal(GroupExpression{{a}}, GroupExpression{{b}}));
}

TEST_CASE("decompose_au conjugation and scalar-phase invariance") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 100; ++t) {
    int n = 0;
    const Mat q = random_clustered_normal(rng, n);
    const Mat v = random_unitary(n, rng);
    const auto e = decompose_au(ComplexMatrix(q));
    CHECK(e.total_size() == n);
    CHECK(expression_equal(e, decompose_au(ComplexMatrix(Mat(v * q * v.adjoint())))));
    const Complex c = std::polar(uniform(rng, 0.1, 10.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    CHECK(expression_equal(e, decompose_au(ComplexMatrix(Mat(c * q)))));
  }
}

TEST_CASE("expression_equal ignores atom order") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 50; ++t) {
    int n = 0;
    auto e = decompose_au(ComplexMatrix(random_clustered_normal(rng, n)));
    e.atoms.push_back(Z2Atom{});
    e.atoms.push_back(BuAtom{bu_descriptor(ComplexMatrix(random_bu(3, 1, rng)))});
    auto shuffled = e;
    std::shuffle(shuffled.atoms.begin(), shuffled.atoms.end(), rng);
    CHECK(expression_equal(e, shuffled));
    CHECK(expression_equal(shuffled, e));
  }
}

TEST_CASE("decompose_bu on random block constructions") {
  std::mt19937_64 rng(54);
  for (int t = 0; t < 50; ++t) {
    const Mat t1 = random_bu(2, -1, rng);
    const Mat t2 = 2.0 * random_bu(3, 1, rng);
    const Mat q = block_diag({t1, t2});
    const auto e = decompose_bu(ComplexMatrix(q));
    REQUIRE(e.atoms.size() == 2);
    CHECK(e.total_size() == 5);
    GroupExpression want{{BuAtom{bu_descriptor(ComplexMatrix(t2))}, BuAtom{bu_descriptor(ComplexMatrix(t1))}}};
    CHECK(expression_equal(e, want));
  }
  for (int t = 0; t < 50; ++t) {
    const Mat tb = random_invertible(2, rng);
    const Complex qv = std::polar(uniform(rng, 0.3, 3.0), uniform(rng, 0.2, 2.9));
    Mat q = Mat::Zero(4, 4);
    q.block(0, 2, 2, 2) = tb;
    q.block(2, 0, 2, 2) = qv * tb.conjugate().inverse();
    const auto e = decompose_bu(ComplexMatrix(q));
    REQUIRE(e.atoms.size() == 1);
    const Mat abs_sq = tb.adjoint() * tb;
    GroupExpression want{{AuAtom{au_invariant(ComplexMatrix(abs_sq))}}};
    CHECK(expression_equal(e, want));
  }
}
