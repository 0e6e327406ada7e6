#include "uqg/decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "uqg/normal_forms.hpp"

namespace uqg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num(Complex v) {
  std::ostringstream s;
  s << num(v.real()) << (v.imag() < 0 ? "-" : "+") << num(std::abs(v.imag())) << "i";
  return s.str();
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

int atom_size(const Atom& atom) {
  return std::visit(overloaded{[](const AuAtom& a) { return a.invariant.n; },
                               [](const BuAtom& b) { return b.descriptor.n; }, [](const CircleAtom&) { return 1; },
                               [](const Z2Atom&) { return 1; }},
                    atom);
}

std::string atom_label(const Atom& atom) {
  return std::visit(overloaded{[](const AuAtom& a) {
                                 std::string s = "A_u(diag(";
                                 for (std::size_t i = 0; i < a.invariant.spectrum.size(); ++i)
                                   s += (i ? "," : "") + num(a.invariant.spectrum[i]);
                                 return s + "))";
                               },
                               [](const BuAtom& b) {
                                 std::string s = "B_u(n=" + std::to_string(b.descriptor.n) +
                                                 ",c=" + std::to_string(b.descriptor.c) + ",mu=(";
                                 const auto& mu = b.descriptor.mu.mu;
                                 for (std::size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + num(mu[i]);
                                 return s + "))";
                               },
                               [](const CircleAtom&) { return std::string("C(T)"); },
                               [](const Z2Atom&) { return std::string("C*(Z2)"); }},
                    atom);
}

int GroupExpression::total_size() const {
  return std::accumulate(atoms.begin(), atoms.end(), 0, [](int acc, const Atom& a) { return acc + atom_size(a); });
}

namespace {

std::vector<std::string> normality_diagnostics(const std::string& label, const ComplexMatrix& m,
                                               const Tolerance& tol) {
  std::vector<std::string> diag;
  const auto p = predicates(m, tol);
  diag.push_back(label + " normal: " + (p.is_normal ? "true" : "false"));
  Eigen::ComplexEigenSolver<Mat> es(m.mat(), false);
  std::string ev = label + " eigenvalues:";
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev += " " + num(es.eigenvalues()(i));
  diag.push_back(ev);
  return diag;
}

// Circular single-linkage on angles in [0, 2pi). Returns index groups in
// order of their first angle.
std::vector<std::vector<int>> cluster_angles(const std::vector<double>& angles, const Tolerance& tol) {
  const int m = static_cast<int>(angles.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return angles[a] < angles[b]; });

  std::vector<int> cuts;  // cut after sorted position k
  for (int k = 0; k < m; ++k) {
    const double next = k + 1 < m ? angles[order[k + 1]] : angles[order[0]] + 2.0 * std::numbers::pi;
    const double gap = next - angles[order[k]];
    if (m == 1) break;
    if (gap > tol.cluster && gap <= 10.0 * tol.cluster) {
      throw Error(ErrorCode::AmbiguousClustering,
                  "eigenvalue phases are neither equal nor clearly distinct (gap " + num(gap) + " rad)");
    }
    if (gap > tol.cluster) cuts.push_back(k);
  }
  if (cuts.empty()) return {order};

  std::vector<std::vector<int>> clusters;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    const int begin = cuts[c] + 1;
    const int end = cuts[(c + 1) % cuts.size()] + 1;  // exclusive, circular
    std::vector<int> group;
    for (int k = begin; k != end + (end <= begin ? m : 0); ++k) group.push_back(order[k % m]);
    clusters.push_back(std::move(group));
  }
  std::sort(clusters.begin(), clusters.end(), [&](const auto& a, const auto& b) {
    const auto first = [&](const std::vector<int>& g) {
      double lo = angles[g[0]];
      for (int i : g) lo = std::min(lo, angles[i]);
      return lo;
    };
    return first(a) < first(b);
  });
  return clusters;
}

Atom positive_atom(std::vector<double> moduli, const Tolerance& tol) {
  if (moduli.size() == 1) return CircleAtom{};
  return AuAtom{au_invariant(ComplexMatrix::diagonal(std::span<const double>(moduli)), tol)};
}

}  // namespace

GroupExpression decompose_au(const ComplexMatrix& q, const Tolerance& tol) {
  require_invertible(q, tol);
  const int n = q.size();
  if (n == 1) return {{CircleAtom{}}};

  const auto p = predicates(q, tol);
  if (p.is_positive) return {{AuAtom{au_invariant(q, tol)}}};

  if (p.is_normal) {
    Eigen::ComplexEigenSolver<Mat> es(q.mat(), false);
    std::vector<double> angles(n);
    std::vector<double> moduli(n);
    for (int i = 0; i < n; ++i) {
      const Complex lambda = es.eigenvalues()(i);
      moduli[i] = std::abs(lambda);
      double theta = std::arg(lambda);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      angles[i] = theta;
    }
    GroupExpression out;
    for (const auto& cluster : cluster_angles(angles, tol)) {
      std::vector<double> mods;
      for (int i : cluster) mods.push_back(moduli[i]);
      out.atoms.push_back(positive_atom(std::move(mods), tol));
    }
    return out;
  }

  if (n == 2) return {{CircleAtom{}}};

  throw Error(ErrorCode::UnsupportedInput,
              "non-normal parameter with n >= 3 needs isotypical data that is not computable here",
              normality_diagnostics("Q", q, tol));
}

namespace {

struct BlockPlan {
  Mat transformed;  // S^t Q S
  std::vector<std::vector<int>> blocks;
};

// Eigenspaces of M = Q conj(Q). Real eigenvalues give B_u blocks, conjugate
// pairs give the anti-diagonal pattern. Requires M normal.
BlockPlan detect_blocks(const ComplexMatrix& q, const Tolerance& tol) {
  const int n = q.size();
  const ComplexMatrix m(Mat(q.mat() * q.mat().conjugate()));
  auto diagnostics = [&] { return normality_diagnostics("Q conj(Q)", m, tol); };
  if (!predicates(m, tol).is_normal) {
    throw Error(ErrorCode::UnsupportedInput, "Q conj(Q) is not normal; no unitary block structure", diagnostics());
  }

  Eigen::ComplexSchur<Mat> schur(m.mat());
  const Mat& z = schur.matrixU();
  Eigen::VectorXcd lambda = schur.matrixT().diagonal();
  const double scale = lambda.cwiseAbs().maxCoeff();
  const double link = std::sqrt(tol.eq) * scale;

  // Single-linkage grouping of eigenvalues.
  std::vector<int> group(n, -1);
  int groups = 0;
  for (int i = 0; i < n; ++i) {
    if (group[i] >= 0) continue;
    group[i] = groups;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < n; ++b)
        if (group[b] < 0 && std::abs(lambda(a) - lambda(b)) <= link) {
          group[b] = groups;
          stack.push_back(b);
        }
    }
    ++groups;
  }
  std::vector<std::vector<int>> members(groups);
  std::vector<Complex> centre(groups, Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    members[group[i]].push_back(i);
    centre[group[i]] += lambda(i);
  }
  for (int g = 0; g < groups; ++g) centre[g] /= static_cast<double>(members[g].size());

  std::vector<int> column_order;
  std::vector<std::vector<int>> blocks;
  std::vector<bool> used(groups, false);
  for (int g = 0; g < groups; ++g) {
    if (used[g]) continue;
    used[g] = true;
    auto add_block = [&](const std::vector<std::vector<int>>& parts) {
      std::vector<int> blk;
      for (const auto& part : parts)
        for (int col : part) {
          blk.push_back(static_cast<int>(column_order.size()));
          column_order.push_back(col);
        }
      blocks.push_back(std::move(blk));
    };
    if (std::abs(centre[g].imag()) <= link) {
      add_block({members[g]});
      continue;
    }
    int partner = -1;
    for (int h = 0; h < groups; ++h)
      if (!used[h] && std::abs(centre[h] - std::conj(centre[g])) <= link) partner = h;
    if (partner < 0 || members[partner].size() != members[g].size()) {
      throw Error(ErrorCode::UnsupportedInput, "non-real eigenvalue of Q conj(Q) without a matching conjugate eigenspace",
                  diagnostics());
    }
    used[partner] = true;
    const int upper = centre[g].imag() > 0.0 ? g : partner;
    const int lower = upper == g ? partner : g;
    add_block({members[upper], members[lower]});
  }

  Mat w(n, n);
  for (int k = 0; k < n; ++k) w.col(k) = z.col(column_order[k]);
  // S = conj(W) makes S^t M (S^t)^-1 = W* M W block diagonal.
  BlockPlan plan;
  plan.transformed = w.adjoint() * q.mat() * w.conjugate();
  plan.blocks = std::move(blocks);
  return plan;
}

// Block index of every row; throws InvalidInput unless the blocks cover 0..n-1 once.
std::vector<int> block_owner(int n, const std::vector<std::vector<int>>& blocks) {
  std::vector<int> owner(n, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int i : blocks[b]) {
      if (i < 0 || i >= n || owner[i] >= 0) throw Error(ErrorCode::InvalidInput, "partition must cover 0..n-1 exactly once");
      owner[i] = static_cast<int>(b);
    }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end())
    throw Error(ErrorCode::InvalidInput, "partition must cover 0..n-1 exactly once");
  return owner;
}

void require_block_structure(const Mat& q, const std::vector<std::vector<int>>& blocks, const Tolerance& tol) {
  const int n = static_cast<int>(q.rows());
  const auto owner = block_owner(n, blocks);

  double off = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (owner[i] != owner[j]) off += std::norm(q(i, j));
  if (std::sqrt(off) > tol.eq * q.norm()) {
    throw Error(ErrorCode::UnsupportedInput, "parameter is not block diagonal for the partition",
                {"off-block norm: " + num(std::sqrt(off))});
  }
}

Mat extract(const Mat& q, const std::vector<int>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Mat out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = q(idx[i], idx[j]);
  return out;
}

struct BlockClass {
  Atom atom;
  bool real = true;
  Complex lambda;  // QQbar eigenvalue; for patterns the one with Im > 0
};

BlockClass classify_block(const Mat& t, const Tolerance& tol) {
  const ComplexMatrix block(t);
  if (t.rows() == 1) return {Z2Atom{}, true, Complex(std::norm(t(0, 0)), 0.0)};
  try {
    const double lambda = qqbar_scalar(block, tol);
    return {BuAtom{bu_descriptor(block, tol)}, true, Complex(lambda, 0.0)};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotScalarQQbar) throw;
  }

  const auto h = t.rows() / 2;
  if (t.rows() % 2 == 0) {
    const Mat a = t.block(0, h, h, h);
    const Mat b = t.block(h, 0, h, h);
    const double diag_off = std::sqrt(t.block(0, 0, h, h).squaredNorm() + t.block(h, h, h, h).squaredNorm());
    if (diag_off <= tol.eq * t.norm() && is_invertible(ComplexMatrix(a), tol)) {
      const Mat bab = b * a.conjugate();
      const Complex q = bab.trace() / static_cast<double>(h);
      const bool scalar = (bab - q * Mat::Identity(h, h)).norm() <= tol.eq * t.squaredNorm();
      if (scalar && std::abs(q.imag()) > tol.eq * std::abs(q)) {
        // B_u of [[0, T], [q conj(T)^-1, 0]] is A_u(|T|^2) = A_u(T* T).
        const ComplexMatrix modulus_sq(Mat(a.adjoint() * a));
        const Complex upper = q.imag() > 0.0 ? q : std::conj(q);
        if (h == 1) return {CircleAtom{}, false, upper};
        return {AuAtom{au_invariant(modulus_sq, tol)}, false, upper};
      }
    }
  }
  throw Error(ErrorCode::UnsupportedInput,
              "block is neither B_u-irreducible nor of the anti-diagonal A_u pattern",
              normality_diagnostics("block Q conj(Q)", ComplexMatrix(Mat(t * t.conjugate())), tol));
}

}  // namespace

GroupExpression decompose_bu(const ComplexMatrix& q, const Tolerance& tol, const std::optional<Partition>& partition) {
  require_invertible(q, tol);
  const int n = q.size();
  if (partition) block_owner(n, *partition);
  if (n == 1) return {{Z2Atom{}}};
  try {
    qqbar_scalar(q, tol);
    return {{BuAtom{bu_descriptor(q, tol)}}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotScalarQQbar) throw;
  }

  BlockPlan plan;
  if (partition) {
    plan.transformed = q.mat();
    plan.blocks = *partition;
  } else {
    plan = detect_blocks(q, tol);
  }
  require_block_structure(plan.transformed, plan.blocks, tol);

  std::vector<BlockClass> classes;
  for (const auto& idx : plan.blocks) classes.push_back(classify_block(extract(plan.transformed, idx), tol));

  // The free product splitting needs pairwise distinct eigenvalues of Q conj(Q) across blocks.
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      if (classes[i].real != classes[j].real) continue;
      const double gap = std::abs(classes[i].lambda - classes[j].lambda);
      if (gap <= tol.eq * std::max(std::abs(classes[i].lambda), std::abs(classes[j].lambda))) {
        throw Error(ErrorCode::UnsupportedInput, "blocks share the eigenvalue " + num(classes[i].lambda) +
                                                     " of Q conj(Q); multiplicities are not supported");
      }
    }

  GroupExpression out;
  for (auto& c : classes) out.atoms.push_back(std::move(c.atom));
  return out;
}

namespace {

enum class Match { yes, no, undecided };

Match atoms_match(const Atom& a, const Atom& b, const Tolerance& tol, const BuSearchOptions& search) {
  if (a.index() != b.index()) return Match::no;
  if (std::holds_alternative<CircleAtom>(a) || std::holds_alternative<Z2Atom>(a)) return Match::yes;
  if (const auto* au = std::get_if<AuAtom>(&a))
    return same_class(au->invariant, std::get<AuAtom>(b).invariant, tol) ? Match::yes : Match::no;
  const auto cmp = bu_compare(std::get<BuAtom>(a).descriptor, std::get<BuAtom>(b).descriptor, tol, search);
  switch (cmp.verdict) {
    case Verdict::yes: return Match::yes;
    case Verdict::no: return Match::no;
    case Verdict::undecided: return Match::undecided;
  }
  return Match::undecided;
}

}  // namespace

bool expression_equal(const GroupExpression& a, const GroupExpression& b, const Tolerance& tol,
                      const BuSearchOptions& search) {
  if (a.atoms.size() != b.atoms.size()) return false;
  // Isomorphism is an equivalence relation, so greedy matching is exact.
  std::vector<bool> taken(b.atoms.size(), false);
  for (const auto& atom : a.atoms) {
    bool found = false;
    bool undecided = false;
    for (std::size_t j = 0; j < b.atoms.size() && !found; ++j) {
      if (taken[j]) continue;
      switch (atoms_match(atom, b.atoms[j], tol, search)) {
        case Match::yes:
          taken[j] = true;
          found = true;
          break;
        case Match::undecided: undecided = true; break;
        case Match::no: break;
      }
    }
    if (!found) {
      if (undecided) throw Error(ErrorCode::Undecidable, "B_u atom comparison undecided for " + atom_label(atom));
      return false;
    }
  }
  return true;
}

}  // namespace uqg
