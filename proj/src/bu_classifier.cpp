#include "uqg/bu_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "uqg/au_classifier.hpp"

namespace uqg {

namespace {

Mat diag_matrix(const std::vector<double>& d) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v(i) = d[i];
  return v.asDiagonal();
}

// Condition number mu_1^2 of the normalized parameter; scales residual checks.
double conditioning(const MuSignature& mu) { return mu.mu.empty() ? 1.0 : mu.mu.front() * mu.mu.front(); }

}  // namespace

ComplexMatrix BuDescriptor::representative() const {
  return ComplexMatrix(Mat(u_part.mat() * diag_matrix(mu.canonical_diagonal())));
}

double BuDescriptor::equation_residual() const {
  const auto d = mu.canonical_diagonal();
  std::vector<double> inv(d.size());
  std::transform(d.begin(), d.end(), inv.begin(), [](double x) { return 1.0 / x; });
  const Mat& u = u_part.mat();
  return (u * diag_matrix(d) - static_cast<double>(c) * diag_matrix(inv) * u.transpose()).norm();
}

namespace {

struct Placed {
  BuDescriptor desc;
  Mat basis;  // V with representative = V^t Qn V
  ComplexMatrix qn;
};

Placed place(const ComplexMatrix& q, const Tolerance& tol) {
  const auto norm = normalize_bu(q, tol);
  Placed out;
  out.qn = norm.qn;
  out.desc.n = q.size();
  out.desc.c = norm.c;
  out.desc.mu = mu_signature(norm.qn, tol);

  const auto polar = polar_decompose(norm.qn, tol);
  const auto eig = eigh(polar.positive, tol);
  out.basis = eig.vectors;
  // With S = V, |V^t Qn V| = V* |Qn| V = D and its unitary part is V^t U V.
  out.desc.u_part = ComplexMatrix(Mat(eig.vectors.transpose() * polar.unitary.mat() * eig.vectors));

  const double residual = out.desc.equation_residual();
  const double bound = tol.eq * out.desc.n * conditioning(out.desc.mu);
  if (residual > bound) {
    std::ostringstream msg;
    msg << "descriptor equation residual " << residual << " exceeds " << bound;
    throw Error(ErrorCode::EquationResidual, msg.str());
  }
  return out;
}

// Index runs of equal entries in the descending canonical diagonal.
std::vector<std::pair<int, int>> degenerate_blocks(const std::vector<double>& d, const Tolerance& tol) {
  const double gap = std::sqrt(tol.eq) * d.front();
  std::vector<std::pair<int, int>> blocks;
  int start = 0;
  for (int i = 1; i <= static_cast<int>(d.size()); ++i) {
    if (i == static_cast<int>(d.size()) || d[i - 1] - d[i] > gap) {
      blocks.emplace_back(start, i - start);
      start = i;
    }
  }
  return blocks;
}

struct LocalMatch {
  Mat w;
  Complex z{1.0, 0.0};
  double residual = 0.0;
};

// Exact decision for diagonal stabilizers: b = W^t a W with W = diag(w).
std::optional<LocalMatch> match_diagonal(const Mat& a, const Mat& b, const Tolerance& tol, std::string& reason) {
  const int n = static_cast<int>(a.rows());
  const double zero_a = tol.eq * a.norm();
  const double zero_b = tol.eq * b.norm();
  PhaseProfile profile;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool in_a = std::abs(a(i, j)) > zero_a;
      const bool in_b = std::abs(b(i, j)) > zero_b;
      if (in_a != in_b) {
        reason = "u_part supports differ";
        return std::nullopt;
      }
      if (!in_a) continue;
      if (std::abs(std::abs(a(i, j)) - std::abs(b(i, j))) > tol.eq * a.norm()) {
        reason = "u_part moduli differ";
        return std::nullopt;
      }
      const Complex r = b(i, j) / a(i, j);
      profile.ratios[{i, j}] = r / std::abs(r);
      profile.weights[{i, j}] = std::abs(a(i, j));
    }
  }
  // Phases of small entries carry amplified noise; the final residual check
  // below is the strict criterion.
  Tolerance phase_tol = tol;
  phase_tol.eq = std::sqrt(tol.eq);
  const auto w = phase_profile_solve(profile, n, phase_tol);
  if (!w) {
    reason = "phase profile infeasible";
    return std::nullopt;
  }
  LocalMatch m;
  m.w = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) m.w(i, i) = (*w)[i] / std::abs((*w)[i]);
  m.residual = (b - m.w.transpose() * a * m.w).norm();
  if (m.residual > tol.eq * n) {
    reason = "phase solution leaves residual above tolerance";
    return std::nullopt;
  }
  return m;
}

Mat random_block_unitary(const std::vector<std::pair<int, int>>& blocks, int n, std::mt19937_64& rng) {
  Mat s = Mat::Zero(n, n);
  for (const auto& [start, size] : blocks) s.block(start, start, size, size) = haar_unitary(size, rng);
  return s;
}

// Levenberg-Marquardt on b ~ z W^t a W over block-unitary W and unit z.
// Updates are W <- W exp(i H), z <- z exp(i phi) with H block Hermitian.
LocalMatch search_blocks(const Mat& a, const Mat& b, const std::vector<std::pair<int, int>>& blocks,
                         const Tolerance& tol, const BuSearchOptions& opts) {
  const int n = static_cast<int>(a.rows());
  std::vector<Mat> gens;
  for (const auto& [start, size] : blocks) {
    for (int p = start; p < start + size; ++p) {
      for (int q = p; q < start + size; ++q) {
        Mat e = Mat::Zero(n, n);
        if (p == q) {
          e(p, p) = 1.0;
          gens.push_back(e);
          continue;
        }
        e(p, q) = 1.0;
        e(q, p) = 1.0;
        gens.push_back(e);
        Mat f = Mat::Zero(n, n);
        f(p, q) = Complex(0.0, 1.0);
        f(q, p) = Complex(0.0, -1.0);
        gens.push_back(f);
      }
    }
  }
  const int params = static_cast<int>(gens.size()) + 1;
  const int rows = 2 * n * n;
  const double target = tol.eq * n;
  const Complex iu(0.0, 1.0);

  auto flatten = [&](const Mat& m, Eigen::Ref<Eigen::VectorXd> out) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        out(2 * (j * n + i)) = m(i, j).real();
        out(2 * (j * n + i) + 1) = m(i, j).imag();
      }
  };
  auto best_phase = [&](const Mat& w) {
    const Complex overlap = (w.transpose() * a * w).cwiseProduct(b.conjugate()).sum();
    return std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap) : Complex(1.0, 0.0);
  };

  std::mt19937_64 rng(opts.seed);
  LocalMatch best;
  best.residual = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opts.restarts; ++restart) {
    Mat w = restart == 0 ? Mat(Mat::Identity(n, n)) : random_block_unitary(blocks, n, rng);
    Complex z = best_phase(w);
    Mat x = z * w.transpose() * a * w;
    double res = (b - x).norm();
    double lambda = 1e-3;

    for (int it = 0; it < opts.max_iterations && res > target; ++it) {
      Eigen::MatrixXd jac(rows, params);
      for (int k = 0; k < params - 1; ++k) {
        const Mat dx = iu * (gens[k].transpose() * x + x * gens[k]);
        flatten(dx, jac.col(k));
      }
      flatten(iu * x, jac.col(params - 1));
      Eigen::VectorXd r(rows);
      flatten(b - x, r);

      const Eigen::MatrixXd jtj = jac.transpose() * jac;
      const Eigen::VectorXd jtr = jac.transpose() * r;
      bool improved = false;
      while (lambda < 1e12) {
        Eigen::MatrixXd damped = jtj;
        damped.diagonal().array() += lambda * (1.0 + jtj.diagonal().array());
        const Eigen::VectorXd step = damped.ldlt().solve(jtr);
        Mat h = Mat::Zero(n, n);
        for (int k = 0; k < params - 1; ++k) h += step(k) * gens[k];
        const Mat w_try = w * unitary_exp(h);
        const Complex z_try = z * std::exp(iu * step(params - 1));
        const Mat x_try = z_try * w_try.transpose() * a * w_try;
        const double res_try = (b - x_try).norm();
        if (res_try < res) {
          w = w_try;
          z = z_try;
          x = x_try;
          res = res_try;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
          break;
        }
        lambda *= 4.0;
      }
      if (!improved) break;
    }

    if (res < best.residual) {
      best.w = w;
      best.z = z;
      best.residual = res;
    }
    if (best.residual <= target) break;
  }
  return best;
}

bool same_invariants(const BuDescriptor& a, const BuDescriptor& b, const Tolerance& tol, std::string& reason) {
  if (a.n != b.n) {
    reason = "sizes differ";
    return false;
  }
  if (a.c != b.c) {
    reason = "signs c differ";
    return false;
  }
  if (compare_spectra(a.mu.mu, b.mu.mu, tol) != 0) {
    reason = "mu signatures differ";
    return false;
  }
  return true;
}

BuComparison compare_placed(const Placed& pa, const Placed& pb, const Tolerance& tol, const BuSearchOptions& opts) {
  BuComparison out;
  if (!same_invariants(pa.desc, pb.desc, tol, out.reason)) {
    out.verdict = Verdict::no;
    return out;
  }
  const Mat& a = pa.desc.u_part.mat();
  const Mat& b = pb.desc.u_part.mat();
  const auto d = pa.desc.mu.canonical_diagonal();
  const auto blocks = degenerate_blocks(d, tol);
  const bool distinct = std::all_of(blocks.begin(), blocks.end(), [](const auto& blk) { return blk.second == 1; });

  std::optional<LocalMatch> match;
  if (distinct) {
    match = match_diagonal(a, b, tol, out.reason);
    if (!match) {
      out.verdict = Verdict::no;
      return out;
    }
  } else {
    auto found = search_blocks(a, b, blocks, tol, opts);
    if (found.residual > tol.eq * pa.desc.n) {
      out.verdict = Verdict::undecided;
      std::ostringstream msg;
      msg << "degenerate stabilizer search best residual " << found.residual;
      out.reason = msg.str();
      return out;
    }
    match = std::move(found);
  }

  // Qn_b = z S^t Qn_a S with S = V_a W V_b^*.
  BuWitness witness;
  witness.s = ComplexMatrix(Mat(pa.basis * match->w * pb.basis.adjoint()));
  witness.z = match->z;
  witness.residual =
      (pb.qn.mat() - witness.z * witness.s.mat().transpose() * pa.qn.mat() * witness.s.mat()).norm();
  out.verdict = Verdict::yes;
  out.reason = distinct ? "diagonal stabilizer phase match" : "block stabilizer search converged";
  out.witness = std::move(witness);
  return out;
}

}  // namespace

BuDescriptor bu_descriptor(const ComplexMatrix& q, const Tolerance& tol) { return place(q, tol).desc; }

std::optional<std::vector<Complex>> phase_profile_solve(const PhaseProfile& p, int n, const Tolerance& tol) {
  struct Edge {
    int to;
    double weight;
    Complex ratio;
  };
  std::vector<std::vector<Edge>> adj(n);
  for (const auto& [ij, r] : p.ratios) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= n || j >= n) throw Error(ErrorCode::InvalidInput, "phase profile index out of range");
    const auto wt = p.weights.find(ij);
    const double weight = wt == p.weights.end() ? 1.0 : wt->second;
    adj[i].push_back({j, weight, r});
    if (i != j) adj[j].push_back({i, weight, r});
  }

  // w_v = coeff_v * t^exponent_v, t the component's free gauge.
  std::vector<Complex> coeff(n, Complex(1.0, 0.0));
  std::vector<int> exponent(n, 0);
  std::vector<int> component(n, -1);
  std::vector<Complex> result(n, Complex(1.0, 0.0));

  int comp_count = 0;
  for (int root = 0; root < n; ++root) {
    if (component[root] >= 0) continue;
    const int comp = comp_count++;
    component[root] = comp;
    exponent[root] = 1;
    std::vector<int> members{root};

    // Max weight first, then insertion order; ratios indexed by insertion order.
    using Item = std::tuple<double, long, int, int>;
    std::priority_queue<Item> frontier;
    std::vector<Complex> pending;
    auto push_edges = [&](int v) {
      for (const auto& e : adj[v])
        if (component[e.to] < 0) {
          frontier.emplace(e.weight, -static_cast<long>(pending.size()), v, e.to);
          pending.push_back(e.ratio);
        }
    };
    push_edges(root);
    while (!frontier.empty()) {
      const auto [weight, ord, from, to] = frontier.top();
      frontier.pop();
      const Complex ratio = pending[-ord];
      if (component[to] >= 0) continue;
      component[to] = comp;
      coeff[to] = ratio / coeff[from];
      exponent[to] = -exponent[from];
      members.push_back(to);
      push_edges(to);
    }

    std::optional<Complex> t_squared;
    for (int v : members) {
      for (const auto& e : adj[v]) {
        if (e.to < v) continue;  // each undirected constraint once per endpoint pair orientation
        const int power = exponent[v] + exponent[e.to];
        const Complex known = coeff[v] * coeff[e.to];
        if (power == 0) {
          if (std::abs(known - e.ratio) > tol.eq) return std::nullopt;
          continue;
        }
        const Complex value = power > 0 ? e.ratio / known : known / e.ratio;
        if (t_squared && std::abs(*t_squared - value) > tol.eq) return std::nullopt;
        if (!t_squared) t_squared = value;
      }
    }
    const Complex t = t_squared ? std::sqrt(*t_squared) : Complex(1.0, 0.0);
    for (int v : members) result[v] = coeff[v] * (exponent[v] > 0 ? t : 1.0 / t);
  }
  return result;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

BuComparison bu_isomorphic(const ComplexMatrix& q1, const ComplexMatrix& q2, const Tolerance& tol,
                           const BuSearchOptions& search) {
  return compare_placed(place(q1, tol), place(q2, tol), tol, search);
}

BuComparison bu_compare(const BuDescriptor& a, const BuDescriptor& b, const Tolerance& tol,
                        const BuSearchOptions& search) {
  const auto wrap = [](const BuDescriptor& d) {
    Placed p;
    p.desc = d;
    p.basis = Mat::Identity(d.n, d.n);
    p.qn = d.representative();
    return p;
  };
  return compare_placed(wrap(a), wrap(b), tol, search);
}

}  // namespace uqg
