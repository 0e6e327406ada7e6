#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uqg/linalg.hpp"
#include "uqg/normal_forms.hpp"

namespace uqg {

/// Representative of a B_u class with |Q| conjugated to the canonical
/// descending diagonal D, so that the normalized parameter is u_part * D.
struct BuDescriptor {
  int n = 0;
  int c = 1;
  MuSignature mu;
  ComplexMatrix u_part;

  /// u_part * D, a normalized parameter in the same class.
  ComplexMatrix representative() const;
  /// ||u_part D - c D^-1 u_part^t||
  double equation_residual() const;
};

BuDescriptor bu_descriptor(const ComplexMatrix& q, const Tolerance& tol = {});

/// Ratios r_ij that must factor as w_i * w_j for unit complex w.
struct PhaseProfile {
  std::map<std::pair<int, int>, Complex> ratios;
  // Optional edge weights; the spanning tree prefers heavier edges.
  std::map<std::pair<int, int>, double> weights;
};

/// Solves r_ij = w_i w_j over the support graph by gauge-fixing one unknown
/// per connected component and propagating along a maximum-weight spanning
/// tree (plain BFS order when no weights are given). Returns nullopt
/// when some closure constraint is violated.
std::optional<std::vector<Complex>> phase_profile_solve(const PhaseProfile& p, int n, const Tolerance& tol = {});

enum class Verdict { yes, no, undecided };

std::string_view verdict_name(Verdict v);

/// Q2n = z S^t Q1n S on the normalized parameters.
struct BuWitness {
  ComplexMatrix s;
  Complex z{1.0, 0.0};
  double residual = 0.0;  // ||Q2n - z S^t Q1n S||
};

struct BuComparison {
  Verdict verdict = Verdict::no;
  std::optional<BuWitness> witness;
  std::string reason;
};

struct BuSearchOptions {
  std::uint64_t seed = 0;
  int restarts = 12;
  int max_iterations = 200;
};

BuComparison bu_isomorphic(const ComplexMatrix& q1, const ComplexMatrix& q2, const Tolerance& tol = {},
                           const BuSearchOptions& search = {});

/// Same decision on precomputed descriptors. The witness then relates the
/// two representatives rather than the original inputs.
BuComparison bu_compare(const BuDescriptor& a, const BuDescriptor& b, const Tolerance& tol = {},
                        const BuSearchOptions& search = {});

}  // namespace uqg
