#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uqg/au_classifier.hpp"
#include "uqg/bu_classifier.hpp"
#include "uqg/linalg.hpp"

namespace uqg {

struct AuAtom {
  AuInvariant invariant;
};
struct BuAtom {
  BuDescriptor descriptor;
};
/// A_u of a 1x1 parameter, C(T).
struct CircleAtom {};
/// B_u of a 1x1 parameter, C*(Z/2Z).
struct Z2Atom {};

using Atom = std::variant<AuAtom, BuAtom, CircleAtom, Z2Atom>;

/// Free product of indecomposable factors; order is irrelevant.
struct GroupExpression {
  std::vector<Atom> atoms;

  /// Sum of fundamental dimensions, 1 per circle or Z/2 factor.
  int total_size() const;
};

int atom_size(const Atom& atom);
std::string atom_label(const Atom& atom);

/// Index blocks for decompose_bu; each inner list is one diagonal block.
using Partition = std::vector<std::vector<int>>;

GroupExpression decompose_au(const ComplexMatrix& q, const Tolerance& tol = {});

GroupExpression decompose_bu(const ComplexMatrix& q, const Tolerance& tol = {},
                             const std::optional<Partition>& partition = std::nullopt);

/// Multiset equality up to per-atom isomorphism. Throws Undecidable when a
/// B_u comparison needed for the answer is undecided.
bool expression_equal(const GroupExpression& a, const GroupExpression& b, const Tolerance& tol = {},
                      const BuSearchOptions& search = {});

}  // namespace uqg
