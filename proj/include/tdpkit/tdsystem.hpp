#pragma once

// Recognition of tridiagonal pairs and the systems built from them.

#include <optional>
#include <string>
#include <vector>

#include "tdpkit/exactlinalg.hpp"

namespace tdp {

/// E_i = prod_{j != i} (M - theta_j I) / (theta_i - theta_j).
/// RepeatedEigenvalue when two listed eigenvalues coincide.
ExactMatrix primitive_idempotent(const ExactMatrix& m, const std::vector<FieldElement>& eigenvalues, std::size_t i);

/// All primitive idempotents for the listed eigenvalues, in list order.
std::vector<ExactMatrix> primitive_idempotents(const ExactMatrix& m, const std::vector<FieldElement>& eigenvalues);

/// An ordering of the eigenvalues of A paired with one of A*.
struct OrderingChoice {
  std::vector<FieldElement> theta;
  std::vector<FieldElement> theta_star;

  /// "t0,t1,...;s0,s1,..." with canonical scalar strings; used for the
  /// deterministic default choice.
  std::string key() const;
  friend bool operator==(const OrderingChoice& a, const OrderingChoice& b) {
    return a.theta == b.theta && a.theta_star == b.theta_star;
  }
};

/// Every standard ordering of A's eigenvalues paired with every standard
/// ordering of A*'s. NotAPath unless each adjacency graph (i ~ j when
/// E_i B E_j != 0, i != j) is a Hamiltonian path; diameters 0 and 1 have all
/// orderings standard. Sorted by key().
std::vector<OrderingChoice> standard_orderings(const ExactMatrix& a, const ExactMatrix& a_star);

/// Lexicographically smallest key().
const OrderingChoice& default_choice(const std::vector<OrderingChoice>& choices);

enum class Verdict { pass, fail, skipped, inconclusive };
std::string_view to_string(Verdict v) noexcept;

struct ConditionResult {
  Verdict verdict = Verdict::skipped;
  std::string detail;
  std::optional<Subspace> witness_subspace;
  std::vector<std::size_t> witness_indices;  // eigenvalue indices in canonical order
};

struct ValidationReport {
  ConditionResult diagonalizable;     // (i)
  ConditionResult standard_a;         // (ii) A* acts tridiagonally on eigenspaces of A
  ConditionResult standard_a_star;    // (iii) A acts tridiagonally on eigenspaces of A*
  ConditionResult irreducible;        // (iv)
  std::optional<std::size_t> diameter;       // eigenspaces of A minus one
  std::optional<std::size_t> dual_diameter;  // eigenspaces of A* minus one
  std::vector<std::size_t> shape;            // empty unless (i)-(iii) pass
  std::optional<bool> sharp;
  std::vector<FieldElement> eigenvalues;       // canonical order
  std::vector<FieldElement> dual_eigenvalues;  // canonical order

  bool diameters_agree() const { return diameter && dual_diameter && *diameter == *dual_diameter; }
  bool passed() const;
};

ValidationReport verify_td_pair(const ExactMatrix& a, const ExactMatrix& a_star, const NortonOptions& options = {});

struct TriDiagonalSystem {
  std::size_t d = 0;
  ExactMatrix A, Astar;
  std::vector<FieldElement> theta, theta_star;
  std::vector<ExactMatrix> E, E_star;
  std::vector<std::size_t> rho;

  const Field& field() const { return A.field(); }
  std::size_t dim() const { return A.rows(); }
  bool sharp() const { return !rho.empty() && rho.front() == 1; }
  /// InvariantViolation naming the first identity that fails.
  void check_invariants() const;
};

/// Assemble and check a system for an ordering returned by standard_orderings.
TriDiagonalSystem build_system(const ExactMatrix& a, const ExactMatrix& a_star, const OrderingChoice& choice);

/// The same system written in the basis given by the columns of p^-1:
/// every operator X becomes p X p^-1.
TriDiagonalSystem conjugate(const TriDiagonalSystem& s, const ExactMatrix& p);

struct VanishingWitness {
  std::size_t i, j, k;
  std::string family;  // "E A*^k E" or "E* A^k E*"
};

struct VanishingResult {
  bool holds = true;
  std::optional<VanishingWitness> witness;
};

/// E_i A*^k E_j = 0 and E*_i A^k E*_j = 0 for all k < |i - j|.
VanishingResult triple_product_vanishing(const TriDiagonalSystem& s);

}  // namespace tdp
