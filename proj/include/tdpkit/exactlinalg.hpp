#pragma once

// Dense exact linear algebra over a tdp::Field: echelon forms, kernels,
// eigenspaces, spin-up and a Norton-style irreducibility test for the module
// generated by a set of operators.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdpkit/exactfield.hpp"

namespace tdp {

using Vector = std::vector<FieldElement>;

class ExactMatrix {
 public:
  ExactMatrix() = default;
  /// rows x cols zero matrix.
  ExactMatrix(Field field, std::size_t rows, std::size_t cols);

  static ExactMatrix identity(const Field& field, std::size_t n);
  static ExactMatrix from_rows(const Field& field, const std::vector<Vector>& rows);
  static ExactMatrix from_ints(const Field& field, const std::vector<std::vector<long long>>& rows);
  static ExactMatrix diagonal(const Field& field, std::span<const FieldElement> entries);
  /// Matrix whose columns are the given vectors (all of length `rows`).
  static ExactMatrix from_columns(const Field& field, std::size_t rows, const std::vector<Vector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const Field& field() const { return field_; }

  const FieldElement& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  FieldElement& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;

  ExactMatrix transpose() const;
  bool is_zero() const;
  /// Entrywise image under the inclusion into a tower over this field.
  ExactMatrix embedded(const Field& target) const;

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const FieldElement& s, const ExactMatrix& m);
  friend Vector operator*(const ExactMatrix& m, const Vector& v);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> data_;
};

std::ostream& operator<<(std::ostream& os, const ExactMatrix& m);

/// M - s*I.
ExactMatrix shift(const ExactMatrix& m, const FieldElement& s);

struct EchelonForm {
  ExactMatrix reduced;              // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

EchelonForm rref(const ExactMatrix& m);
std::size_t rank(const ExactMatrix& m);
FieldElement determinant(const ExactMatrix& m);
/// Inverse of a square matrix; DivisionByZero when singular.
ExactMatrix inverse(const ExactMatrix& m);

struct LinearSolution {
  bool consistent = false;
  bool unique = false;
  Vector particular;  // meaningful when consistent; free variables set to 0
};
LinearSolution solve_linear(const ExactMatrix& m, const Vector& rhs);

/// Subspace of field^n kept as the rows of a reduced echelon basis, so two
/// subspaces are equal exactly when their bases are equal.
class Subspace {
 public:
  Subspace() = default;
  static Subspace zero(const Field& field, std::size_t ambient_dim);
  static Subspace full(const Field& field, std::size_t ambient_dim);
  static Subspace span(const Field& field, std::size_t ambient_dim, const std::vector<Vector>& vectors);

  const Field& field() const { return field_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  bool is_invariant_under(const ExactMatrix& m) const;
  /// Basis vectors as the columns of an ambient_dim x dim matrix.
  ExactMatrix as_columns() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.field_ == b.field_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  Field field_;
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
  std::vector<std::size_t> pivots_;

  friend class EchelonBasis;
};

/// Incrementally built, fully reduced echelon basis.
class EchelonBasis {
 public:
  EchelonBasis(Field field, std::size_t ambient_dim) : field_(field), ambient_(ambient_dim) {}
  /// Reduce v against the basis; zero iff v lies in the span.
  Vector reduce(Vector v) const;
  /// Adds v when it is not already in the span; returns whether it was added.
  bool insert(const Vector& v);
  std::size_t dim() const { return rows_.size(); }
  Subspace to_subspace() const;

 private:
  Field field_;
  std::size_t ambient_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel(const ExactMatrix& m);
Subspace column_space(const ExactMatrix& m);
/// Vectors orthogonal (under the plain dot product) to every vector of s.
Subspace annihilator(const Subspace& s);

/// Characteristic polynomial det(x I - M), coefficients lowest degree first.
std::vector<FieldElement> characteristic_polynomial(const ExactMatrix& m);

struct PolynomialRoots {
  std::vector<FieldElement> roots;          // distinct, canonical order
  std::vector<std::size_t> multiplicities;  // parallel to roots
  std::size_t residual_degree = 0;          // degree of the root-free factor
};

/// Roots lying in the coefficient field. Exhaustive over small finite fields,
/// rational-root candidates over Q, and through a proper subfield when every
/// coefficient lies in one. EigenvalueSearchFailed when the rational-root
/// candidate set cannot be enumerated.
PolynomialRoots roots_in_field(const std::vector<FieldElement>& coeffs);

struct Eigenpair {
  FieldElement value;
  Subspace space;
};

struct EigenDecomposition {
  std::vector<Eigenpair> pairs;  // canonical eigenvalue order
  bool diagonalizable = false;
};

/// All eigenvalues of M in its field with their eigenspaces.
/// EigenvalueSearchFailed when part of the spectrum lies outside the field.
EigenDecomposition eigen_decompose(const ExactMatrix& m);
/// Same, but eigenvalues are taken from caller-supplied candidates; the
/// decomposition is still checked against the characteristic polynomial.
EigenDecomposition eigen_decompose(const ExactMatrix& m, std::span<const FieldElement> candidates);

/// Smallest subspace containing v and invariant under every generator.
Subspace spin_up(const Vector& v, std::span<const ExactMatrix> generators);

enum class Irreducibility { irreducible, reducible, inconclusive };
std::string_view to_string(Irreducibility v) noexcept;

struct NortonOptions {
  std::uint64_t seed = 0;
  int random_words = 48;
  /// Over finite fields, kernels with at most this many projective points
  /// are searched exhaustively when the nullity exceeds one.
  std::uint64_t projective_point_cap = 4096;
};

struct IrreducibilityResult {
  Irreducibility verdict = Irreducibility::inconclusive;
  std::optional<Subspace> witness;  // proper nonzero invariant subspace
  std::string pivot;                // description of the deciding algebra element
  std::uint64_t seed = 0;
  int random_words_tried = 0;
};

/// Norton's criterion on the module spanned by `generators`, trying the
/// supplied singular `pivots` first and then random algebra elements.
IrreducibilityResult norton_test(std::span<const ExactMatrix> generators, std::span<const ExactMatrix> pivots,
                                 const NortonOptions& options = {});

/// Irreducibility of the pair (A, A*). Both must be diagonalizable over their
/// field (NotDiagonalizable otherwise); eigenvalue shifts of A* then A are the
/// preferred pivots, sorted by nullity.
IrreducibilityResult is_irreducible_pair(const ExactMatrix& a, const ExactMatrix& a_star,
                                         const NortonOptions& options = {});

/// Every subspace invariant under all generators, found by enumerating all
/// subspaces. Prime fields with p <= 3 and dimension <= 4 only (TooLarge).
std::vector<Subspace> brute_force_invariant_subspaces(const ExactMatrix& a, const ExactMatrix& a_star);

}  // namespace tdp
