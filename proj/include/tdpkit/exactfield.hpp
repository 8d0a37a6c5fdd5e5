#pragma once

// Exact scalar fields: Q, GF(p) and towers of at most two quadratic
// extensions K(sqrt(delta)) over either.
//
// Field descriptors are interned, so a Field is a cheap handle and two
// handles compare equal exactly when the descriptors are structurally equal.
// Elements are immutable values in canonical form: rationals in lowest terms
// with positive denominator, residues in [0, p), extension elements as a pair
// (u, v) over the base meaning u + v*sqrt(delta).

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "tdpkit/error.hpp"

namespace tdp {

enum class FieldKind { rational, prime, quadratic_ext };

class FieldElement;

namespace detail {
struct FieldData;
struct QuadParts;
}  // namespace detail

inline constexpr int kMaxExtensionHeight = 2;

class Field {
 public:
  /// The rationals. Also the value of a default-constructed handle.
  Field();

  static Field rational();
  /// GF(p); throws InvalidField unless p is prime and p < 2^62.
  static Field prime(std::uint64_t p);
  /// base(sqrt(delta)) where base = delta.field(). delta must be a non-square
  /// in the base and the resulting tower height must not exceed two.
  static Field quadratic_extension(const FieldElement& delta);

  FieldKind kind() const;
  std::uint64_t characteristic() const;
  /// p for a prime field; throws InvalidField otherwise.
  std::uint64_t modulus() const;
  /// Number of quadratic steps above the ground field (0 for Q and GF(p)).
  int height() const;
  /// Immediate base of an extension; throws NotAnExtension for ground fields.
  Field base() const;
  /// The ground field at the bottom of the tower (Q or GF(p)).
  Field ground() const;
  const FieldElement& delta() const;

  bool is_finite() const { return characteristic() != 0; }
  /// Number of elements when finite and representable in 64 bits.
  std::optional<std::uint64_t> size() const;
  /// True when this field is `sub` or a tower built on top of `sub`.
  bool extends(const Field& sub) const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(long long v) const;
  FieldElement from_rational(const mpq_class& v) const;

  /// Human-readable name: "Q", "GF(13)", "Q(sqrt(2))".
  std::string name() const;

  friend bool operator==(const Field& a, const Field& b) { return a.data_ == b.data_; }
  friend bool operator!=(const Field& a, const Field& b) { return a.data_ != b.data_; }

 private:
  explicit Field(const detail::FieldData* data) : data_(data) {}
  const detail::FieldData* data_;

  friend class FieldElement;
  friend struct detail::FieldData;
};

class FieldElement {
 public:
  /// Rational zero.
  FieldElement();

  const Field& field() const { return field_; }

  bool is_zero() const;
  bool is_one() const;

  /// Rational payload; throws InvalidField for other kinds.
  const mpq_class& rational() const;
  /// Residue payload in [0, p).
  std::uint64_t residue() const;
  /// Base-field components of an extension element u + v*sqrt(delta).
  const FieldElement& ext_u() const;
  const FieldElement& ext_v() const;
  static FieldElement from_parts(const Field& ext, FieldElement u, FieldElement v);

  FieldElement operator-() const;
  FieldElement inverse() const;
  /// Integer power; negative exponents invert (DivisionByZero on zero).
  FieldElement pow(long long e) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }

  /// Structural equality; elements of different fields are never equal.
  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  /// Canonical scalar string ("n", "n/m", "n mod p", "u + v * sqrt(delta)").
  std::string to_string() const;

 private:
  using Payload = std::variant<mpq_class, std::uint64_t, std::shared_ptr<const detail::QuadParts>>;
  FieldElement(Field f, Payload p) : field_(f), value_(std::move(p)) {}

  Field field_;
  Payload value_;

  friend class Field;
  friend struct detail::FieldData;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

/// Deterministic total order used wherever output must not depend on
/// discovery order: numeric for Q, by residue for GF(p), lexicographic on
/// (u, v) for extensions. Not compatible with field operations.
bool canonical_less(const FieldElement& a, const FieldElement& b);

/// Parse a scalar string into `field`. Accepts every canonical form plus the
/// lenient forms "n" and "n/m" in any field (mapped through the ground field).
FieldElement parse_scalar(std::string_view text, const Field& field);

/// Square root inside x's own field, if one exists.
std::optional<FieldElement> sqrt_in_field(const FieldElement& x);

struct QuadraticRoots {
  Field field;                      // field holding the roots
  std::vector<FieldElement> roots;  // distinct roots, canonical order
  bool extended = false;            // true when `field` was freshly built
};

/// Roots of a2*x^2 + a1*x + a0. Over Q and over extensions of height < 2 a
/// missing root triggers construction of base(sqrt(discriminant)); over a
/// prime field only residues are searched unless `extend_finite` is set.
QuadraticRoots solve_quadratic(const FieldElement& a2, const FieldElement& a1, const FieldElement& a0,
                               bool extend_finite = false);

/// Canonical inclusion of x into a tower `target` built over x's field.
FieldElement embed(const FieldElement& x, const Field& target);
/// Inverse of embed for elements that lie in `sub`; NotInSubfield otherwise.
FieldElement project(const FieldElement& x, const Field& sub);
/// Whether x lies in the subfield `sub` of its tower.
bool lies_in(const FieldElement& x, const Field& sub);

/// Uniform-ish random element: residues uniform over GF(p) towers, small
/// numerators/denominators bounded by `magnitude` over Q.
FieldElement random_element(const Field& field, std::mt19937_64& rng, int magnitude = 9);

/// All elements of a finite field, canonical order. TooLarge above `cap`.
std::vector<FieldElement> enumerate_elements(const Field& field, std::uint64_t cap = 1u << 20);

}  // namespace tdp
