#pragma once

// Polynomials in x1..xd with rational coefficients. Terms are kept as
// ordered words so that x1*x2 - x2*x1 is not cancelled before it is
// evaluated at matrices; commutative evaluation ignores the order.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "tdpkit/exactlinalg.hpp"

namespace tdp {

class Polynomial {
 public:
  using Word = std::vector<std::size_t>;  // variable indices, 1-based; empty word = constant

  Polynomial() = default;
  static Polynomial constant(const mpq_class& c);
  static Polynomial variable(std::size_t i);
  /// Grammar: sums of products of factors, factor = [-] (number[/number] |
  /// x<i> | (expr)) [^ exponent]. Parse errors carry the column.
  static Polynomial parse(std::string_view text);

  const std::map<Word, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Largest variable index used (0 for constants).
  std::size_t max_variable() const;
  std::size_t total_degree() const;

  /// f(xs[0], ..., xs[n-1]) with coefficients mapped into the field of xs.
  FieldElement evaluate(const std::vector<FieldElement>& xs, const Field& field) const;
  /// Each word x_i1...x_ik becomes ms[i1-1] * ... * ms[ik-1]; a constant c
  /// becomes c * unit.
  ExactMatrix evaluate(const std::vector<ExactMatrix>& ms, const ExactMatrix& unit) const;

  /// Canonical text, reparseable by parse().
  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial pow(unsigned e) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

 private:
  void add_term(const Word& w, const mpq_class& c);
  std::map<Word, mpq_class> terms_;
};

/// Every monomial x_1^e1 ... x_n^en with total degree <= max_degree, in
/// graded order starting from 1.
std::vector<Polynomial> monomials_up_to(std::size_t variables, std::size_t max_degree);

}  // namespace tdp
