#pragma once

// The tau/eta polynomials, split sequences and parameter arrays of sharp
// tridiagonal systems, and the three conditions a parameter array satisfies.

#include <optional>
#include <string>
#include <vector>

#include "tdpkit/tdsystem.hpp"

namespace tdp {

/// prod_k (x - roots[k]), kept factored.
class MonicShiftProduct {
 public:
  MonicShiftProduct(Field field, std::vector<FieldElement> roots);

  const Field& field() const { return field_; }
  const std::vector<FieldElement>& roots() const { return roots_; }
  std::size_t degree() const { return roots_.size(); }

  FieldElement operator()(const FieldElement& x) const;
  ExactMatrix operator()(const ExactMatrix& m) const;
  /// Expanded coefficients, lowest degree first; the last one is 1.
  std::vector<FieldElement> coefficients() const;

 private:
  Field field_;
  std::vector<FieldElement> roots_;
};

enum class ShiftFamily { tau, eta, tau_star, eta_star };

/// tau_i = (x - s_0)...(x - s_{i-1}) and eta_i = (x - s_d)...(x - s_{d-i+1})
/// for the sequence s passed in; the starred families are the same products
/// taken over a dual eigenvalue sequence. IndexOutOfRange unless i <= d.
MonicShiftProduct tau_eta_build(const std::vector<FieldElement>& sequence, ShiftFamily which, std::size_t i);

struct ParameterArray {
  std::size_t d = 0;
  std::vector<FieldElement> theta, theta_star, zeta;

  const Field& field() const { return theta.front().field(); }
  friend bool operator==(const ParameterArray& a, const ParameterArray& b) {
    return a.d == b.d && a.theta == b.theta && a.theta_star == b.theta_star && a.zeta == b.zeta;
  }
};

/// zeta_i from E*_0 tau_i(A) E*_0 = zeta_i E*_0 / ((theta*_0 - theta*_1)...(theta*_0 - theta*_i)).
/// NotSharp unless rho_0 = 1; NotScalarMultiple if some product is not a
/// multiple of E*_0.
std::vector<FieldElement> split_sequence(const TriDiagonalSystem& s);

struct ConditionVerdict {
  Verdict verdict = Verdict::skipped;
  std::string detail;
};

struct ConditionReport {
  ConditionVerdict distinct;  // (i)
  ConditionVerdict ratios;    // (ii)
  ConditionVerdict split;     // (iii)
  std::optional<FieldElement> common_ratio;  // set when d >= 3 and (ii) holds
  FieldElement sum;                          // sum_i eta_{d-i}(theta_0) eta*_{d-i}(theta*_0) zeta_i

  bool passed() const {
    return distinct.verdict == Verdict::pass && ratios.verdict == Verdict::pass && split.verdict == Verdict::pass;
  }
};

ConditionReport check_conjecture_conditions(const ParameterArray& p);

/// Parameter array of a sharp system; OnlyIfViolated if it fails any of the
/// three conditions.
ParameterArray extract_parameter_array(const TriDiagonalSystem& s);

}  // namespace tdp
